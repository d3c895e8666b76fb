#ifndef BGESCORE_SCORER_HPP
#define BGESCORE_SCORER_HPP

#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "bgescore/dag.hpp"
#include "bgescore/data.hpp"
#include "bgescore/linalg.hpp"

namespace bge {

// Everything needed to score families against one dataset/prior pair:
// posterior matrix, both matrix inverses, and per-parent-count constant
// terms.  Immutable once built; safe to share across threads.
class ScoreContext {
 public:
  static ScoreContext make(const Dataset& data, PriorConfig prior);
  static ScoreContext make(SuffStats stats, PriorConfig prior);

  int num_vars() const { return num_vars_; }
  int num_obs() const { return stats_.num_obs; }
  const PriorConfig& prior() const { return prior_; }
  const SuffStats& stats() const { return stats_; }
  const SpdMatrix& t() const { return prior_.t; }
  const SpdMatrix& r() const { return r_; }
  const Matrix& t_inverse() const { return t_inv_; }
  const Matrix& r_inverse() const { return r_inv_; }

  // ln(alpha_mu / (N + alpha_mu))
  double log_alpha_ratio() const { return log_alpha_ratio_; }
  // Parent-count-indexed constant part of the local score (gamma-function
  // and alpha_mu terms), one entry per l in [0, n].  Throws DomainError
  // for the rare l where the legacy gamma argument leaves its domain.
  double family_const(ScoreMode mode, int l) const;

 private:
  ScoreContext() = default;
  PriorConfig prior_;
  SuffStats stats_;
  SpdMatrix r_;
  Matrix t_inv_, r_inv_;
  int num_vars_ = 0;
  double log_alpha_ratio_ = 0.0;
  std::vector<double> bge_const_, hg95_const_;
};

// Log marginal likelihood of the data restricted to the variable subset
// y (log of the subset factor).  Empty subset scores 0.  The mode picks
// the formula variant; Bge and Gh02 share one formula and differ only in
// how submatrices are selected.
double log_marginal_subset(const ScoreContext& ctx, const IndexSet& y,
                           ScoreMode mode = ScoreMode::Bge);

// Subset marginal under the legacy dimension bookkeeping: gamma arguments
// (N + alpha_w)/2 and alpha_w/2, determinant exponents alpha_w/2 and
// (N + alpha_w)/2.  Throws DomainError when alpha_w <= |y| - 1.
double legacy_hg95_log_marginal_subset(const ScoreContext& ctx, const IndexSet& y);

// Local score of the family (node | parents): the subset-marginal ratio
// collapsed to single gamma terms, four log-determinants per call.
double local_log_score(const ScoreContext& ctx, int node, const IndexSet& parents,
                       ScoreMode mode = ScoreMode::Bge);

// Local score bundled with the family it describes (report plumbing).
struct LocalScore {
  double value = 0.0;
  int node = 0;
  IndexSet parents;
  ScoreMode mode = ScoreMode::Bge;
};
LocalScore local_score_record(const ScoreContext& ctx, int node, const IndexSet& parents,
                              ScoreMode mode = ScoreMode::Bge);

// Same quantity computed the direct way, as a difference of two subset
// marginals with full multivariate gamma terms.  Cross-checks
// local_log_score; not used in production paths.
double local_log_score_naive(const ScoreContext& ctx, int node, const IndexSet& parents,
                             ScoreMode mode = ScoreMode::Bge);

// Thread-safe memo of local scores keyed by (mode, node, parent set).
class ScoreCache {
 public:
  ScoreCache() = default;
  ScoreCache(const ScoreCache&) = delete;
  ScoreCache& operator=(const ScoreCache&) = delete;

  double local(const ScoreContext& ctx, int node, const IndexSet& parents, ScoreMode mode);

  std::uint64_t hits() const { return hits_.load(); }
  // Fresh computations; every miss triggers exactly one, so misses ==
  // evaluations.
  std::uint64_t evaluations() const { return evals_.load(); }
  std::uint64_t misses() const { return evaluations(); }
  std::uint64_t lookups() const { return hits() + evaluations(); }
  std::size_t size() const;
  void clear();

 private:
  struct Key {
    int mode;
    int node;
    std::vector<int> parents;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };
  mutable std::shared_mutex mu_;
  std::unordered_map<Key, double, KeyHash> map_;
  std::atomic<std::uint64_t> hits_{0};
  std::atomic<std::uint64_t> evals_{0};
};

// Total log score of an acyclic graph: sum of local scores over nodes.
// Throws CyclicGraph otherwise.
double dag_log_score(const ScoreContext& ctx, const Dag& g, ScoreCache& cache,
                     ScoreMode mode = ScoreMode::Bge);
double dag_log_score(const ScoreContext& ctx, const Dag& g, ScoreMode mode = ScoreMode::Bge);

// Score difference dag_log_score(apply_move(g, m)) - dag_log_score(g)
// computed from the one or two families the move touches.  The move must
// be legal on g (acyclicity included).
double score_delta(const ScoreContext& ctx, ScoreCache& cache, const Dag& g, const Move& m,
                   ScoreMode mode = ScoreMode::Bge);

}  // namespace bge

#endif
