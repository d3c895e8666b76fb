#ifndef BGESCORE_SEARCH_HPP
#define BGESCORE_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "bgescore/dag.hpp"
#include "bgescore/scorer.hpp"

namespace bge {

// All moves legal on g (acyclicity respected) whose result keeps every
// node at or below max_parents.  Deterministic order: adds, removes,
// reversals, each sorted by (from, to).
std::vector<Move> legal_moves(const Dag& g, int max_parents);

// Log prior over structures: 0 for the uniform prior, or -penalty per
// edge when edge_penalty > 0.
struct StructurePrior {
  double edge_penalty = 0.0;  // gamma in  log p(g) = -gamma * |edges|
  double log_prior(const Dag& g) const { return -edge_penalty * g.edge_count(); }
};

struct SearchConfig {
  ScoreMode mode = ScoreMode::Bge;
  int max_parents = 0;       // 0 means n - 1
  int max_iterations = 1000;  // moves applied per start; 0 freezes the start graph
  int restarts = 0;          // extra random restarts after the empty-graph start
  double restart_edge_prob = 0.3;
  // A move must beat the current score by more than this to be taken.
  double improvement_threshold = 1e-12;
  std::uint64_t seed = 0;
};

struct TraceEntry {
  int restart = 0;
  int step = 0;
  std::optional<Move> move;  // empty for the entry recording a start graph
  double delta = 0.0;
  double log_score = 0.0;
};

struct SearchResult {
  Dag best;
  double best_score = 0.0;
  std::vector<TraceEntry> trace;
  std::uint64_t cache_evaluations = 0;
  std::uint64_t cache_hits = 0;
};

// Greedy hill climbing over single-edge moves: from each start, repeatedly
// apply the best strictly-improving move (delta > improvement_threshold)
// until none exists or max_iterations moves were taken.  Start 0 is the
// empty graph; each restart draws a random graph.  Ties broken by move
// enumeration order.
SearchResult hill_climb(const ScoreContext& ctx, ScoreCache& cache, const SearchConfig& cfg);

struct McmcConfig {
  ScoreMode mode = ScoreMode::Bge;
  int max_parents = 0;  // 0 means n - 1
  int iterations = 10000;
  int burn_in = 1000;
  int thinning = 10;  // keep every thinning-th post-burn-in state
  StructurePrior structure_prior;
  std::uint64_t seed = 0;
};

struct McmcSample {
  Dag graph;
  double log_score;  // data score; the structure prior enters acceptance only
  int iteration;
};

struct McmcResult {
  std::vector<McmcSample> samples;
  double acceptance_rate = 0.0;
  Dag last;
  double last_score = 0.0;
  std::uint64_t cache_evaluations = 0;
  std::uint64_t cache_hits = 0;
};

// Metropolis-Hastings acceptance probability for proposing m from g:
//   min(1, exp(delta_score + delta_log_prior) * |nbd(g)| / |nbd(g')|)
// where nbd counts legal moves under cfg.max_parents.  Exposed so chains
// can be checked against hand-computed transition probabilities.
double mh_acceptance(const ScoreContext& ctx, ScoreCache& cache, const Dag& g,
                     const Move& m, const McmcConfig& cfg);

// Random walk over DAGs: propose uniformly from the legal moves of the
// current graph, accept with mh_acceptance.  Starts at the empty graph
// unless a start graph is given.
McmcResult structure_mcmc(const ScoreContext& ctx, ScoreCache& cache, const McmcConfig& cfg);
McmcResult structure_mcmc(const ScoreContext& ctx, ScoreCache& cache, const McmcConfig& cfg,
                          const Dag& start);

}  // namespace bge

#endif
