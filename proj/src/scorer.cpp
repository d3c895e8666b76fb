#include "bgescore/scorer.hpp"

#include <cmath>
#include <limits>
#include <mutex>

namespace bge {

namespace {

constexpr long double LOG_PI = 1.14472988584940017414342735135305871L;

long double lgamma_half_ld(long double x) {
  // ln Gamma(x / 2)
  return lgammal(x / 2.0L);
}

// ln Gamma_l(x/2) in extended precision; domain checked by callers.
long double log_multigamma_ld(int l, long double x) {
  long double acc = 0.25L * l * (l - 1) * LOG_PI;
  for (int j = 1; j <= l; ++j) acc += lgamma_half_ld(x + 1 - j);
  return acc;
}

}  // namespace

ScoreContext ScoreContext::make(SuffStats stats, PriorConfig prior) {
  const int n = stats.num_vars();
  validate_prior(prior, n);
  ScoreContext ctx;
  ctx.num_vars_ = n;
  ctx.r_ = posterior_matrix(stats, prior);
  ctx.t_inv_ = spd_inverse(prior.t).matrix();
  ctx.r_inv_ = spd_inverse(ctx.r_).matrix();
  ctx.stats_ = std::move(stats);
  ctx.prior_ = std::move(prior);

  const long double N = ctx.stats_.num_obs;
  const long double am = ctx.prior_.alpha_mu;
  const long double aw = ctx.prior_.alpha_w;
  ctx.log_alpha_ratio_ = static_cast<double>(std::log(am / (N + am)));
  const long double half_ratio = 0.5L * std::log(am / (N + am));
  ctx.bge_const_.resize(n + 1);
  ctx.hg95_const_.resize(n + 1);
  for (int l = 0; l <= n; ++l) {
    ctx.bge_const_[l] = static_cast<double>(
        half_ratio + lgamma_half_ld(N + aw - n + l + 1) - lgamma_half_ld(aw - n + l + 1));
    // The legacy entry needs alpha_w > l; families never reach l = n, but
    // the slot exists, so mark it unusable rather than feed lgamma a
    // nonpositive argument.
    ctx.hg95_const_[l] =
        aw > l ? static_cast<double>(half_ratio + lgamma_half_ld(N + aw - l) -
                                     lgamma_half_ld(aw - l))
               : std::numeric_limits<double>::quiet_NaN();
  }
  return ctx;
}

ScoreContext ScoreContext::make(const Dataset& data, PriorConfig prior) {
  return make(sufficient_stats(data), std::move(prior));
}

double ScoreContext::family_const(ScoreMode mode, int l) const {
  if (l < 0 || l > num_vars_) throw DomainError("parent count out of range");
  const double value = mode == ScoreMode::Hg95 ? hg95_const_[l] : bge_const_[l];
  if (!std::isfinite(value))
    throw DomainError("legacy gamma term undefined for this parent count");
  return value;
}

namespace {

void check_family(const ScoreContext& ctx, int node, const IndexSet& parents) {
  const int n = ctx.num_vars();
  if (node < 0 || node >= n) throw InvalidFamily("node index out of range");
  if (!parents.empty() && parents[parents.size() - 1] >= n)
    throw InvalidFamily("parent index out of range");
  if (parents.contains(node)) throw InvalidFamily("node contained in its own parent set");
}

// log det of the selected submatrix under the mode's selection rule:
// plain principal submatrix, or selection from the precomputed inverse.
long double mode_logdet(const ScoreContext& ctx, const IndexSet& y, ScoreMode mode,
                        bool posterior) {
  if (y.empty()) return 0.0L;
  if (mode == ScoreMode::Gh02)
    return -logdet_submatrix(posterior ? ctx.r_inverse() : ctx.t_inverse(), y);
  return logdet_submatrix(posterior ? ctx.r() : ctx.t(), y);
}

long double subset_ld(const ScoreContext& ctx, const IndexSet& y, ScoreMode mode) {
  const int l = y.size();
  if (l == 0) return 0.0L;
  const int n = ctx.num_vars();
  if (y[l - 1] >= n) throw DomainError("subset index out of range");
  const long double N = ctx.num_obs();
  const long double am = ctx.prior().alpha_mu;
  const long double aw = ctx.prior().alpha_w;
  const long double ld_t = mode_logdet(ctx, y, mode, false);
  const long double ld_r = mode_logdet(ctx, y, mode, true);
  long double value = 0.5L * l * std::log(am / (N + am)) - 0.5L * l * N * LOG_PI;
  if (mode == ScoreMode::Hg95) {
    if (!(aw > l - 1)) throw DomainError("subset too large for the legacy gamma term");
    value += log_multigamma_ld(l, N + aw) - log_multigamma_ld(l, aw);
    value += 0.5L * aw * ld_t - 0.5L * (N + aw) * ld_r;
  } else {
    value += log_multigamma_ld(l, N + aw - n + l) - log_multigamma_ld(l, aw - n + l);
    value += 0.5L * (aw - n + l) * ld_t - 0.5L * (N + aw - n + l) * ld_r;
  }
  return value;
}

long double local_ld(const ScoreContext& ctx, int node, const IndexSet& parents,
                     ScoreMode mode) {
  check_family(ctx, node, parents);
  const int l = parents.size();
  const int n = ctx.num_vars();
  const long double N = ctx.num_obs();
  const long double aw = ctx.prior().alpha_w;
  const IndexSet family = parents.with(node);
  const long double ld_t_fam = mode_logdet(ctx, family, mode, false);
  const long double ld_r_fam = mode_logdet(ctx, family, mode, true);
  const long double ld_t_pa = mode_logdet(ctx, parents, mode, false);
  const long double ld_r_pa = mode_logdet(ctx, parents, mode, true);
  long double value = ctx.family_const(mode, l) - 0.5L * N * LOG_PI;
  if (mode == ScoreMode::Hg95) {
    value += 0.5L * aw * (ld_t_fam - ld_t_pa) - 0.5L * (N + aw) * (ld_r_fam - ld_r_pa);
  } else {
    value += 0.5L * (aw - n + l + 1) * ld_t_fam - 0.5L * (N + aw - n + l + 1) * ld_r_fam;
    value -= 0.5L * (aw - n + l) * ld_t_pa - 0.5L * (N + aw - n + l) * ld_r_pa;
  }
  return value;
}

}  // namespace

double log_marginal_subset(const ScoreContext& ctx, const IndexSet& y, ScoreMode mode) {
  return static_cast<double>(subset_ld(ctx, y, mode));
}

double local_log_score(const ScoreContext& ctx, int node, const IndexSet& parents,
                       ScoreMode mode) {
  return static_cast<double>(local_ld(ctx, node, parents, mode));
}

double local_log_score_naive(const ScoreContext& ctx, int node, const IndexSet& parents,
                             ScoreMode mode) {
  check_family(ctx, node, parents);
  return static_cast<double>(subset_ld(ctx, parents.with(node), mode) -
                             subset_ld(ctx, parents, mode));
}

double legacy_hg95_log_marginal_subset(const ScoreContext& ctx, const IndexSet& y) {
  return log_marginal_subset(ctx, y, ScoreMode::Hg95);
}

LocalScore local_score_record(const ScoreContext& ctx, int node, const IndexSet& parents,
                              ScoreMode mode) {
  return LocalScore{local_log_score(ctx, node, parents, mode), node, parents, mode};
}

std::size_t ScoreCache::KeyHash::operator()(const Key& k) const {
  std::size_t h = std::hash<int>{}(k.mode * 1315423911 + k.node);
  for (int p : k.parents) h = h * 1000003u + static_cast<std::size_t>(p) + 0x9e3779b9u;
  return h;
}

double ScoreCache::local(const ScoreContext& ctx, int node, const IndexSet& parents,
                         ScoreMode mode) {
  Key key{static_cast<int>(mode), node, parents.indices()};
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  const double value = local_log_score(ctx, node, parents, mode);
  evals_.fetch_add(1, std::memory_order_relaxed);
  std::unique_lock lock(mu_);
  // A racing writer may have stored the key first; values are identical
  // (pure function), so keeping either is fine.
  auto [it, inserted] = map_.emplace(std::move(key), value);
  return it->second;
}

std::size_t ScoreCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

void ScoreCache::clear() {
  std::unique_lock lock(mu_);
  map_.clear();
  hits_.store(0);
  evals_.store(0);
}

double dag_log_score(const ScoreContext& ctx, const Dag& g, ScoreCache& cache,
                     ScoreMode mode) {
  if (g.node_count() != ctx.num_vars())
    throw DimensionMismatch("graph and score context have different variable counts");
  if (!is_acyclic(g)) throw CyclicGraph("scoring needs an acyclic graph");
  long double total = 0.0L;
  for (int v = 0; v < g.node_count(); ++v) total += cache.local(ctx, v, g.parents(v), mode);
  return static_cast<double>(total);
}

double dag_log_score(const ScoreContext& ctx, const Dag& g, ScoreMode mode) {
  ScoreCache cache;
  return dag_log_score(ctx, g, cache, mode);
}

double score_delta(const ScoreContext& ctx, ScoreCache& cache, const Dag& g, const Move& m,
                   ScoreMode mode) {
  if (g.node_count() != ctx.num_vars())
    throw DimensionMismatch("graph and score context have different variable counts");
  if (!move_is_legal(g, m)) throw IllegalMove("move is not legal: " + to_string(m, g));
  const auto local = [&](int node, const IndexSet& ps) {
    return cache.local(ctx, node, ps, mode);
  };
  switch (m.kind) {
    case MoveKind::AddEdge:
      return local(m.to, g.parents(m.to).with(m.from)) - local(m.to, g.parents(m.to));
    case MoveKind::RemoveEdge:
      return local(m.to, g.parents(m.to).without(m.from)) - local(m.to, g.parents(m.to));
    default: {
      const double child_part = local(m.to, g.parents(m.to).without(m.from)) -
                                local(m.to, g.parents(m.to));
      const double parent_part = local(m.from, g.parents(m.from).with(m.to)) -
                                 local(m.from, g.parents(m.from));
      return child_part + parent_part;
    }
  }
}

}  // namespace bge
