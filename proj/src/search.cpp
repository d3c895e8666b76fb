#include "bgescore/search.hpp"

#include <cassert>
#include <cmath>
#include <random>

namespace bge {

namespace {

int effective_max_parents(int configured, int n) {
  if (configured < 0) throw ConfigError("max_parents must be nonnegative");
  if (configured == 0 || configured > n - 1) return n - 1;
  return configured;
}

bool within_parent_limit(const Dag& g, const Move& m, int max_parents) {
  switch (m.kind) {
    case MoveKind::AddEdge:
      return g.parents(m.to).size() < max_parents;
    case MoveKind::RemoveEdge:
      return true;
    default:
      return g.parents(m.from).size() < max_parents;
  }
}

double prior_delta(const StructurePrior& prior, const Move& m) {
  switch (m.kind) {
    case MoveKind::AddEdge:
      return -prior.edge_penalty;
    case MoveKind::RemoveEdge:
      return prior.edge_penalty;
    default:
      return 0.0;
  }
}

}  // namespace

std::vector<Move> legal_moves(const Dag& g, int max_parents) {
  const int n = g.node_count();
  const int cap = effective_max_parents(max_parents, n);
  std::vector<Move> moves;
  for (MoveKind kind : {MoveKind::AddEdge, MoveKind::RemoveEdge, MoveKind::ReverseEdge})
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) {
        if (u == v) continue;
        const Move m{kind, u, v};
        if (move_is_legal(g, m) && within_parent_limit(g, m, cap)) moves.push_back(m);
      }
  return moves;
}

SearchResult hill_climb(const ScoreContext& ctx, ScoreCache& cache, const SearchConfig& cfg) {
  const int n = ctx.num_vars();
  const int cap = effective_max_parents(cfg.max_parents, n);
  if (cfg.restarts < 0) throw ConfigError("restarts must be nonnegative");
  if (cfg.max_iterations < 0) throw ConfigError("max_iterations must be nonnegative");
  if (!(cfg.restart_edge_prob >= 0.0 && cfg.restart_edge_prob <= 1.0))
    throw ConfigError("restart_edge_prob must lie in [0, 1]");
  std::mt19937_64 rng(cfg.seed);

  SearchResult result{Dag(n)};
  bool have_best = false;
  for (int restart = 0; restart <= cfg.restarts; ++restart) {
    Dag g = restart == 0 ? Dag(n) : random_dag(n, cap, cfg.restart_edge_prob, rng());
    double score = dag_log_score(ctx, g, cache, cfg.mode);
    result.trace.push_back({restart, 0, std::nullopt, 0.0, score});
    for (int step = 1; step <= cfg.max_iterations; ++step) {
      const auto moves = legal_moves(g, cap);
      double best_delta = cfg.improvement_threshold;
      const Move* best_move = nullptr;
      for (const auto& m : moves) {
        const double delta = score_delta(ctx, cache, g, m, cfg.mode);
        if (delta > best_delta) {
          best_delta = delta;
          best_move = &m;
        }
      }
      if (!best_move) break;
      g = apply_move(g, *best_move);
      assert(is_acyclic(g));
      score += best_delta;
      result.trace.push_back({restart, step, *best_move, best_delta, score});
    }
    if (!have_best || score > result.best_score) {
      have_best = true;
      result.best = g;
      result.best_score = score;
    }
  }
  result.cache_evaluations = cache.evaluations();
  result.cache_hits = cache.hits();
  return result;
}

double mh_acceptance(const ScoreContext& ctx, ScoreCache& cache, const Dag& g,
                     const Move& m, const McmcConfig& cfg) {
  const int cap = effective_max_parents(cfg.max_parents, ctx.num_vars());
  if (!move_is_legal(g, m) || !within_parent_limit(g, m, cap))
    throw IllegalMove("proposal is not legal: " + to_string(m, g));
  const double delta = score_delta(ctx, cache, g, m, cfg.mode);
  const Dag next = apply_move(g, m);
  const auto nbd_here = legal_moves(g, cap).size();
  const auto nbd_there = legal_moves(next, cap).size();
  const double log_ratio = delta + prior_delta(cfg.structure_prior, m) +
                           std::log(static_cast<double>(nbd_here) / nbd_there);
  return std::min(1.0, std::exp(log_ratio));
}

McmcResult structure_mcmc(const ScoreContext& ctx, ScoreCache& cache, const McmcConfig& cfg,
                          const Dag& start) {
  const int n = ctx.num_vars();
  const int cap = effective_max_parents(cfg.max_parents, n);
  if (cfg.iterations < 1) throw ConfigError("iterations must be positive");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.iterations)
    throw ConfigError("burn_in must lie in [0, iterations)");
  if (cfg.thinning < 1) throw ConfigError("thinning must be positive");
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Dag g = start;
  double score = dag_log_score(ctx, g, cache, cfg.mode);
  McmcResult result{{}, 0.0, g, score};
  std::uint64_t accepted = 0;
  for (int it = 1; it <= cfg.iterations; ++it) {
    const auto moves = legal_moves(g, cap);
    if (!moves.empty()) {
      std::uniform_int_distribution<size_t> pick(0, moves.size() - 1);
      const Move& m = moves[pick(rng)];
      const double alpha = mh_acceptance(ctx, cache, g, m, cfg);
      if (unit(rng) < alpha) {
        score += score_delta(ctx, cache, g, m, cfg.mode);
        g = apply_move(g, m);
        ++accepted;
      }
    }
    assert(is_acyclic(g));
    if (it > cfg.burn_in && (it - cfg.burn_in) % cfg.thinning == 0)
      result.samples.push_back({g, score, it});
  }
  result.acceptance_rate = static_cast<double>(accepted) / cfg.iterations;
  result.last = g;
  result.last_score = score;
  result.cache_evaluations = cache.evaluations();
  result.cache_hits = cache.hits();
  return result;
}

McmcResult structure_mcmc(const ScoreContext& ctx, ScoreCache& cache, const McmcConfig& cfg) {
  return structure_mcmc(ctx, cache, cfg, Dag(ctx.num_vars()));
}

}  // namespace bge
