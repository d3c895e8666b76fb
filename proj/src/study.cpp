#include "bgescore/study.hpp"

#include <cmath>
#include <random>

namespace bge {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("slope fit needs matching vectors of length >= 2");
  const int k = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < k; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < k; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw DomainError("slope fit needs at least two distinct x values");
  return sxy / sxx;
}

BiasStudyResult bias_study(const BiasStudyConfig& cfg) {
  if (cfg.num_vars < 2) throw ConfigError("bias study needs at least two variables");
  if (cfg.max_parent_count < 0 || cfg.max_parent_count > cfg.num_vars - 1)
    throw ConfigError("max_parent_count must lie in [0, num_vars - 1]");
  if (cfg.sample_sizes.size() < 2)
    throw ConfigError("bias study needs at least two sample sizes");
  for (int s : cfg.sample_sizes)
    if (s < 2) throw ConfigError("sample sizes must be at least 2");

  BiasStudyResult result;
  result.sample_sizes = cfg.sample_sizes;
  const int node = cfg.num_vars - 1;

  // One context per sample size, all derived from the same base seed.
  std::mt19937_64 seeder(cfg.seed);
  std::vector<ScoreContext> contexts;
  contexts.reserve(cfg.sample_sizes.size());
  for (int N : cfg.sample_sizes) {
    const Dataset data =
        sample_gaussian_data(Dag(cfg.num_vars), 0.0, 1.0, N, seeder());
    PriorConfig prior = default_prior(cfg.num_vars);
    prior.sample_covariance_scatter = cfg.sample_covariance_scatter;
    contexts.push_back(ScoreContext::make(data, std::move(prior)));
  }

  std::vector<double> log_sizes;
  for (int N : cfg.sample_sizes) log_sizes.push_back(std::log(static_cast<double>(N)));

  for (int l = 0; l <= cfg.max_parent_count; ++l) {
    std::vector<int> ps(l);
    for (int i = 0; i < l; ++i) ps[i] = i;
    const IndexSet parents(ps);
    BiasStudyRow row;
    row.parent_count = l;
    for (const auto& ctx : contexts)
      row.delta.push_back(local_log_score(ctx, node, parents, ScoreMode::Bge) -
                          local_log_score(ctx, node, parents, ScoreMode::Hg95));
    row.slope = fitted_slope(log_sizes, row.delta);
    result.rows.push_back(std::move(row));
  }
  return result;
}

}  // namespace bge
