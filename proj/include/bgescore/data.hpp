#ifndef BGESCORE_DATA_HPP
#define BGESCORE_DATA_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bgescore/linalg.hpp"

namespace bge {

// Fully observed continuous dataset: one row per observation, one named
// column per variable.
struct Dataset {
  std::vector<std::string> names;
  Matrix values;  // num_obs x num_vars

  Dataset(std::vector<std::string> names, Matrix values);

  int num_obs() const { return values.rows(); }
  int num_vars() const { return values.cols(); }

  // Column index for a variable name; -1 if absent.
  int column(const std::string& name) const;

  // New dataset containing the given columns in the given order.
  Dataset select(const std::vector<std::string>& keep) const;
};

// Parses comma-separated text with a mandatory header row of variable
// names.  Cells must be finite decimal numbers.  Throws ParseError with
// the offending row and column, EmptyData when no data rows follow the
// header.
Dataset load_dataset(std::istream& in);
Dataset load_dataset_file(const std::string& path);

struct SuffStats {
  int num_obs = 0;
  std::vector<double> mean;
  Matrix scatter;  // sum of (x - mean)(x - mean)^T over observations

  int num_vars() const { return static_cast<int>(mean.size()); }
};

// Two-pass mean and centered scatter.
SuffStats sufficient_stats(const Dataset& data);

// Scoring variant.
//  Bge  - corrected marginal likelihood; submatrices selected directly.
//  Hg95 - legacy variant whose degree-of-freedom bookkeeping uses the
//         subset size where the full variable count belongs.
//  Gh02 - legacy variant that inverts the parameter matrices before
//         selecting submatrices (invert-then-select vs select-then-invert).
enum class ScoreMode { Bge, Hg95, Gh02 };

std::string to_string(ScoreMode mode);
ScoreMode score_mode_from_string(const std::string& s);

// Which precision count weights the rank-one mean-shift term of the
// posterior parameter matrix: c = N * a / (N + a) with a one of the two
// model counts below.
enum class RankOneWeight {
  AlphaMu,  // mean pseudo-count; the conjugate-update choice (default)
  AlphaW,   // Wishart degrees of freedom; appears in some published forms
};

// Parameter prior for the Gaussian model: normal-Wishart with mean
// pseudo-count alpha_mu, Wishart dof alpha_w, prior mean nu and parameter
// matrix t; plus the scoring variant to apply.
struct PriorConfig {
  double alpha_mu = 1.0;
  double alpha_w = 0.0;
  std::vector<double> nu;
  SpdMatrix t;
  ScoreMode mode = ScoreMode::Bge;
  RankOneWeight rank_one_coefficient_uses = RankOneWeight::AlphaMu;
  // Divide the scatter by N - 1 before use, i.e. treat it as a sample
  // covariance.  Reproduces a known mis-reading of the posterior update;
  // off by default.
  bool sample_covariance_scatter = false;
};

// Default prior for n variables: alpha_mu = 1, alpha_w = n + 2, nu = 0,
// t = s * I with s = alpha_mu (alpha_w - n - 1) / (alpha_mu + 1), which
// makes the marginal prior variance of each variable 1.
PriorConfig default_prior(int n);

// Throws ConfigError unless alpha_mu > 0, alpha_w > n - 1, and nu/t have
// dimension n.
void validate_prior(const PriorConfig& prior, int n);

// Posterior parameter matrix
//   R = T + S + c (nu - mean)(nu - mean)^T,  c = N a / (N + a),
// with S the (optionally rescaled) scatter and a chosen by
// prior.rank_one_coefficient_uses.  Exactly symmetric by construction.
SpdMatrix posterior_matrix(const SuffStats& stats, const PriorConfig& prior);

}  // namespace bge

#endif
