#ifndef BGESCORE_STUDY_HPP
#define BGESCORE_STUDY_HPP

#include <cstdint>
#include <vector>

#include "bgescore/scorer.hpp"

namespace bge {

// Simulation comparing the corrected and legacy local scores as the
// sample size grows: independent standard-normal data, one fixed node
// scored with its first l co-variables as parents.
struct BiasStudyConfig {
  int num_vars = 6;
  int max_parent_count = 4;           // l runs over 0..max_parent_count
  std::vector<int> sample_sizes = {100, 1000, 10000};
  std::uint64_t seed = 1;
  // Apply the legacy scatter rescaling (divide by N - 1) when building
  // each posterior matrix.
  bool sample_covariance_scatter = false;
};

struct BiasStudyRow {
  int parent_count = 0;
  std::vector<double> delta;  // corrected minus legacy local score, per sample size
  double slope = 0.0;         // least-squares slope of delta against ln N
};

struct BiasStudyResult {
  std::vector<int> sample_sizes;
  std::vector<BiasStudyRow> rows;  // one per parent count
};

BiasStudyResult bias_study(const BiasStudyConfig& cfg);

// Least-squares slope of y against x; needs at least two distinct x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bge

#endif
