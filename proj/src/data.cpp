#include "bgescore/data.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace bge {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string location(int row, int col) {
  std::ostringstream ss;
  ss << "row " << row << ", column " << col;
  return ss.str();
}

}  // namespace

std::string to_string(ScoreMode mode) {
  switch (mode) {
    case ScoreMode::Bge:
      return "bge";
    case ScoreMode::Hg95:
      return "hg95";
    default:
      return "gh02";
  }
}

ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "bge") return ScoreMode::Bge;
  if (s == "hg95") return ScoreMode::Hg95;
  if (s == "gh02") return ScoreMode::Gh02;
  throw ConfigError("unknown score mode: " + s + " (expected bge, hg95 or gh02)");
}

Dataset::Dataset(std::vector<std::string> names_in, Matrix values_in)
    : names(std::move(names_in)), values(std::move(values_in)) {
  if (names.empty()) throw ParseError("dataset has no variables");
  std::unordered_set<std::string> seen;
  for (const auto& nm : names) {
    if (nm.empty()) throw ParseError("empty variable name");
    if (!seen.insert(nm).second) throw ParseError("duplicate variable name: " + nm);
  }
  if (values.cols() != static_cast<int>(names.size()))
    throw DimensionMismatch("dataset value columns do not match variable names");
  if (values.rows() == 0) throw EmptyData("dataset has no observations");
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j)
      if (!std::isfinite(values(i, j)))
        throw ParseError("non-finite value at row " + std::to_string(i + 1) + ", column " +
                         std::to_string(j + 1));
}

int Dataset::column(const std::string& name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

Dataset Dataset::select(const std::vector<std::string>& keep) const {
  Matrix sub(values.rows(), static_cast<int>(keep.size()));
  for (size_t j = 0; j < keep.size(); ++j) {
    const int src = column(keep[j]);
    if (src < 0) throw SchemaError("variable not present in dataset: " + keep[j]);
    for (int i = 0; i < values.rows(); ++i) sub(i, static_cast<int>(j)) = values(i, src);
  }
  return Dataset(keep, std::move(sub));
}

Dataset load_dataset(std::istream& in) {
  std::string line;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto cells = split_commas(line);
    if (names.empty()) {
      for (auto& c : cells) c = trim(c);
      names = std::move(cells);
      continue;
    }
    if (cells.size() != names.size()) {
      std::ostringstream ss;
      ss << "row " << lineno << " has " << cells.size() << " cells, expected "
         << names.size();
      throw ParseError(ss.str());
    }
    std::vector<double> vals(cells.size());
    for (size_t j = 0; j < cells.size(); ++j) {
      const std::string cell = trim(cells[j]);
      if (cell.empty())
        throw ParseError("empty cell at " + location(lineno, static_cast<int>(j) + 1));
      const char* begin = cell.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end != begin + cell.size() || !std::isfinite(v))
        throw ParseError("bad number '" + cell + "' at " +
                         location(lineno, static_cast<int>(j) + 1));
      vals[j] = v;
    }
    rows.push_back(std::move(vals));
  }
  if (names.empty()) throw ParseError("missing header row");
  if (rows.empty()) throw EmptyData("no data rows after the header");
  Matrix values(static_cast<int>(rows.size()), static_cast<int>(names.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      values(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
  return Dataset(std::move(names), std::move(values));
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return load_dataset(in);
}

SuffStats sufficient_stats(const Dataset& data) {
  const int n = data.num_vars();
  const int N = data.num_obs();
  SuffStats s;
  s.num_obs = N;
  s.mean.resize(n);
  for (int j = 0; j < n; ++j) {
    long double acc = 0.0L;
    for (int i = 0; i < N; ++i) acc += data.values(i, j);
    s.mean[j] = static_cast<double>(acc / N);
  }
  s.scatter = Matrix(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      long double acc = 0.0L;
      for (int i = 0; i < N; ++i)
        acc += static_cast<long double>(data.values(i, a) - s.mean[a]) *
               (data.values(i, b) - s.mean[b]);
      s.scatter(a, b) = static_cast<double>(acc);
      s.scatter(b, a) = s.scatter(a, b);
    }
  return s;
}

PriorConfig default_prior(int n) {
  if (n < 1) throw ConfigError("default_prior needs at least one variable");
  PriorConfig p;
  p.alpha_mu = 1.0;
  p.alpha_w = n + 2;
  p.nu.assign(n, 0.0);
  const double scale = p.alpha_mu * (p.alpha_w - n - 1) / (p.alpha_mu + 1.0);
  p.t = SpdMatrix::scaled_identity(n, scale);
  return p;
}

void validate_prior(const PriorConfig& prior, int n) {
  if (!(prior.alpha_mu > 0.0)) throw ConfigError("alpha_mu must be positive");
  if (!(prior.alpha_w > n - 1))
    throw ConfigError("alpha_w must exceed the number of variables minus one");
  if (static_cast<int>(prior.nu.size()) != n)
    throw ConfigError("prior mean dimension does not match the number of variables");
  if (prior.t.dim() != n)
    throw ConfigError("prior parameter matrix dimension does not match the number of variables");
}

SpdMatrix posterior_matrix(const SuffStats& stats, const PriorConfig& prior) {
  const int n = stats.num_vars();
  validate_prior(prior, n);
  const int N = stats.num_obs;
  if (N < 1) throw EmptyData("posterior_matrix needs at least one observation");
  double scatter_scale = 1.0;
  if (prior.sample_covariance_scatter) {
    if (N < 2) throw DomainError("sample-covariance scatter needs at least two observations");
    scatter_scale = 1.0 / (N - 1);
  }
  const double a = prior.rank_one_coefficient_uses == RankOneWeight::AlphaMu
                       ? prior.alpha_mu
                       : prior.alpha_w;
  const double c = N * a / (N + a);
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double shift_i = prior.nu[i] - stats.mean[i];
      const double shift_j = prior.nu[j] - stats.mean[j];
      r(i, j) = prior.t(i, j) + scatter_scale * stats.scatter(i, j) + c * shift_i * shift_j;
      r(j, i) = r(i, j);
    }
  return SpdMatrix(std::move(r));
}

}  // namespace bge
