// Python bindings for the scoring library.
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "bgescore/dag.hpp"
#include "bgescore/data.hpp"
#include "bgescore/scorer.hpp"
#include "bgescore/search.hpp"
#include "bgescore/study.hpp"

namespace py = pybind11;
using namespace bge;

namespace {

Matrix matrix_from_array(const py::array_t<double>& a) {
  const auto buf = a.request();
  if (buf.ndim != 2) throw DimensionMismatch("expected a 2-d array");
  Matrix m(static_cast<int>(buf.shape[0]), static_cast<int>(buf.shape[1]));
  const auto view = a.unchecked<2>();
  for (py::ssize_t r = 0; r < buf.shape[0]; ++r)
    for (py::ssize_t c = 0; c < buf.shape[1]; ++c)
      m(static_cast<int>(r), static_cast<int>(c)) = view(r, c);
  return m;
}

py::array_t<double> matrix_to_array(const Matrix& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto view = a.mutable_unchecked<2>();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  return a;
}

IndexSet indexset_from_list(const std::vector<int>& v) { return IndexSet(v); }

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "BGe marginal-likelihood scoring for Gaussian DAG models";

  py::register_exception<ParseError>(mod, "ParseError");
  py::register_exception<SchemaError>(mod, "SchemaError");
  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<DomainError>(mod, "DomainError");
  py::register_exception<NotPositiveDefinite>(mod, "NotPositiveDefiniteError");
  py::register_exception<CyclicGraph>(mod, "CyclicGraphError");
  py::register_exception<IllegalMove>(mod, "IllegalMoveError");

  py::enum_<ScoreMode>(mod, "ScoreMode")
      .value("bge", ScoreMode::Bge)
      .value("hg95", ScoreMode::Hg95)
      .value("gh02", ScoreMode::Gh02);
  mod.def("score_mode_from_string", &score_mode_from_string, py::arg("name"));

  py::class_<Dataset>(mod, "Dataset")
      .def(py::init([](std::vector<std::string> names, py::array_t<double> values) {
             return Dataset{std::move(names), matrix_from_array(values)};
           }),
           py::arg("names"), py::arg("values"))
      .def_property_readonly("names", [](const Dataset& d) { return d.names; })
      .def_property_readonly("values", [](const Dataset& d) { return matrix_to_array(d.values); })
      .def_property_readonly("num_obs", &Dataset::num_obs)
      .def_property_readonly("num_vars", &Dataset::num_vars)
      .def("select", &Dataset::select, py::arg("names"));
  mod.def("load_dataset", &load_dataset_file, py::arg("path"));

  py::class_<PriorConfig>(mod, "PriorConfig")
      .def_readwrite("alpha_mu", &PriorConfig::alpha_mu)
      .def_readwrite("alpha_w", &PriorConfig::alpha_w)
      .def_readwrite("nu", &PriorConfig::nu)
      .def_readwrite("mode", &PriorConfig::mode)
      .def_readwrite("sample_covariance_scatter", &PriorConfig::sample_covariance_scatter)
      .def_property(
          "t", [](const PriorConfig& p) { return matrix_to_array(p.t.matrix()); },
          [](PriorConfig& p, py::array_t<double> a) { p.t = SpdMatrix(matrix_from_array(a)); })
      .def_property(
          "rank_one_coefficient_uses",
          [](const PriorConfig& p) {
            return p.rank_one_coefficient_uses == RankOneWeight::AlphaMu ? "alpha_mu"
                                                                         : "alpha_w";
          },
          [](PriorConfig& p, const std::string& v) {
            if (v == "alpha_mu") p.rank_one_coefficient_uses = RankOneWeight::AlphaMu;
            else if (v == "alpha_w") p.rank_one_coefficient_uses = RankOneWeight::AlphaW;
            else throw ConfigError("rank_one_coefficient_uses must be alpha_mu or alpha_w");
          });
  mod.def("default_prior", &default_prior, py::arg("num_vars"));

  py::class_<Dag>(mod, "Dag")
      .def(py::init<int>(), py::arg("num_nodes"))
      .def(py::init([](const std::vector<std::vector<int>>& parents,
                       std::vector<std::string> names) {
             std::vector<IndexSet> ps;
             ps.reserve(parents.size());
             for (const auto& p : parents) ps.push_back(indexset_from_list(p));
             return Dag(std::move(ps), std::move(names));
           }),
           py::arg("parents"), py::arg("names") = std::vector<std::string>{})
      .def_property_readonly("num_nodes", &Dag::node_count)
      .def("parents",
           [](const Dag& g, int v) { return g.parents(v).indices(); }, py::arg("node"))
      .def("names", [](const Dag& g) {
        std::vector<std::string> out;
        for (int v = 0; v < g.node_count(); ++v) out.push_back(g.name(v));
        return out;
      })
      .def("edges", &Dag::edges)
      .def("has_edge", &Dag::has_edge, py::arg("parent"), py::arg("child"))
      .def("with_edge_added", &Dag::with_edge_added, py::arg("parent"), py::arg("child"))
      .def("with_edge_removed", &Dag::with_edge_removed, py::arg("parent"), py::arg("child"))
      .def("with_edge_reversed", &Dag::with_edge_reversed, py::arg("parent"), py::arg("child"))
      .def("serialize", [](const Dag& g) { return serialize_dag(g); })
      .def("__eq__", [](const Dag& a, const Dag& b) { return a == b; });
  mod.def("parse_dag", &parse_dag_text, py::arg("text"));
  mod.def("load_dag", &load_dag_file, py::arg("path"));
  mod.def("is_acyclic", &is_acyclic, py::arg("dag"));
  mod.def("markov_equivalent", &markov_equivalent, py::arg("a"), py::arg("b"));
  mod.def("random_dag", &random_dag, py::arg("num_nodes"), py::arg("max_parents"),
          py::arg("edge_prob"), py::arg("seed"));
  mod.def(
      "sample_gaussian_data",
      [](const Dag& g, double weight, double noise_sd, int num_obs, std::uint64_t seed) {
        return sample_gaussian_data(g, weight, noise_sd, num_obs, seed);
      },
      py::arg("dag"), py::arg("weight"), py::arg("noise_sd"), py::arg("num_obs"),
      py::arg("seed"));

  py::class_<ScoreContext>(mod, "ScoreContext")
      .def(py::init([](const Dataset& data, const PriorConfig& prior) {
             return ScoreContext::make(data, prior);
           }),
           py::arg("data"), py::arg("prior"))
      .def_property_readonly("num_vars", &ScoreContext::num_vars)
      .def_property_readonly("num_obs", &ScoreContext::num_obs)
      .def_property_readonly("posterior_matrix",
                             [](const ScoreContext& c) { return matrix_to_array(c.r().matrix()); })
      .def_property_readonly("prior_matrix",
                             [](const ScoreContext& c) { return matrix_to_array(c.t().matrix()); });

  mod.def(
      "log_marginal_subset",
      [](const ScoreContext& ctx, const std::vector<int>& y, ScoreMode mode) {
        return log_marginal_subset(ctx, indexset_from_list(y), mode);
      },
      py::arg("ctx"), py::arg("subset"), py::arg("mode") = ScoreMode::Bge);
  mod.def(
      "local_log_score",
      [](const ScoreContext& ctx, int node, const std::vector<int>& parents, ScoreMode mode) {
        return local_log_score(ctx, node, indexset_from_list(parents), mode);
      },
      py::arg("ctx"), py::arg("node"), py::arg("parents"), py::arg("mode") = ScoreMode::Bge);
  mod.def(
      "dag_log_score",
      [](const ScoreContext& ctx, const Dag& g, ScoreMode mode) {
        return dag_log_score(ctx, g, mode);
      },
      py::arg("ctx"), py::arg("dag"), py::arg("mode") = ScoreMode::Bge);

  py::class_<SearchConfig>(mod, "SearchConfig")
      .def(py::init<>())
      .def_readwrite("mode", &SearchConfig::mode)
      .def_readwrite("max_parents", &SearchConfig::max_parents)
      .def_readwrite("max_iterations", &SearchConfig::max_iterations)
      .def_readwrite("restarts", &SearchConfig::restarts)
      .def_readwrite("restart_edge_prob", &SearchConfig::restart_edge_prob)
      .def_readwrite("improvement_threshold", &SearchConfig::improvement_threshold)
      .def_readwrite("seed", &SearchConfig::seed);

  py::class_<McmcConfig>(mod, "McmcConfig")
      .def(py::init<>())
      .def_readwrite("mode", &McmcConfig::mode)
      .def_readwrite("max_parents", &McmcConfig::max_parents)
      .def_readwrite("iterations", &McmcConfig::iterations)
      .def_readwrite("burn_in", &McmcConfig::burn_in)
      .def_readwrite("thinning", &McmcConfig::thinning)
      .def_readwrite("seed", &McmcConfig::seed)
      .def_property(
          "edge_penalty",
          [](const McmcConfig& c) { return c.structure_prior.edge_penalty; },
          [](McmcConfig& c, double v) { c.structure_prior.edge_penalty = v; });

  mod.def(
      "hill_climb",
      [](const ScoreContext& ctx, const SearchConfig& cfg) {
        ScoreCache cache;
        const SearchResult r = hill_climb(ctx, cache, cfg);
        py::dict out;
        out["best"] = r.best;
        out["best_score"] = r.best_score;
        out["cache_evaluations"] = r.cache_evaluations;
        out["cache_hits"] = r.cache_hits;
        py::list trace;
        for (const auto& e : r.trace) {
          py::dict row;
          row["restart"] = e.restart;
          row["step"] = e.step;
          row["move"] = e.move ? py::cast(to_string(*e.move, r.best)) : py::cast("start");
          row["delta"] = e.delta;
          row["log_score"] = e.log_score;
          trace.append(std::move(row));
        }
        out["trace"] = std::move(trace);
        return out;
      },
      py::arg("ctx"), py::arg("config"));

  mod.def(
      "structure_mcmc",
      [](const ScoreContext& ctx, const McmcConfig& cfg) {
        ScoreCache cache;
        const McmcResult r = structure_mcmc(ctx, cache, cfg);
        py::dict out;
        out["acceptance_rate"] = r.acceptance_rate;
        out["last"] = r.last;
        out["last_score"] = r.last_score;
        out["cache_evaluations"] = r.cache_evaluations;
        out["cache_hits"] = r.cache_hits;
        py::list samples;
        for (const auto& s : r.samples) {
          py::dict row;
          row["graph"] = s.graph;
          row["log_score"] = s.log_score;
          row["iteration"] = s.iteration;
          samples.append(std::move(row));
        }
        out["samples"] = std::move(samples);
        return out;
      },
      py::arg("ctx"), py::arg("config"));

  py::class_<BiasStudyConfig>(mod, "BiasStudyConfig")
      .def(py::init<>())
      .def_readwrite("num_vars", &BiasStudyConfig::num_vars)
      .def_readwrite("max_parent_count", &BiasStudyConfig::max_parent_count)
      .def_readwrite("sample_sizes", &BiasStudyConfig::sample_sizes)
      .def_readwrite("seed", &BiasStudyConfig::seed)
      .def_readwrite("sample_covariance_scatter", &BiasStudyConfig::sample_covariance_scatter);

  mod.def(
      "bias_study",
      [](const BiasStudyConfig& cfg) {
        const BiasStudyResult r = bias_study(cfg);
        py::dict out;
        out["sample_sizes"] = r.sample_sizes;
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["parent_count"] = row.parent_count;
          d["delta"] = row.delta;
          d["slope"] = row.slope;
          rows.append(std::move(d));
        }
        out["rows"] = std::move(rows);
        return out;
      },
      py::arg("config"));

  mod.def("log_multigamma", &log_multigamma, py::arg("dim"), py::arg("x"));
}
