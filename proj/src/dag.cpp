#include "bgescore/dag.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_map>

namespace bge {

Dag::Dag(int n) {
  if (n < 1) throw DomainError("graph needs at least one node");
  parents_.resize(n);
}

Dag::Dag(std::vector<IndexSet> parents, std::vector<std::string> names)
    : parents_(std::move(parents)), names_(std::move(names)) {
  const int n = node_count();
  if (n < 1) throw DomainError("graph needs at least one node");
  for (int v = 0; v < n; ++v) {
    const auto& ps = parents_[v];
    if (!ps.empty() && ps[ps.size() - 1] >= n)
      throw DomainError("parent index out of range");
    if (ps.contains(v)) throw IllegalMove("self-loop");
  }
  if (!names_.empty() && static_cast<int>(names_.size()) != n)
    throw DimensionMismatch("node name count does not match node count");
}

std::string Dag::name(int node) const {
  if (named()) return names_.at(node);
  return "x" + std::to_string(node);
}

int Dag::node_index(const std::string& name) const {
  for (int v = 0; v < node_count(); ++v)
    if (this->name(v) == name) return v;
  return -1;
}

bool Dag::has_edge(int from, int to) const { return parents_.at(to).contains(from); }

int Dag::edge_count() const {
  int total = 0;
  for (const auto& ps : parents_) total += ps.size();
  return total;
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < node_count(); ++v)
    for (int p : parents_[v]) out.emplace_back(p, v);
  std::sort(out.begin(), out.end());
  return out;
}

Dag Dag::with_edge_added(int from, int to) const {
  if (from == to) throw IllegalMove("self-loop");
  if (from < 0 || to < 0 || from >= node_count() || to >= node_count())
    throw IllegalMove("node index out of range");
  if (has_edge(from, to)) throw IllegalMove("edge already present");
  Dag out = *this;
  out.parents_[to] = out.parents_[to].with(from);
  return out;
}

Dag Dag::with_edge_removed(int from, int to) const {
  if (from < 0 || to < 0 || from >= node_count() || to >= node_count())
    throw IllegalMove("node index out of range");
  if (!has_edge(from, to)) throw IllegalMove("edge not present");
  Dag out = *this;
  out.parents_[to] = out.parents_[to].without(from);
  return out;
}

Dag Dag::with_edge_reversed(int from, int to) const {
  return with_edge_removed(from, to).with_edge_added(to, from);
}

std::optional<std::vector<int>> topological_order(const Dag& g) {
  const int n = g.node_count();
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v) {
    indegree[v] = g.parents(v).size();
    for (int p : g.parents(v)) children[p].push_back(v);
  }
  std::vector<int> ready;
  for (int v = n - 1; v >= 0; --v)
    if (indegree[v] == 0) ready.push_back(v);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::sort(ready.begin(), ready.end(), std::greater<int>());
    const int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (int c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

bool is_acyclic(const Dag& g) { return topological_order(g).has_value(); }

bool has_directed_path(const Dag& g, int from, int to) {
  const int n = g.node_count();
  std::vector<std::vector<int>> children(n);
  for (int v = 0; v < n; ++v)
    for (int p : g.parents(v)) children[p].push_back(v);
  std::vector<char> seen(n, 0);
  std::vector<int> stack{from};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c : children[v]) {
      if (c == to) return true;
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  return false;
}

std::string to_string(const Move& m, const Dag& g) {
  const char* verb = m.kind == MoveKind::AddEdge      ? "add"
                     : m.kind == MoveKind::RemoveEdge ? "remove"
                                                      : "reverse";
  return std::string(verb) + " " + g.name(m.from) + "->" + g.name(m.to);
}

bool move_is_legal(const Dag& g, const Move& m) {
  const int n = g.node_count();
  if (m.from < 0 || m.to < 0 || m.from >= n || m.to >= n || m.from == m.to) return false;
  switch (m.kind) {
    case MoveKind::AddEdge:
      if (g.has_edge(m.from, m.to) || g.has_edge(m.to, m.from)) return false;
      // a new edge closes a cycle iff the child already reaches the parent
      return !has_directed_path(g, m.to, m.from);
    case MoveKind::RemoveEdge:
      return g.has_edge(m.from, m.to);
    case MoveKind::ReverseEdge: {
      if (!g.has_edge(m.from, m.to)) return false;
      const Dag without = g.with_edge_removed(m.from, m.to);
      return !has_directed_path(without, m.from, m.to);
    }
  }
  return false;
}

Dag apply_move(const Dag& g, const Move& m) {
  if (!move_is_legal(g, m)) throw IllegalMove("move is not legal: " + to_string(m, g));
  switch (m.kind) {
    case MoveKind::AddEdge:
      return g.with_edge_added(m.from, m.to);
    case MoveKind::RemoveEdge:
      return g.with_edge_removed(m.from, m.to);
    default:
      return g.with_edge_reversed(m.from, m.to);
  }
}

EquivalenceSignature equivalence_signature(const Dag& g) {
  if (!is_acyclic(g)) throw CyclicGraph("equivalence signature needs an acyclic graph");
  EquivalenceSignature sig;
  for (auto [p, v] : g.edges()) sig.skeleton.emplace(std::min(p, v), std::max(p, v));
  for (int c = 0; c < g.node_count(); ++c) {
    const auto& ps = g.parents(c);
    for (int i = 0; i < ps.size(); ++i)
      for (int j = i + 1; j < ps.size(); ++j) {
        const int a = ps[i], b = ps[j];  // a < b by parent-set ordering
        const bool adjacent = g.has_edge(a, b) || g.has_edge(b, a);
        if (!adjacent) sig.v_structures.emplace(a, c, b);
      }
  }
  return sig;
}

bool markov_equivalent(const Dag& a, const Dag& b) {
  if (a.node_count() != b.node_count()) return false;
  return equivalence_signature(a) == equivalence_signature(b);
}

namespace {

bool valid_node_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') return false;
  return true;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::string serialize_dag(const Dag& g) {
  std::ostringstream out;
  out << "nodes: ";
  for (int v = 0; v < g.node_count(); ++v) {
    const std::string nm = g.name(v);
    if (!valid_node_name(nm)) throw DomainError("node name unusable in graph files: " + nm);
    out << (v ? "," : "") << nm;
  }
  out << "\n";
  for (auto [p, v] : g.edges()) out << g.name(p) << " " << g.name(v) << "\n";
  return out.str();
}

Dag parse_dag(std::istream& in) {
  std::string line;
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  std::vector<std::pair<int, int>> edge_list;
  int lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    if (!have_header) {
      if (body.rfind("nodes:", 0) != 0) {
        std::ostringstream ss;
        ss << "line " << lineno << ": expected a 'nodes:' header";
        throw ParseError(ss.str());
      }
      have_header = true;
      std::string rest = body.substr(6);
      std::istringstream cells(rest);
      std::string cell;
      while (std::getline(cells, cell, ',')) {
        const std::string nm = trim(cell);
        if (!valid_node_name(nm)) {
          std::ostringstream ss;
          ss << "line " << lineno << ": bad node name '" << nm << "'";
          throw ParseError(ss.str());
        }
        if (!index.emplace(nm, static_cast<int>(names.size())).second) {
          std::ostringstream ss;
          ss << "line " << lineno << ": duplicate node name '" << nm << "'";
          throw ParseError(ss.str());
        }
        names.push_back(nm);
      }
      if (names.empty()) {
        std::ostringstream ss;
        ss << "line " << lineno << ": empty node list";
        throw ParseError(ss.str());
      }
      continue;
    }
    std::istringstream fields(body);
    std::string from, to, extra;
    if (!(fields >> from >> to) || (fields >> extra)) {
      std::ostringstream ss;
      ss << "line " << lineno << ": expected 'parent child'";
      throw ParseError(ss.str());
    }
    auto lookup = [&](const std::string& nm) {
      auto it = index.find(nm);
      if (it == index.end()) {
        std::ostringstream ss;
        ss << "line " << lineno << ": unknown node '" << nm << "'";
        throw ParseError(ss.str());
      }
      return it->second;
    };
    edge_list.emplace_back(lookup(from), lookup(to));
  }
  if (!have_header) throw ParseError("missing 'nodes:' header");
  std::vector<IndexSet> parents(names.size());
  for (auto [p, v] : edge_list) {
    if (p == v) throw ParseError("self-loop on node '" + names[p] + "'");
    if (parents[v].contains(p))
      throw ParseError("duplicate edge " + names[p] + " -> " + names[v]);
    parents[v] = parents[v].with(p);
  }
  Dag g(std::move(parents), std::move(names));
  if (!is_acyclic(g)) throw ParseError("edge list contains a cycle");
  return g;
}

Dag parse_dag_text(const std::string& text) {
  std::istringstream in(text);
  return parse_dag(in);
}

Dag load_dag_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_dag(in);
}

Dag random_dag(int n, int max_parents, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw DomainError("graph needs at least one node");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
    throw DomainError("edge probability must lie in [0, 1]");
  if (max_parents < 0) throw DomainError("max_parents must be nonnegative");
  std::mt19937_64 rng(seed);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<IndexSet> parents(n);
  for (int j = 1; j < n; ++j) {
    const int child = order[j];
    for (int i = 0; i < j; ++i) {
      if (parents[child].size() >= max_parents) break;
      if (coin(rng) < edge_prob) parents[child] = parents[child].with(order[i]);
    }
  }
  return Dag(std::move(parents));
}

Dataset sample_gaussian_data(const Dag& g, const Matrix& weights, double noise_sd,
                             int num_obs, std::uint64_t seed) {
  const auto order = topological_order(g);
  if (!order) throw CyclicGraph("data sampling needs an acyclic graph");
  if (num_obs < 1) throw DomainError("need at least one observation");
  if (!(noise_sd > 0.0)) throw DomainError("noise standard deviation must be positive");
  const int n = g.node_count();
  if (weights.rows() != n || weights.cols() != n)
    throw DimensionMismatch("weight matrix dimension does not match the graph");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sd);
  Matrix values(num_obs, n);
  for (int i = 0; i < num_obs; ++i)
    for (int v : *order) {
      double x = noise(rng);
      for (int p : g.parents(v)) x += weights(p, v) * values(i, p);
      values(i, v) = x;
    }
  std::vector<std::string> names(n);
  for (int v = 0; v < n; ++v) names[v] = g.name(v);
  return Dataset(std::move(names), std::move(values));
}

Dataset sample_gaussian_data(const Dag& g, double weight, double noise_sd, int num_obs,
                             std::uint64_t seed) {
  const int n = g.node_count();
  Matrix weights(n, n, weight);
  return sample_gaussian_data(g, weights, noise_sd, num_obs, seed);
}

}  // namespace bge
