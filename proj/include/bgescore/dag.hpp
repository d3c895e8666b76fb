#ifndef BGESCORE_DAG_HPP
#define BGESCORE_DAG_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bgescore/data.hpp"
#include "bgescore/linalg.hpp"

namespace bge {

// Directed graph stored as per-node parent sets.  Cyclic configurations
// are representable (so acyclicity can be queried); operations that
// require a DAG say so.
class Dag {
 public:
  explicit Dag(int n);
  explicit Dag(std::vector<IndexSet> parents, std::vector<std::string> names = {});

  int node_count() const { return static_cast<int>(parents_.size()); }
  const IndexSet& parents(int node) const { return parents_.at(node); }
  const std::vector<std::string>& names() const { return names_; }
  bool named() const { return !names_.empty(); }
  std::string name(int node) const;  // stored name, or "x<node>"
  int node_index(const std::string& name) const;  // -1 if absent

  bool has_edge(int from, int to) const;
  int edge_count() const;
  std::vector<std::pair<int, int>> edges() const;  // (parent, child), sorted

  // Structural edits; each returns a new graph.  Throws IllegalMove for a
  // self-loop, a duplicate edge, or removing/reversing a missing edge.
  // Cycle creation is not checked here.
  Dag with_edge_added(int from, int to) const;
  Dag with_edge_removed(int from, int to) const;
  Dag with_edge_reversed(int from, int to) const;

  bool operator==(const Dag& other) const { return parents_ == other.parents_; }

 private:
  std::vector<IndexSet> parents_;
  std::vector<std::string> names_;
};

bool is_acyclic(const Dag& g);

// Single-edge edit of a graph.
enum class MoveKind { AddEdge, RemoveEdge, ReverseEdge };
struct Move {
  MoveKind kind;
  int from;
  int to;
  bool operator==(const Move&) const = default;
};
std::string to_string(const Move& m, const Dag& g);

// Legal = structurally applicable and the result is acyclic.  g itself
// must be acyclic.
bool move_is_legal(const Dag& g, const Move& m);
// Applies a legal move; throws IllegalMove otherwise.
Dag apply_move(const Dag& g, const Move& m);

// True when some directed path leads from `from` to `to` (a node reaches
// itself only through a cycle).
bool has_directed_path(const Dag& g, int from, int to);

// Nodes in topological order, smallest index first among ready nodes;
// empty when the graph has a cycle.
std::optional<std::vector<int>> topological_order(const Dag& g);

// (skeleton, v-structures): two acyclic graphs share this signature iff
// they represent the same set of conditional-independence constraints.
// Edges are undirected pairs (min, max); v-structures a -> c <- b with
// non-adjacent a, b are stored as (a, c, b) canonicalized a < b.
// Throws CyclicGraph.
struct EquivalenceSignature {
  std::set<std::pair<int, int>> skeleton;
  std::set<std::tuple<int, int, int>> v_structures;
  bool operator==(const EquivalenceSignature&) const = default;
  auto operator<=>(const EquivalenceSignature&) const = default;
};
EquivalenceSignature equivalence_signature(const Dag& g);
bool markov_equivalent(const Dag& a, const Dag& b);

// Plain-text graph format:
//   nodes: a,b,c
//   a b
//   b c
// one "parent child" line per edge.  Round-trips losslessly; names must
// be free of whitespace and commas.
std::string serialize_dag(const Dag& g);
Dag parse_dag(std::istream& in);
Dag parse_dag_text(const std::string& text);
Dag load_dag_file(const std::string& path);

// Random DAG: nodes are permuted into a hidden order, then each edge
// compatible with that order is included with probability edge_prob
// subject to max_parents.  Acyclic by construction; deterministic in the
// seed.
Dag random_dag(int n, int max_parents, double edge_prob, std::uint64_t seed);

// Draws N observations from a linear Gaussian structural model on g,
// nodes filled in topological order:
//   x_v = sum over parents p of weights(p, v) * x_p + noise,
// noise ~ Normal(0, noise_sd^2).  weights is n x n; entries off the
// graph's edges are ignored.  Deterministic in the seed.  Throws
// CyclicGraph.
Dataset sample_gaussian_data(const Dag& g, const Matrix& weights, double noise_sd,
                             int num_obs, std::uint64_t seed);
// Same weight on every edge.
Dataset sample_gaussian_data(const Dag& g, double weight, double noise_sd, int num_obs,
                             std::uint64_t seed);

}  // namespace bge

#endif
