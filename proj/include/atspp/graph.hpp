#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "atspp/rational.hpp"

namespace atspp {

using Arc = std::pair<int, int>;
using NodeSeq = std::vector<int>;

// Sparse positive flow on the arcs of an n-node ground set. Zero entries are
// never stored and self-loops are rejected.
class ArcFlow {
 public:
  ArcFlow() = default;
  explicit ArcFlow(int n) : n_(n) {}

  int n() const { return n_; }
  bool empty() const { return arcs_.empty(); }
  std::size_t size() const { return arcs_.size(); }

  Rational get(int u, int v) const;
  void set(int u, int v, const Rational& value);
  void add(int u, int v, const Rational& value);
  void add_path(const NodeSeq& nodes, const Rational& amount);
  void add_cycle(const NodeSeq& nodes, const Rational& amount);

  ArcFlow scaled(const Rational& factor) const;

  Rational out_flow(int u) const;
  Rational in_flow(int u) const;
  // in_flow minus out_flow
  Rational net_in(int u) const { return in_flow(u) - out_flow(u); }
  // Total flow crossing into `inside` from its complement.
  Rational cut_in(const std::vector<bool>& inside) const;
  // Sum of d[u][v] * flow(u, v).
  Rational cost(const std::vector<std::vector<Rational>>& d) const;

  std::vector<Arc> support() const;
  const std::map<Arc, Rational>& entries() const { return arcs_; }

  auto begin() const { return arcs_.begin(); }
  auto end() const { return arcs_.end(); }

  friend bool operator==(const ArcFlow& a, const ArcFlow& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  void check(int u, int v) const;

  int n_ = 0;
  std::map<Arc, Rational> arcs_;
};

struct WeightedSeq {
  NodeSeq nodes;
  Rational amount;
};

// Paths run from s to t; cycles are listed without repeating the first node.
struct Decomposition {
  std::vector<WeightedSeq> cycles;
  std::vector<WeightedSeq> paths;

  ArcFlow recompose(int n) const;
};

struct MatchingResult {
  std::vector<int> assignment;  // row -> column
  Rational cost;
};

// Square cost matrix; std::nullopt marks a forbidden cell.
using CostMatrix = std::vector<std::vector<std::optional<Rational>>>;

// Minimum-cost perfect matching by the Hungarian method with potentials,
// O(m^3). Throws InfeasibleError when every perfect matching uses a forbidden
// cell.
MatchingResult min_cost_perfect_matching(const CostMatrix& cost);

struct MinCut {
  Rational value;
  std::vector<int> sink_side;  // contains sink, never source
};

// Edmonds-Karp over exact capacities. The returned cut is the complement of
// the residual reachable set of `source`.
MinCut max_flow_min_cut(const ArcFlow& capacities, int source, int sink);

// Maximum-cardinality matching; adjacency[x] lists neighbours y in [0, ny).
// Returns match_of_x (or -1 for unmatched).
std::vector<int> max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int ny);

// Extracts cycles first (lowest-index DFS, minimum arc value subtracted), then
// splits the acyclic remainder into s-t paths. Throws ContractViolation when
// an interior node is unbalanced.
Decomposition decompose_flow(const ArcFlow& f, int s, int t);

// Kahn order with lowest-index tie-breaking over nodes [0, n). Throws
// AcyclicityViolation carrying a cycle.
NodeSeq topological_order(int n, const std::vector<Arc>& arcs);

// Closed Euler walk from `start` (Hierholzer). Arcs may repeat. Throws
// ContractViolation on unbalanced degrees or a disconnected support.
std::vector<Arc> euler_tour(int n, const std::vector<Arc>& arcs, int start);

// Keeps the first occurrence of each node. When the walk's endpoints differ,
// the last node stays last.
NodeSeq shortcut(const NodeSeq& walk);

// reach[u][v] iff a nonempty directed path u -> v exists. Acyclic input only.
std::vector<std::vector<bool>> reachability(int n, const std::vector<Arc>& arcs);

// Nodes along an arc sequence: first tail, then every head.
NodeSeq walk_nodes(const std::vector<Arc>& tour);

// Arcs between consecutive nodes of a sequence.
std::vector<Arc> seq_arcs(const NodeSeq& nodes, bool closed = false);

}  // namespace atspp
