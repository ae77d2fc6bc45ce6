#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "atspp/graph.hpp"
#include "atspp/rational.hpp"
#include "json.hpp"

namespace atspp {

// Complete asymmetric metric on nodes 0..n-1 with designated endpoints.
struct MetricInstance {
  int n = 0;
  int s = 0;
  int t = 1;
  std::vector<std::vector<Rational>> d;
  std::optional<std::vector<Rational>> weights;

  const Rational& dist(int u, int v) const { return d[u][v]; }
  // c(v); 1 for unweighted instances.
  Rational weight(int v) const { return weights ? (*weights)[v] : Rational(1); }
};

struct Violation {
  enum class Kind { kTriangle, kNegative, kDiagonal };
  Kind kind;
  int u = -1;
  int v = -1;
  int w = -1;  // only for kTriangle: d[u][w] > d[u][v] + d[v][w]
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
};

// Reports every triangle violation, negative entry and nonzero diagonal.
// Throws StructuralError for a non-square matrix or bad endpoints/weights.
ValidationReport validate(const MetricInstance& inst);

struct WeightedArc {
  int u;
  int v;
  Rational w;
};

// Shortest-path closure of a digraph; throws InfeasibleError naming the first
// unreachable ordered pair.
MetricInstance metric_closure(int n, const std::vector<WeightedArc>& arcs, int s, int t);

// Complete digraph with integer weights in [1, max_weight] drawn from a
// seeded mt19937_64, closed under shortest paths; s = 0, t = n - 1.
MetricInstance gen_random(int n, std::uint64_t seed, int max_weight);

// Six-node instance (s = 0, t = 5) on which LP(1/2) costs at most 5 while
// every Hamiltonian s-t path costs at least D. Requires D >= 10.
MetricInstance gen_bad_gap(long long D);

// The half-integral assignment of value 5 that certifies the bad gap.
ArcFlow bad_gap_assignment();

struct SubInstance {
  MetricInstance inst;
  std::vector<int> to_original;  // new index -> original index
  int from_original(int v) const;
};

// Restriction of `inst` to the node set W (sorted, deduplicated) with new
// endpoints s2, t2 given as original indices.
SubInstance induced_subinstance(const MetricInstance& inst, std::vector<int> W, int s2, int t2);

// Sum of consecutive distances along a node sequence.
Rational path_cost(const MetricInstance& inst, const NodeSeq& nodes);
Rational cycle_cost(const MetricInstance& inst, const NodeSeq& nodes);

// Integers become JSON numbers, everything else a "p/q" string.
nlohmann::json rational_to_json(const Rational& r);
Rational rational_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const MetricInstance& inst);
MetricInstance instance_from_json(const nlohmann::json& j);

// Unit metric: d = 1 off the diagonal.
MetricInstance unit_metric(int n);

}  // namespace atspp
