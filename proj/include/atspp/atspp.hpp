#pragma once

#include <optional>
#include <vector>

#include "atspp/errors.hpp"
#include "atspp/graph.hpp"
#include "atspp/metric.hpp"
#include "json.hpp"

namespace atspp {

// Snapshot of the cover loop after one iteration.
struct CoverLoopState {
  int iteration = 0;
  std::vector<int> W;
  std::vector<int> labels;
  std::vector<NodeSeq> F;  // unit s-t paths; arc union acyclic
  std::vector<Arc> H;      // multiset, balanced at every node
  Rational cover_cost;     // cost of this iteration's cover
};

struct HamPath {
  NodeSeq nodes;
  Rational cost;
};

struct AtsppResult {
  HamPath path;
  int iterations = 0;
  std::vector<CoverLoopState> trace;
  Rational first_cover_cost;  // cover of the whole node set
  Rational total_cover_cost;
  CheckLog checks;
};

// Default iteration count 2 ceil(log2 n) + 1.
int default_iterations(int n);

// Cover loop, topological stitching of F, then the cycles of H spliced in at
// their shared node.
AtsppResult solve_atspp(const MetricInstance& inst, std::optional<int> iterations = std::nullopt);

struct MultipathResult {
  std::vector<NodeSeq> paths;
  Rational cost;
  int iterations = 0;
  std::vector<Rational> cover_costs;
  CheckLog checks;
};

// At most k ceil(log2 n) s-t paths covering every node, cut out of an Euler
// tour of the union of k-path-cycle covers closed by dummy t->s arcs.
MultipathResult multipath_cover(const MetricInstance& inst, int k);

struct KPersonResult {
  std::vector<NodeSeq> paths;  // exactly k
  Rational cost;
  int iterations = 0;
  int chains = 0;
  int max_arc_usage = 0;  // F arcs used by F-walk realizations of the chains
  std::vector<CoverLoopState> trace;
  Rational total_cover_cost;
  CheckLog checks;
};

// Cover loop with k-path-cycle covers and (k+1) ceil(log2 n) + 1 iterations,
// then a minimum chain cover of F's reachability order.
KPersonResult solve_k_person(const MetricInstance& inst, int k, std::optional<int> iterations = std::nullopt);

nlohmann::json state_to_json(const CoverLoopState& state);
nlohmann::json trace_to_json(const std::vector<CoverLoopState>& trace);

}  // namespace atspp
