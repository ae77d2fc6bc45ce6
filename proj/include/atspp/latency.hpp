#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atspp/errors.hpp"
#include "atspp/graph.hpp"
#include "atspp/metric.hpp"
#include "atspp/relaxations.hpp"
#include "json.hpp"

namespace atspp {

struct LatencyOrder {
  NodeSeq order;
  std::vector<Rational> latency;  // by node
  Rational total;                 // weighted when requested
};

struct PivotRecord {
  int i = 0;
  int j = 0;
  int pivot = -1;
  std::vector<int> A;
  std::vector<int> B;
  Rational threshold;              // for A
  Rational len_single;             // cost of the path through A
  Rational app_single;
  Rational max_cover_single;       // largest cover inside that ATSPP run
  std::vector<Rational> len_multi;
  std::vector<Rational> app_multi;
  std::vector<Rational> cover_multi;
};

struct BucketState {
  int g = 0;
  int log_n = 0;
  Rational unit;                           // 1/sigma: the smallest floored latency
  std::vector<Rational> normalized;        // floored latencies in units of `unit`
  std::vector<std::vector<int>> initial;   // V_1..V_g, index 0 unused
  std::vector<int> start_size;             // n'_i
  std::vector<int> end_size;               // |V_i| after the j loop
  std::vector<PivotRecord> pivots;
  std::vector<int> final_set;              // node set of P_g
  Rational len_final;
  Rational app_final;
  NodeSeq walk;                            // S before the final shortcut
};

struct LatencyOptions {
  bool weighted = false;
};

struct LatencyResult {
  LatencyOrder order;
  BucketState trace;
  LatencyLpSolution lp;
  Rational lp_value;          // LP objective, original units
  Rational floored_value;     // objective after the floor rule
  CheckLog checks;
};

// Extends S by the edge from its last node to the first node of P not on S,
// then the rest of P. Returns the new walk and that edge's length (0 when P
// adds nothing).
std::pair<NodeSeq, Rational> append(const NodeSeq& S, const NodeSeq& P, const MetricInstance& inst);

// Latency of every node along a Hamiltonian order (0 for the first node).
std::vector<Rational> order_latencies(const MetricInstance& inst, const NodeSeq& order);

// Sum of (weighted) latencies. Throws ArgumentError unless the order visits
// every node once from s to t.
Rational total_latency(const MetricInstance& inst, const NodeSeq& order, bool weighted = false);

// Bucketed stitching of ATSPP paths and multipath covers guided by the
// latency LP. Requires positive off-diagonal distances.
LatencyResult solve_latency(const MetricInstance& inst, const LatencyOptions& options = {});

// Worst-case ratio of solve_latency to the LP value assembled from the
// per-append and per-path bounds the run asserts:
// 16 c (1 + 1/n), c = 9 (2 log n + 1) + 38 log n, log n = ceil(log2 n).
Rational latency_bound_constant(int n);

// Triples (u, w, v) where x_uw + x_wv = 1 + eps with eps > 0 but
// l(v) < eps d_uw. Empty on any exact LP optimum.
std::vector<std::string> lemma9_violations(const MetricInstance& inst, const LatencyLpSolution& sol);

nlohmann::json bucket_state_to_json(const BucketState& state);

}  // namespace atspp
