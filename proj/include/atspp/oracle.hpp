#pragma once

#include <vector>

#include "atspp/graph.hpp"
#include "atspp/metric.hpp"

namespace atspp {

inline constexpr int kAtsppOracleCap = 18;
inline constexpr int kLatencyOracleCap = 16;
inline constexpr int kKPersonOracleCap = 9;

struct ExactResult {
  Rational value;
  NodeSeq order;  // Hamiltonian s-t path achieving value
};

// Subset DP over interior nodes, (visited set, last node). Throws SizeError
// for n above kAtsppOracleCap.
ExactResult exact_atspp(const MetricInstance& inst);

// Subset DP where arc (u, w) costs d_uw times the weight still unvisited.
ExactResult exact_latency(const MetricInstance& inst, bool weighted = false);

struct ExactKPerson {
  Rational value;
  std::vector<NodeSeq> paths;  // exactly k; an empty path is [s, t] and costs d_st
};

// Best split of the interior nodes into k s-t paths.
ExactKPerson exact_k_person(const MetricInstance& inst, int k);

}  // namespace atspp
