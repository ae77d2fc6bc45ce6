#pragma once

#include <optional>
#include <string>
#include <vector>

#include "atspp/errors.hpp"
#include "atspp/graph.hpp"
#include "atspp/metric.hpp"

namespace atspp {

// One s-t path plus node-disjoint cycles covering W exactly once.
struct PathCycleCover {
  NodeSeq path;
  std::vector<NodeSeq> cycles;
  Rational cost;
};

// k s-t paths sharing only s and t, plus cycles.
struct KPathCycleCover {
  std::vector<NodeSeq> paths;
  std::vector<NodeSeq> cycles;
  Rational cost;
};

// Matching reduction: out-slots W\{t}, in-slots W\{s}, diagonal forbidden.
// Node indices are those of `inst`.
PathCycleCover min_path_cycle_cover(const MetricInstance& inst, const std::vector<int>& W);

// Same reduction with k out-slots for s and k in-slots for t.
KPathCycleCover min_k_path_cycle_cover(const MetricInstance& inst, const std::vector<int>& W, int k);

// Exact feasibility for the degree LP on W: in = out >= 1 at interior nodes,
// one unit out of s and into t, nothing into s or out of t, support inside W.
std::optional<std::string> degree_lp_violation(const MetricInstance& inst, const std::vector<int>& W,
                                               const ArcFlow& x);

struct RoundedSolution {
  ArcFlow x_tilde;
  NodeSeq path;          // P through the surviving set U
  std::vector<int> kept; // U
  Rational gamma;
  Rational input_cost;
  Rational output_cost;
  Rational factor;       // 3 / (2 alpha - 1)
  CheckLog checks;
};

// Turns an LP(alpha) point on all of inst's nodes (alpha > 1/2) into a
// degree-LP point of cost at most 3/(2 alpha - 1) times the input cost.
// Throws ContractViolation when x is not LP(alpha) feasible.
RoundedSolution lemma6_round(const MetricInstance& inst, const ArcFlow& x, const Rational& alpha);

}  // namespace atspp
