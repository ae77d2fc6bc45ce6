#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "atspp/graph.hpp"
#include "atspp/lp.hpp"
#include "atspp/metric.hpp"

namespace atspp {

struct LpAlphaResult {
  Rational value;
  ArcFlow x;
  int rounds = 0;
  int cuts = 0;
  long pivots = 0;
};

// LP(alpha) by cutting planes: degree constraints and singleton cuts first,
// then s-v min cuts of value below alpha until none remain. Throws
// ArgumentError unless 0 < alpha <= 1, InvariantViolation past 10 n^2 rounds.
LpAlphaResult solve_lp_alpha(const MetricInstance& inst, const Rational& alpha);

// Exact LP(alpha) feasibility test; returns a description of the first
// violated constraint.
std::optional<std::string> lp_alpha_violation(const MetricInstance& inst, const ArcFlow& x, const Rational& alpha);

struct LatencyLpOptions {
  bool weighted = false;         // objective sum c(v) l(v); needs instance weights
  bool universal_flow = false;   // add f^v_uw <= f^t_uw
};

// Variable layout of the latency model.
struct LatencyLpIndex {
  int n = 0;
  std::vector<int> latency;                        // per node, -1 for s
  std::vector<std::vector<int>> order;             // order[u][w], -1 on the diagonal
  std::vector<int> triple;                         // (u*n + v)*n + w, -1 if not distinct
  std::vector<std::vector<std::vector<int>>> flow; // flow[v][u][w], empty for v = s

  int x3(int u, int v, int w) const { return triple[(static_cast<std::size_t>(u) * n + v) * n + w]; }
};

struct LatencyModel {
  LpModel model;
  LatencyLpIndex index;
};

// Whole model except the set constraints, which are separated lazily.
LatencyModel build_latency_lp(const MetricInstance& inst, const LatencyLpOptions& options = {});

struct LatencyLpSolution {
  int n = 0;
  std::vector<std::vector<Rational>> x;                       // x[u][w]
  std::map<std::tuple<int, int, int>, Rational> x3;            // nonzero triples only
  std::vector<ArcFlow> f;                                     // f[v]; empty for v = s
  std::vector<Rational> latency;                              // 0 for s
  Rational objective;
  int rounds = 0;
  int cuts = 0;
  long pivots = 0;
};

// Cutting-plane solve: for each v != s and y not in {s, v}, a max flow from s
// to y under capacities f^v below x_yv yields a violated set constraint.
LatencyLpSolution solve_latency_lp(const MetricInstance& inst, const LatencyLpOptions& options = {});

// First violated set constraint of a latency solution, if any.
std::optional<std::string> latency_cut_violation(const LatencyLpSolution& sol, int s);

struct NormalizedLatency {
  LatencyLpSolution sol;  // latencies raised to at least l(t)/n^2
  Rational scale;         // sigma = 1 / min_v l'(v)
  Rational unweighted_before;
  Rational unweighted_after;
};

// Floor rule then unit scaling. Throws ContractViolation when some l(v) = 0
// for v != s.
NormalizedLatency normalize_latencies(const LatencyLpSolution& sol, const MetricInstance& inst,
                                      bool weighted = false);

nlohmann::json latency_solution_to_json(const LatencyLpSolution& sol);

}  // namespace atspp
