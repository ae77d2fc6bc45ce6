#include "atspp/cover.hpp"

#include <algorithm>
#include <string>

#include "atspp/relaxations.hpp"

namespace atspp {

namespace {

std::vector<int> checked_set(const MetricInstance& inst, std::vector<int> W, const char* who) {
  std::sort(W.begin(), W.end());
  W.erase(std::unique(W.begin(), W.end()), W.end());
  for (int v : W) {
    if (v < 0 || v >= inst.n) throw ArgumentError(std::string(who) + ": node out of range");
  }
  if (W.size() < 2) throw ArgumentError(std::string(who) + ": |W| < 2");
  if (!std::binary_search(W.begin(), W.end(), inst.s) || !std::binary_search(W.begin(), W.end(), inst.t)) {
    throw ArgumentError(std::string(who) + ": W must contain s and t");
  }
  return W;
}

}  // namespace

KPathCycleCover min_k_path_cycle_cover(const MetricInstance& inst, const std::vector<int>& W_in, int k) {
  if (k < 1) throw ArgumentError("min_k_path_cycle_cover: k < 1");
  const auto W = checked_set(inst, W_in, "min_k_path_cycle_cover");
  const int s = inst.s;
  const int t = inst.t;

  std::vector<int> left;
  std::vector<int> right;
  for (int v : W) {
    if (v != t) left.insert(left.end(), v == s ? k : 1, v);
    if (v != s) right.insert(right.end(), v == t ? k : 1, v);
  }
  const std::size_t m = left.size();
  CostMatrix cost(m, std::vector<std::optional<Rational>>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (left[i] != right[j]) cost[i][j] = inst.dist(left[i], right[j]);
    }
  }
  MatchingResult match = min_cost_perfect_matching(cost);

  std::vector<int> succ(inst.n, -1);
  std::vector<int> firsts;
  for (std::size_t i = 0; i < m; ++i) {
    int w = right[match.assignment[i]];
    if (left[i] == s) {
      firsts.push_back(w);
    } else {
      succ[left[i]] = w;
    }
  }

  KPathCycleCover out;
  out.cost = match.cost;
  std::vector<bool> seen(inst.n, false);
  for (int first : firsts) {
    NodeSeq path{s};
    for (int v = first; v != t; v = succ[v]) {
      path.push_back(v);
      seen[v] = true;
    }
    path.push_back(t);
    out.paths.push_back(std::move(path));
  }
  for (int v : W) {
    if (v == s || v == t || seen[v]) continue;
    NodeSeq cycle;
    for (int u = v; !seen[u]; u = succ[u]) {
      seen[u] = true;
      cycle.push_back(u);
    }
    out.cycles.push_back(std::move(cycle));
  }
  return out;
}

PathCycleCover min_path_cycle_cover(const MetricInstance& inst, const std::vector<int>& W) {
  KPathCycleCover k = min_k_path_cycle_cover(inst, W, 1);
  return {std::move(k.paths.front()), std::move(k.cycles), std::move(k.cost)};
}

std::optional<std::string> degree_lp_violation(const MetricInstance& inst, const std::vector<int>& W,
                                               const ArcFlow& x) {
  std::vector<bool> inside(inst.n, false);
  for (int v : W) inside[v] = true;
  for (const auto& [arc, value] : x) {
    if (!inside[arc.first] || !inside[arc.second]) {
      return "arc (" + std::to_string(arc.first) + "," + std::to_string(arc.second) + ") leaves W";
    }
  }
  if (x.out_flow(inst.s) != Rational(1)) return "flow out of s is " + x.out_flow(inst.s).str();
  if (x.in_flow(inst.t) != Rational(1)) return "flow into t is " + x.in_flow(inst.t).str();
  if (!x.in_flow(inst.s).is_zero()) return "flow enters s";
  if (!x.out_flow(inst.t).is_zero()) return "flow leaves t";
  for (int v : W) {
    if (v == inst.s || v == inst.t) continue;
    Rational in = x.in_flow(v);
    if (in != x.out_flow(v)) return "node " + std::to_string(v) + " unbalanced";
    if (in < Rational(1)) return "node " + std::to_string(v) + " carries " + in.str();
  }
  return std::nullopt;
}

RoundedSolution lemma6_round(const MetricInstance& inst, const ArcFlow& x, const Rational& alpha) {
  if (alpha <= Rational(1, 2) || alpha > Rational(1)) {
    throw ArgumentError("lemma6_round: alpha must lie in (1/2, 1]");
  }
  if (auto why = lp_alpha_violation(inst, x, alpha)) {
    throw ContractViolation("lemma6_round: x is not LP(" + alpha.str() + ") feasible: " + *why);
  }
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;

  RoundedSolution out;
  out.gamma = Rational(1, 3) + (Rational(3) * alpha).reciprocal();
  out.input_cost = x.cost(inst.d);
  out.factor = Rational(3) / (Rational(2) * alpha - Rational(1));

  Decomposition dec = decompose_flow(x.scaled(alpha.reciprocal()), s, t);

  std::vector<Rational> through(n);
  for (const auto& p : dec.paths) {
    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) through[p.nodes[i]] += p.amount;
  }
  std::vector<bool> keep(n, false);
  keep[s] = keep[t] = true;
  for (int v = 0; v < n; ++v) {
    if (v != s && v != t && through[v] >= out.gamma) keep[v] = true;
  }

  std::vector<Arc> dag;
  for (auto& p : dec.paths) {
    NodeSeq shortened;
    for (int v : p.nodes) {
      if (keep[v]) shortened.push_back(v);
    }
    for (const Arc& a : seq_arcs(shortened)) dag.push_back(a);
  }
  for (int v : topological_order(n, dag)) {
    if (keep[v]) out.path.push_back(v);
  }
  for (int v = 0; v < n; ++v) {
    if (keep[v]) out.kept.push_back(v);
  }

  out.x_tilde = ArcFlow(n);
  out.x_tilde.add_path(out.path, Rational(1));
  Rational cycle_scale = (Rational(1) - out.gamma).reciprocal();
  for (const auto& c : dec.cycles) out.x_tilde.add_cycle(c.nodes, c.amount * cycle_scale);
  out.output_cost = out.x_tilde.cost(inst.d);

  std::vector<int> all(n);
  for (int v = 0; v < n; ++v) all[v] = v;
  auto why = degree_lp_violation(inst, all, out.x_tilde);
  out.checks.expect(!why, "rounding.degree_lp_feasible", why.value_or("ok"));
  Rational bound = out.factor * out.input_cost;
  out.checks.expect(out.output_cost <= bound, "rounding.cost_bound",
                    out.output_cost.str() + " <= " + bound.str());
  return out;
}

}  // namespace atspp
