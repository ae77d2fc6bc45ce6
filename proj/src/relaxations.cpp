#include "atspp/relaxations.hpp"

#include <string>

#include "atspp/errors.hpp"

namespace atspp {

namespace {

std::string pair_name(const char* prefix, int u, int w) {
  return std::string(prefix) + "[" + std::to_string(u) + "," + std::to_string(w) + "]";
}

// Arcs entering the node set `inside` from outside.
std::vector<Arc> entering_arcs(int n, const std::vector<int>& inside_nodes) {
  std::vector<bool> inside(n, false);
  for (int v : inside_nodes) inside[v] = true;
  std::vector<Arc> arcs;
  for (int u = 0; u < n; ++u) {
    if (inside[u]) continue;
    for (int w = 0; w < n; ++w) {
      if (inside[w]) arcs.push_back({u, w});
    }
  }
  return arcs;
}

int round_cap(int n) { return 10 * n * n; }

}  // namespace

LpAlphaResult solve_lp_alpha(const MetricInstance& inst, const Rational& alpha) {
  if (alpha.sign() <= 0 || alpha > Rational(1)) throw ArgumentError("solve_lp_alpha: alpha must lie in (0, 1]");
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;
  LpModel model;
  std::vector<std::vector<int>> var(n, std::vector<int>(n, -1));
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u != w) var[u][w] = model.add_variable(pair_name("x", u, w), inst.d[u][w]);
    }
  }
  auto out_terms = [&](int u, Rational c) {
    std::vector<Term> terms;
    for (int w = 0; w < n; ++w) {
      if (w != u) terms.push_back({var[u][w], c});
    }
    return terms;
  };
  auto in_terms = [&](int u, Rational c) {
    std::vector<Term> terms;
    for (int w = 0; w < n; ++w) {
      if (w != u) terms.push_back({var[w][u], c});
    }
    return terms;
  };
  for (int u = 0; u < n; ++u) {
    if (u == s || u == t) continue;
    auto terms = out_terms(u, Rational(1));
    for (auto& term : in_terms(u, Rational(-1))) terms.push_back(std::move(term));
    model.add_constraint({std::move(terms), Sense::kEq, Rational(), "balance" + std::to_string(u)});
  }
  model.add_constraint({out_terms(s, Rational(1)), Sense::kEq, Rational(1), "out_s"});
  model.add_constraint({in_terms(t, Rational(1)), Sense::kEq, Rational(1), "in_t"});
  model.add_constraint({in_terms(s, Rational(1)), Sense::kEq, Rational(), "in_s"});
  model.add_constraint({out_terms(t, Rational(1)), Sense::kEq, Rational(), "out_t"});
  for (int v = 0; v < n; ++v) {
    if (v != s) model.add_constraint({in_terms(v, Rational(1)), Sense::kGe, alpha, "cut{" + std::to_string(v) + "}"});
  }

  SimplexSolver solver(std::move(model));
  LpSolution sol = solver.solve();
  if (sol.status != LpStatus::kOptimal) {
    throw InvariantViolation(std::string("solve_lp_alpha: LP reported ") + to_string(sol.status));
  }

  LpAlphaResult result;
  auto to_flow = [&](const LpSolution& lp) {
    ArcFlow x(n);
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        if (u != w && !lp.values[var[u][w]].is_zero()) x.set(u, w, lp.values[var[u][w]]);
      }
    }
    return x;
  };
  for (;;) {
    ArcFlow x = to_flow(sol);
    int added = 0;
    for (int v = 0; v < n; ++v) {
      if (v == s) continue;
      MinCut cut = max_flow_min_cut(x, s, v);
      if (cut.value >= alpha) continue;
      std::vector<Term> terms;
      for (auto [u, w] : entering_arcs(n, cut.sink_side)) terms.push_back({var[u][w], Rational(1)});
      std::string name = "cut{";
      for (int w : cut.sink_side) name += std::to_string(w) + ",";
      name.back() = '}';
      solver.add_cut({std::move(terms), Sense::kGe, alpha, std::move(name)});
      ++added;
    }
    if (added == 0) {
      result.value = sol.objective;
      result.x = std::move(x);
      break;
    }
    result.cuts += added;
    if (++result.rounds > round_cap(n)) {
      throw InvariantViolation("solve_lp_alpha: separation exceeded " + std::to_string(round_cap(n)) + " rounds",
                               {{"rounds", result.rounds}, {"cuts", result.cuts}});
    }
    Rational previous = sol.objective;
    sol = solver.reoptimize();
    if (sol.status != LpStatus::kOptimal) {
      throw InvariantViolation(std::string("solve_lp_alpha: LP reported ") + to_string(sol.status));
    }
    if (sol.objective < previous) throw InvariantViolation("solve_lp_alpha: LP value decreased after a cut");
  }
  result.pivots = solver.total_pivots();
  return result;
}

std::optional<std::string> lp_alpha_violation(const MetricInstance& inst, const ArcFlow& x, const Rational& alpha) {
  const int n = inst.n;
  if (x.n() != n) return "flow has the wrong ground set";
  for (const auto& [arc, value] : x) {
    if (value.sign() < 0) return "negative arc value";
  }
  for (int u = 0; u < n; ++u) {
    if (u == inst.s || u == inst.t) continue;
    if (x.in_flow(u) != x.out_flow(u)) return "unbalanced node " + std::to_string(u);
  }
  if (x.out_flow(inst.s) != Rational(1)) return "out-flow of s is not 1";
  if (x.in_flow(inst.t) != Rational(1)) return "in-flow of t is not 1";
  if (!x.in_flow(inst.s).is_zero()) return "flow enters s";
  if (!x.out_flow(inst.t).is_zero()) return "flow leaves t";
  for (int v = 0; v < n; ++v) {
    if (v == inst.s) continue;
    MinCut cut = max_flow_min_cut(x, inst.s, v);
    if (cut.value < alpha) return "cut into node " + std::to_string(v) + " has value " + cut.value.str();
  }
  return std::nullopt;
}

LatencyModel build_latency_lp(const MetricInstance& inst, const LatencyLpOptions& options) {
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;
  if (n < 2) throw ArgumentError("build_latency_lp: need at least two nodes");
  if (options.weighted && !inst.weights) throw ArgumentError("build_latency_lp: weighted objective needs weights");
  LatencyModel out;
  LpModel& m = out.model;
  LatencyLpIndex& idx = out.index;
  idx.n = n;

  idx.latency.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (v != s) {
      idx.latency[v] = m.add_variable("l[" + std::to_string(v) + "]", options.weighted ? inst.weight(v) : Rational(1));
    }
  }
  idx.order.assign(n, std::vector<int>(n, -1));
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u != w) idx.order[u][w] = m.add_variable(pair_name("x", u, w));
    }
  }
  idx.triple.assign(static_cast<std::size_t>(n) * n * n, -1);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      for (int w = 0; w < n; ++w) {
        if (u == v || v == w || u == w) continue;
        idx.triple[(static_cast<std::size_t>(u) * n + v) * n + w] =
            m.add_variable("x[" + std::to_string(u) + "," + std::to_string(v) + "," + std::to_string(w) + "]");
      }
    }
  }
  idx.flow.assign(n, {});
  for (int v = 0; v < n; ++v) {
    if (v == s) continue;
    idx.flow[v].assign(n, std::vector<int>(n, -1));
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        if (u != w) {
          idx.flow[v][u][w] = m.add_variable("f" + std::to_string(v) + "[" + std::to_string(u) + "," +
                                             std::to_string(w) + "]");
        }
      }
    }
  }

  const Rational one(1);
  for (int v = 0; v < n; ++v) {
    if (v == s) continue;
    std::vector<Term> terms{{idx.latency[v], one}};
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        if (u != w && !inst.d[u][w].is_zero()) terms.push_back({idx.flow[v][u][w], -inst.d[u][w]});
      }
    }
    m.add_constraint({std::move(terms), Sense::kGe, Rational(), "latency_flow" + std::to_string(v)});
  }
  // l(v) >= (d_su + d_uw + d_wv) x_uwv
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      for (int v = 0; v < n; ++v) {
        if (u == w || w == v || u == v || v == s) continue;
        Rational coef = inst.d[s][u] + inst.d[u][w] + inst.d[w][v];
        if (coef.is_zero()) continue;
        m.add_constraint({{{idx.latency[v], one}, {idx.x3(u, w, v), -coef}},
                          Sense::kGe,
                          Rational(),
                          "latency_triple[" + std::to_string(u) + "," + std::to_string(w) + "," +
                              std::to_string(v) + "]"});
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (v == s || v == t) continue;
    m.add_constraint({{{idx.latency[t], one}, {idx.latency[v], -one}}, Sense::kGe, Rational(),
                      "latency_last" + std::to_string(v)});
  }
  // x_uw = x_vuw + x_uvw + x_uwv
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (u == w) continue;
      for (int v = 0; v < n; ++v) {
        if (v == u || v == w) continue;
        m.add_constraint({{{idx.order[u][w], one},
                           {idx.x3(v, u, w), -one},
                           {idx.x3(u, v, w), -one},
                           {idx.x3(u, w, v), -one}},
                          Sense::kEq,
                          Rational(),
                          "order_split[" + std::to_string(u) + "," + std::to_string(w) + "," + std::to_string(v) +
                              "]"});
      }
    }
  }
  for (int u = 0; u < n; ++u) {
    for (int w = u + 1; w < n; ++w) {
      m.add_constraint({{{idx.order[u][w], one}, {idx.order[w][u], one}}, Sense::kEq, one, pair_name("order", u, w)});
    }
  }
  for (int u = 0; u < n; ++u) {
    if (u != s) m.add_constraint({{{idx.order[s][u], one}}, Sense::kEq, one, "first" + std::to_string(u)});
    if (u != t && u != s) m.add_constraint({{{idx.order[u][t], one}}, Sense::kEq, one, "last" + std::to_string(u)});
  }

  for (int v = 0; v < n; ++v) {
    if (v == s) continue;
    const auto& fv = idx.flow[v];
    const std::string tag = std::to_string(v);
    for (int u = 0; u < n; ++u) {
      if (u == s || u == v) continue;
      std::vector<Term> terms;
      for (int w = 0; w < n; ++w) {
        if (w == u) continue;
        terms.push_back({fv[w][u], one});
        terms.push_back({fv[u][w], -one});
      }
      m.add_constraint({std::move(terms), Sense::kEq, Rational(), "flow" + tag + "_balance" + std::to_string(u)});
    }
    std::vector<Term> out_s;
    std::vector<Term> in_v;
    for (int w = 0; w < n; ++w) {
      if (w != s) out_s.push_back({fv[s][w], one});
      if (w != v) in_v.push_back({fv[w][v], one});
    }
    m.add_constraint({std::move(out_s), Sense::kEq, one, "flow" + tag + "_source"});
    m.add_constraint({std::move(in_v), Sense::kEq, one, "flow" + tag + "_sink"});
    for (int u = 0; u < n; ++u) {
      if (u != s) m.add_constraint({{{fv[u][s], one}}, Sense::kEq, Rational(), "flow" + tag + "_into_s" + std::to_string(u)});
      if (u != v) m.add_constraint({{{fv[v][u], one}}, Sense::kEq, Rational(), "flow" + tag + "_out_of_v" + std::to_string(u)});
    }
    for (int u = 0; u < n; ++u) {
      if (u == v) continue;
      std::vector<Term> terms;
      for (int w = 0; w < n; ++w) {
        if (w != u) terms.push_back({fv[u][w], one});
      }
      terms.push_back({idx.order[u][v], -one});
      m.add_constraint({std::move(terms), Sense::kEq, Rational(), "flow" + tag + "_through" + std::to_string(u)});
    }
    if (options.universal_flow && v != t) {
      for (int u = 0; u < n; ++u) {
        for (int w = 0; w < n; ++w) {
          if (u == w) continue;
          m.add_constraint({{{fv[u][w], one}, {idx.flow[t][u][w], -one}}, Sense::kLe, Rational(),
                            "universal" + tag + pair_name("", u, w)});
        }
      }
    }
  }
  return out;
}

namespace {

LatencyLpSolution unpack(const LatencyLpIndex& idx, const LpSolution& lp, int s) {
  const int n = idx.n;
  LatencyLpSolution sol;
  sol.n = n;
  sol.x.assign(n, std::vector<Rational>(n));
  sol.latency.assign(n, Rational());
  sol.f.assign(n, ArcFlow(n));
  for (int u = 0; u < n; ++u) {
    if (u != s) sol.latency[u] = lp.values[idx.latency[u]];
    for (int w = 0; w < n; ++w) {
      if (u != w) sol.x[u][w] = lp.values[idx.order[u][w]];
      for (int v = 0; v < n; ++v) {
        if (u == v || v == w || u == w) continue;
        const Rational& value = lp.values[idx.x3(u, v, w)];
        if (!value.is_zero()) sol.x3[{u, v, w}] = value;
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (v == s) continue;
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        if (u == w) continue;
        const Rational& value = lp.values[idx.flow[v][u][w]];
        if (!value.is_zero()) sol.f[v].set(u, w, value);
      }
    }
  }
  sol.objective = lp.objective;
  return sol;
}

}  // namespace

LatencyLpSolution solve_latency_lp(const MetricInstance& inst, const LatencyLpOptions& options) {
  LatencyModel built = build_latency_lp(inst, options);
  const LatencyLpIndex idx = built.index;
  const int n = inst.n;
  const int s = inst.s;
  SimplexSolver solver(std::move(built.model));
  LpSolution lp = solver.solve();
  if (lp.status != LpStatus::kOptimal) {
    throw InvariantViolation(std::string("solve_latency_lp: LP reported ") + to_string(lp.status));
  }
  int rounds = 0;
  int cuts = 0;
  for (;;) {
    LatencyLpSolution sol = unpack(idx, lp, s);
    int added = 0;
    for (int v = 0; v < n; ++v) {
      if (v == s) continue;
      for (int y = 0; y < n; ++y) {
        // y = v is implied by the unit v-flow.
        if (y == s || y == v) continue;
        MinCut cut = max_flow_min_cut(sol.f[v], s, y);
        if (cut.value >= sol.x[y][v]) continue;
        std::vector<Term> terms;
        for (auto [u, w] : entering_arcs(n, cut.sink_side)) terms.push_back({idx.flow[v][u][w], Rational(1)});
        terms.push_back({idx.order[y][v], Rational(-1)});
        std::string name = "set" + std::to_string(v) + "_" + std::to_string(y) + "{";
        for (int w : cut.sink_side) name += std::to_string(w) + ",";
        name.back() = '}';
        solver.add_cut({std::move(terms), Sense::kGe, Rational(), std::move(name)});
        ++added;
      }
    }
    if (added == 0) {
      sol.rounds = rounds;
      sol.cuts = cuts;
      sol.pivots = solver.total_pivots();
      return sol;
    }
    cuts += added;
    if (++rounds > round_cap(n)) {
      throw InvariantViolation("solve_latency_lp: separation exceeded " + std::to_string(round_cap(n)) + " rounds",
                               {{"rounds", rounds}, {"cuts", cuts}});
    }
    Rational previous = lp.objective;
    lp = solver.reoptimize();
    if (lp.status != LpStatus::kOptimal) {
      throw InvariantViolation(std::string("solve_latency_lp: LP reported ") + to_string(lp.status));
    }
    if (lp.objective < previous) throw InvariantViolation("solve_latency_lp: LP value decreased after a cut");
  }
}

std::optional<std::string> latency_cut_violation(const LatencyLpSolution& sol, int s) {
  for (int v = 0; v < sol.n; ++v) {
    if (v == s) continue;
    for (int y = 0; y < sol.n; ++y) {
      if (y == s || y == v) continue;
      MinCut cut = max_flow_min_cut(sol.f[v], s, y);
      if (cut.value < sol.x[y][v]) {
        return "flow " + std::to_string(v) + " carries " + cut.value.str() + " into node " + std::to_string(y) +
               " but x = " + sol.x[y][v].str();
      }
    }
  }
  return std::nullopt;
}

NormalizedLatency normalize_latencies(const LatencyLpSolution& sol, const MetricInstance& inst, bool weighted) {
  const int n = inst.n;
  NormalizedLatency out;
  out.sol = sol;
  for (int v = 0; v < n; ++v) {
    if (v != inst.s && sol.latency[v].sign() <= 0) {
      throw ContractViolation("normalize_latencies: node " + std::to_string(v) + " has zero latency");
    }
  }
  const Rational floor = sol.latency[inst.t] / Rational(static_cast<long long>(n) * n);
  Rational least;
  bool first = true;
  out.sol.objective = Rational();
  for (int v = 0; v < n; ++v) {
    if (v == inst.s) continue;
    Rational& l = out.sol.latency[v];
    out.unweighted_before += l;
    if (l < floor) l = floor;
    out.unweighted_after += l;
    out.sol.objective += weighted ? inst.weight(v) * l : l;
    if (first || l < least) least = l;
    first = false;
  }
  out.scale = least.reciprocal();
  return out;
}

nlohmann::json latency_solution_to_json(const LatencyLpSolution& sol) {
  nlohmann::json j;
  j["objective"] = rational_to_json(sol.objective);
  j["rounds"] = sol.rounds;
  j["cuts"] = sol.cuts;
  j["pivots"] = sol.pivots;
  nlohmann::json lat = nlohmann::json::array();
  for (const auto& l : sol.latency) lat.push_back(rational_to_json(l));
  j["latency"] = std::move(lat);
  nlohmann::json x = nlohmann::json::array();
  for (const auto& row : sol.x) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& value : row) r.push_back(rational_to_json(value));
    x.push_back(std::move(r));
  }
  j["x"] = std::move(x);
  return j;
}

}  // namespace atspp
