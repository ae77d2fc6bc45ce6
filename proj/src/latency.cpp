#include "atspp/latency.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "atspp/atspp.hpp"

namespace atspp {

namespace {

// Largest e with 2^e <= r, for r >= 1.
int floor_log2(const Rational& r) {
  int e = 0;
  while (pow2(e + 1) <= r) ++e;
  return e;
}

NodeSeq to_original(const SubInstance& sub, const NodeSeq& path) {
  NodeSeq out;
  out.reserve(path.size());
  for (int v : path) out.push_back(sub.to_original[v]);
  return out;
}

std::vector<int> with_endpoints(std::set<int> nodes, int a, int b) {
  nodes.insert(a);
  nodes.insert(b);
  return {nodes.begin(), nodes.end()};
}

std::string le(const Rational& a, const Rational& b) { return a.str() + " <= " + b.str(); }

}  // namespace

std::pair<NodeSeq, Rational> append(const NodeSeq& S, const NodeSeq& P, const MetricInstance& inst) {
  if (S.empty() || P.empty() || S.front() != P.front()) {
    throw ArgumentError("append: S and P must start at the same node");
  }
  std::set<int> on_s(S.begin(), S.end());
  auto first_new = std::find_if(P.begin(), P.end(), [&](int v) { return on_s.count(v) == 0; });
  if (first_new == P.end()) return {S, Rational()};
  Rational len = inst.dist(S.back(), *first_new);
  NodeSeq out = S;
  out.insert(out.end(), first_new, P.end());
  return {std::move(out), std::move(len)};
}

std::vector<Rational> order_latencies(const MetricInstance& inst, const NodeSeq& order) {
  std::vector<Rational> lat(inst.n);
  Rational run;
  for (std::size_t i = 1; i < order.size(); ++i) {
    run += inst.dist(order[i - 1], order[i]);
    lat[order[i]] = run;
  }
  return lat;
}

Rational total_latency(const MetricInstance& inst, const NodeSeq& order, bool weighted) {
  std::vector<bool> seen(inst.n, false);
  bool ok = static_cast<int>(order.size()) == inst.n && !order.empty() && order.front() == inst.s &&
            order.back() == inst.t;
  for (int v : order) {
    if (!ok || v < 0 || v >= inst.n || seen[v]) {
      ok = false;
      break;
    }
    seen[v] = true;
  }
  if (!ok) throw ArgumentError("total_latency: order is not a Hamiltonian s-t path");
  if (weighted && !inst.weights) throw ArgumentError("total_latency: instance has no weights");
  auto lat = order_latencies(inst, order);
  Rational total;
  for (int v : order) total += weighted ? inst.weight(v) * lat[v] : lat[v];
  return total;
}

Rational latency_bound_constant(int n) {
  const long long L = ceil_log2(n);
  Rational c = Rational(9 * (2 * L + 1) + 38 * L);
  return Rational(16) * c * (Rational(1) + Rational(1, n));
}

LatencyResult solve_latency(const MetricInstance& inst, const LatencyOptions& options) {
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;
  if (n < 2) throw ArgumentError("solve_latency: n < 2");
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u != v && inst.dist(u, v).sign() <= 0) {
        throw ArgumentError("solve_latency: distance " + std::to_string(u) + "->" + std::to_string(v) +
                            " is not positive");
      }
    }
  }
  if (options.weighted && !inst.weights) throw ArgumentError("solve_latency: instance has no weights");

  LatencyResult out;
  CheckLog& checks = out.checks;
  BucketState& st = out.trace;

  out.lp = solve_latency_lp(inst, {options.weighted, false});
  out.lp_value = out.lp.objective;
  NormalizedLatency norm = normalize_latencies(out.lp, inst, options.weighted);
  out.floored_value = norm.sol.objective;
  const auto& x = norm.sol.x;
  const auto& lat = norm.sol.latency;

  Rational growth = (Rational(1) + Rational(1, n)) * norm.unweighted_before;
  checks.expect(norm.unweighted_after <= growth, "scale.value_growth", le(norm.unweighted_after, growth));
  st.unit = norm.scale.reciprocal();
  st.normalized.assign(n, Rational());
  for (int v = 0; v < n; ++v) {
    if (v != s) st.normalized[v] = lat[v] * norm.scale;
  }
  Rational n2(static_cast<long long>(n) * n);
  checks.expect(st.normalized[t] <= n2, "scale.max_over_min", le(st.normalized[t], n2));

  st.log_n = ceil_log2(n);
  const int L = st.log_n;
  st.g = floor_log2(st.normalized[t]) + 1;
  checks.expect(st.g <= 2 * L + 1, "buckets.count", std::to_string(st.g) + " <= " + std::to_string(2 * L + 1));

  std::vector<std::set<int>> V(st.g + 2);
  for (int v = 0; v < n; ++v) {
    if (v == s) continue;
    int i = floor_log2(st.normalized[v]) + 1;
    checks.expect(i >= 1 && i <= st.g, "buckets.range", "node " + std::to_string(v));
    V[i].insert(v);
  }
  st.initial.assign(st.g + 1, {});
  Rational lhs;
  Rational rhs;
  for (int i = 1; i <= st.g; ++i) {
    st.initial[i].assign(V[i].begin(), V[i].end());
    rhs += Rational(static_cast<long long>(V[i].size())) * pow2(i - 1);
  }
  for (int v = 0; v < n; ++v) lhs += st.normalized[v];
  checks.expect(lhs >= rhs, "buckets.lower_bound", le(rhs, lhs));

  auto in_bound = [&](int i) { return pow2(i) * st.unit; };
  const bool counted = !options.weighted;

  NodeSeq S{s};
  for (int i = 1; i <= st.g - 1; ++i) {
    const int start = static_cast<int>(V[i].size());
    st.start_size.push_back(start);
    for (int j = 1; j <= 2; ++j) {
      if (V[i].empty()) continue;
      const int cur = static_cast<int>(V[i].size());
      PivotRecord rec;
      rec.i = i;
      rec.j = j;

      Rational best(-1);
      for (int v : V[i]) {
        Rational score;
        for (int u : V[i]) {
          if (u != v && x[u][v] >= Rational(1, 2)) score += options.weighted ? inst.weight(u) : Rational(1);
        }
        if (score > best) {
          best = score;
          rec.pivot = v;
        }
      }
      const int v = rec.pivot;
      rec.threshold = Rational(2, 3) + Rational(2 * i - 2 + j, 24LL * L);
      std::set<int> A;
      std::set<int> B;
      for (int u = 0; u < n; ++u) {
        if (u != v && x[u][v] >= rec.threshold) A.insert(u);
      }
      for (int u : V[i]) {
        if (u != v && x[u][v] >= Rational(1, 2)) B.insert(u);
      }
      rec.A.assign(A.begin(), A.end());
      rec.B.assign(B.begin(), B.end());
      const std::string at = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      bool covers_half = 2 * (static_cast<int>(B.size()) + 1) >= cur;
      if (counted) {
        checks.expect(covers_half, "claim2.pivot_coverage", at);
      } else {
        checks.note(covers_half, "claim2.pivot_coverage", at);
      }

      SubInstance sa = induced_subinstance(inst, with_endpoints(A, s, v), s, v);
      AtsppResult ra = solve_atspp(sa.inst);
      NodeSeq pa = to_original(sa, ra.path.nodes);
      rec.len_single = ra.path.cost;
      for (const auto& state : ra.trace) rec.max_cover_single = max(rec.max_cover_single, state.cover_cost);
      checks.expect(rec.max_cover_single <= Rational(9) * in_bound(i), "paths.cover_bound_A",
                    at + " " + le(rec.max_cover_single, Rational(9) * in_bound(i)));
      Rational first_bound = Rational(ra.iterations) * ra.first_cover_cost;
      checks.note(ra.path.cost <= first_bound, "paths.first_cover_multiple", at + " " + le(ra.path.cost, first_bound));
      auto [s1, app1] = append(S, pa, inst);
      S = std::move(s1);
      rec.app_single = app1;
      Rational lemma10 = Rational(24LL * L) * in_bound(i);
      checks.expect(app1 <= lemma10, "lemma10.app_single", at + " " + le(app1, lemma10));

      SubInstance sb = induced_subinstance(inst, with_endpoints(B, s, v), s, v);
      MultipathResult rb = multipath_cover(sb.inst, 2);
      rec.cover_multi = rb.cover_costs;
      for (const auto& c : rb.cover_costs) {
        checks.expect(c <= Rational(2) * in_bound(i), "paths.cover_bound_B", at + " " + le(c, Rational(2) * in_bound(i)));
      }
      for (const auto& p : rb.paths) {
        NodeSeq pb = to_original(sb, p);
        rec.len_multi.push_back(path_cost(inst, pb));
        auto [s2, app2] = append(S, pb, inst);
        S = std::move(s2);
        Rational lemma8 = Rational(6) * in_bound(i);
        checks.expect(app2 <= lemma8, "lemma8.app_multi", at + " " + le(app2, lemma8));
        rec.app_multi.push_back(std::move(app2));
      }

      for (int u : A) V[i].erase(u);
      for (int u : B) V[i].erase(u);
      V[i].erase(v);
      bool halved = 2 * static_cast<int>(V[i].size()) <= cur;
      if (counted) {
        checks.expect(halved, "claim2.halving", at);
      } else {
        checks.note(halved, "claim2.halving", at);
      }
      st.pivots.push_back(std::move(rec));
    }
    const int end = static_cast<int>(V[i].size());
    st.end_size.push_back(end);
    std::string w = std::to_string(end) + " <= " + std::to_string(start) + "/4";
    if (counted) {
      checks.expect(4 * end <= start, "claim2.quarter", w);
    } else {
      checks.note(4 * end <= start, "claim2.quarter", w);
    }
    V[i + 1].insert(V[i].begin(), V[i].end());
    V[i].clear();
  }

  std::set<int> last = V[st.g];
  std::set<int> on_s(S.begin(), S.end());
  for (int v = 0; v < n; ++v) {
    if (!on_s.count(v)) last.insert(v);
  }
  st.final_set = with_endpoints(last, s, t);
  SubInstance sg = induced_subinstance(inst, st.final_set, s, t);
  AtsppResult rg = solve_atspp(sg.inst);
  for (const auto& state : rg.trace) {
    checks.expect(state.cover_cost <= lat[t], "paths.cover_bound_g", le(state.cover_cost, lat[t]));
  }
  NodeSeq pg = to_original(sg, rg.path.nodes);
  st.len_final = rg.path.cost;
  auto [s3, app3] = append(S, pg, inst);
  S = std::move(s3);
  st.app_final = app3;
  Rational lemma8g = Rational(6) * in_bound(st.g);
  checks.expect(app3 <= lemma8g, "lemma8.app_final", le(app3, lemma8g));

  st.walk = S;
  out.order.order = shortcut(S);
  std::vector<bool> seen(n, false);
  for (int v : out.order.order) seen[v] = true;
  bool hamiltonian = static_cast<int>(out.order.order.size()) == n && out.order.order.back() == t &&
                     std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  checks.expect(hamiltonian, "latency.hamiltonian", "");
  out.order.latency = order_latencies(inst, out.order.order);
  out.order.total = total_latency(inst, out.order.order, options.weighted);
  return out;
}

std::vector<std::string> lemma9_violations(const MetricInstance& inst, const LatencyLpSolution& sol) {
  std::vector<std::string> out;
  const int n = inst.n;
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      for (int v = 0; v < n; ++v) {
        if (u == w || w == v || u == v || v == inst.s) continue;
        Rational eps = sol.x[u][w] + sol.x[w][v] - Rational(1);
        if (eps.sign() <= 0) continue;
        if (sol.latency[v] < eps * inst.dist(u, w)) {
          out.push_back("(" + std::to_string(u) + "," + std::to_string(w) + "," + std::to_string(v) + ")");
        }
      }
    }
  }
  return out;
}

nlohmann::json bucket_state_to_json(const BucketState& state) {
  auto rats = [](const std::vector<Rational>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : v) a.push_back(rational_to_json(r));
    return a;
  };
  nlohmann::json pivots = nlohmann::json::array();
  for (const auto& p : state.pivots) {
    pivots.push_back({{"i", p.i},
                      {"j", p.j},
                      {"pivot", p.pivot},
                      {"A", p.A},
                      {"B", p.B},
                      {"threshold", rational_to_json(p.threshold)},
                      {"len_single", rational_to_json(p.len_single)},
                      {"app_single", rational_to_json(p.app_single)},
                      {"max_cover_single", rational_to_json(p.max_cover_single)},
                      {"len_multi", rats(p.len_multi)},
                      {"app_multi", rats(p.app_multi)},
                      {"cover_multi", rats(p.cover_multi)}});
  }
  return {{"g", state.g},
          {"log_n", state.log_n},
          {"unit", rational_to_json(state.unit)},
          {"normalized_latency", rats(state.normalized)},
          {"buckets", state.initial},
          {"start_size", state.start_size},
          {"end_size", state.end_size},
          {"pivots", std::move(pivots)},
          {"final_set", state.final_set},
          {"len_final", rational_to_json(state.len_final)},
          {"app_final", rational_to_json(state.app_final)},
          {"walk", state.walk}};
}

}  // namespace atspp
