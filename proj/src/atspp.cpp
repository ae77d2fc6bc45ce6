#include "atspp/atspp.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "atspp/cover.hpp"

namespace atspp {

namespace {

struct Dsu {
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

// Groups arcs by the connected component of their undirected support. Each
// group is keyed by its smallest node.
std::map<int, std::vector<Arc>> components(int n, const std::vector<Arc>& arcs) {
  Dsu dsu(n);
  for (const auto& [a, b] : arcs) dsu.unite(a, b);
  std::map<int, int> key;
  for (const auto& [a, b] : arcs) {
    for (int v : {a, b}) {
      int r = dsu.find(v);
      auto it = key.find(r);
      if (it == key.end() || v < it->second) key[r] = v;
    }
  }
  std::map<int, std::vector<Arc>> out;
  for (const Arc& a : arcs) out[key.at(dsu.find(a.first))].push_back(a);
  return out;
}

std::vector<int> nodes_of(const std::vector<Arc>& arcs) {
  std::set<int> s;
  for (const auto& [a, b] : arcs) {
    s.insert(a);
    s.insert(b);
  }
  return {s.begin(), s.end()};
}

std::vector<Arc> union_arcs(const std::vector<NodeSeq>& paths) {
  std::set<Arc> arcs;
  for (const auto& p : paths) {
    for (const Arc& a : seq_arcs(p)) arcs.insert(a);
  }
  return {arcs.begin(), arcs.end()};
}

std::string seq_str(const NodeSeq& nodes) {
  std::string out;
  for (int v : nodes) out += (out.empty() ? "" : " ") + std::to_string(v);
  return out;
}

struct LoopResult {
  std::vector<bool> in_w;
  std::vector<int> labels;
  std::vector<NodeSeq> F;
  std::vector<Arc> H;
  std::vector<CoverLoopState> trace;
  Rational first_cover;
  Rational total_cover;
};

// Lines 1-16 of the cover loop with k-path-cycle covers.
LoopResult cover_loop(const MetricInstance& inst, int k, int T, CheckLog& checks) {
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;
  const int log_n = ceil_log2(n);

  LoopResult st;
  st.in_w.assign(n, true);
  st.labels.assign(n, 0);

  for (int it = 1; it <= T; ++it) {
    std::vector<int> W;
    for (int v = 0; v < n; ++v) {
      if (st.in_w[v]) W.push_back(v);
    }
    KPathCycleCover cover = min_k_path_cycle_cover(inst, W, k);
    if (it == 1) st.first_cover = cover.cost;
    st.total_cover += cover.cost;

    ArcFlow sum(n);
    for (const auto& p : st.F) sum.add_path(p, Rational(1));
    for (const auto& p : cover.paths) sum.add_path(p, Rational(1));
    for (const auto& c : cover.cycles) sum.add_cycle(c, Rational(1));
    Decomposition dec = decompose_flow(sum, s, t);

    st.F.clear();
    for (const auto& p : dec.paths) st.F.insert(st.F.end(), p.amount.floor(), p.nodes);
    std::vector<Arc> cyc;
    for (const auto& c : dec.cycles) {
      for (const Arc& a : seq_arcs(c.nodes, true)) cyc.insert(cyc.end(), c.amount.floor(), a);
    }

    for (const auto& [key, A] : components(n, cyc)) {
      std::map<int, int> indeg;
      for (int v : nodes_of(A)) indeg[v] = 0;
      for (const auto& a : A) ++indeg[a.second];
      int ones = 0;
      for (const auto& [v, d] : indeg) ones += d == 1 ? 1 : 0;
      checks.expect(ones >= 2, "claim1.two_indegree_one",
                    "component at " + std::to_string(key) + " has " + std::to_string(ones));

      int rep = -1;
      for (const auto& [v, d] : indeg) {
        if (rep < 0 || st.labels[v] + d < st.labels[rep] + indeg[rep]) rep = v;
      }
      std::vector<bool> drop(n, false);
      for (const auto& [v, d] : indeg) {
        if (v != rep) {
          drop[v] = true;
          st.in_w[v] = false;
        }
      }
      for (auto& p : st.F) std::erase_if(p, [&](int v) { return drop[v]; });
      st.H.insert(st.H.end(), A.begin(), A.end());
      st.labels[rep] += indeg[rep];
      checks.expect(st.labels[rep] <= log_n, "lemma1.label_bound",
                    "l_" + std::to_string(rep) + " = " + std::to_string(st.labels[rep]) +
                        " <= " + std::to_string(log_n));
    }

    try {
      topological_order(n, union_arcs(st.F));
      checks.expect(true, "loop.F_acyclic", "iteration " + std::to_string(it));
    } catch (const AcyclicityViolation& e) {
      checks.expect(false, "loop.F_acyclic", e.what());
    }
    std::vector<int> balance(n, 0);
    std::vector<bool> touched(n, false);
    for (const auto& [a, b] : st.H) {
      ++balance[a];
      --balance[b];
      touched[a] = touched[b] = true;
    }
    for (int v = 0; v < n; ++v) {
      if (balance[v] != 0) checks.expect(false, "loop.H_balanced", "node " + std::to_string(v));
      if (!st.in_w[v] && !touched[v]) checks.expect(false, "loop.node_accounted", "node " + std::to_string(v));
    }

    CoverLoopState snap;
    snap.iteration = it;
    for (int v = 0; v < n; ++v) {
      if (st.in_w[v]) snap.W.push_back(v);
    }
    snap.labels = st.labels;
    snap.F = st.F;
    snap.H = st.H;
    snap.cover_cost = cover.cost;
    st.trace.push_back(std::move(snap));
    checks.set_context({{"state", state_to_json(st.trace.back())}});
  }

  std::vector<int> through(n, 0);
  for (const auto& p : st.F) {
    for (int v : p) ++through[v];
  }
  for (int v = 0; v < n; ++v) {
    if (!st.in_w[v] || v == s || v == t) continue;
    checks.expect(through[v] == T - st.labels[v], "lemma3.path_count",
                  "node " + std::to_string(v) + ": " + std::to_string(through[v]) + " paths, T - l = " +
                      std::to_string(T - st.labels[v]));
  }
  checks.expect(through[s] == k * T, "lemma3.source_paths", std::to_string(through[s]));
  return st;
}

// One cycle per H component, rotated to start at the component's unique node
// in W.
std::vector<NodeSeq> h_cycles(const MetricInstance& inst, const LoopResult& st, CheckLog& checks) {
  std::vector<NodeSeq> out;
  for (const auto& [key, X] : components(inst.n, st.H)) {
    std::vector<int> shared;
    for (int v : nodes_of(X)) {
      if (st.in_w[v]) shared.push_back(v);
    }
    checks.expect(shared.size() == 1, "splice.one_shared_node",
                  "component at " + std::to_string(key) + " shares " + std::to_string(shared.size()));
    out.push_back(shortcut(walk_nodes(euler_tour(inst.n, X, shared.front()))));
  }
  return out;
}

void splice(NodeSeq& path, const NodeSeq& cycle) {
  auto at = std::find(path.begin(), path.end(), cycle.front());
  path.insert(at + 1, cycle.begin() + 1, cycle.end());
}

}  // namespace

int default_iterations(int n) { return 2 * ceil_log2(n) + 1; }

AtsppResult solve_atspp(const MetricInstance& inst, std::optional<int> iterations) {
  if (inst.n < 2) throw ArgumentError("solve_atspp: n < 2");
  const int n = inst.n;
  const int T = iterations.value_or(default_iterations(n));
  if (T < 1) throw ArgumentError("solve_atspp: iteration count < 1");

  AtsppResult out;
  out.iterations = T;
  LoopResult st = cover_loop(inst, 1, T, out.checks);
  out.first_cover_cost = st.first_cover;
  out.total_cover_cost = st.total_cover;

  std::vector<Arc> f_arcs = union_arcs(st.F);
  std::set<Arc> f_set(f_arcs.begin(), f_arcs.end());
  NodeSeq P{inst.s};
  for (int v : topological_order(n, f_arcs)) {
    if (st.in_w[v] && v != inst.s && v != inst.t) P.push_back(v);
  }
  P.push_back(inst.t);
  // Only guaranteed once every W node lies on more than half of the F paths.
  const bool proven = T >= default_iterations(n);
  for (std::size_t i = 0; i + 1 < P.size(); ++i) {
    bool ok = f_set.count({P[i], P[i + 1]}) > 0;
    std::string w = "(" + std::to_string(P[i]) + "," + std::to_string(P[i + 1]) + ")";
    if (proven) {
      out.checks.expect(ok, "stitch.consecutive_in_F", w);
    } else {
      out.checks.note(ok, "stitch.consecutive_in_F", w);
    }
  }

  for (const auto& cycle : h_cycles(inst, st, out.checks)) splice(P, cycle);
  P = shortcut(P);

  std::vector<bool> seen(n, false);
  for (int v : P) seen[v] = true;
  bool hamiltonian = static_cast<int>(P.size()) == n && P.front() == inst.s && P.back() == inst.t &&
                     std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  out.checks.expect(hamiltonian, "atspp.hamiltonian", seq_str(P));

  out.path = {P, path_cost(inst, P)};
  const bool within = out.path.cost <= out.total_cover_cost;
  const std::string cw = out.path.cost.str() + " <= " + out.total_cover_cost.str();
  if (proven) {
    out.checks.expect(within, "atspp.cost_within_covers", cw);
  } else {
    out.checks.note(within, "atspp.cost_within_covers", cw);
  }
  out.trace = std::move(st.trace);
  return out;
}

MultipathResult multipath_cover(const MetricInstance& inst, int k) {
  if (k < 1) throw ArgumentError("multipath_cover: k < 1");
  if (inst.n < 2) throw ArgumentError("multipath_cover: n < 2");
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;

  MultipathResult out;
  std::vector<bool> in_w(n, true);
  std::vector<Arc> arcs;
  do {
    std::vector<int> W;
    for (int v = 0; v < n; ++v) {
      if (in_w[v]) W.push_back(v);
    }
    const int before = static_cast<int>(W.size()) - 2;
    KPathCycleCover cover = min_k_path_cycle_cover(inst, W, k);
    out.cover_costs.push_back(cover.cost);
    for (const auto& p : cover.paths) {
      for (const Arc& a : seq_arcs(p)) arcs.push_back(a);
      for (std::size_t i = 1; i + 1 < p.size(); ++i) in_w[p[i]] = false;
    }
    for (const auto& c : cover.cycles) {
      for (const Arc& a : seq_arcs(c, true)) arcs.push_back(a);
      int keep = *std::min_element(c.begin(), c.end());
      for (int v : c) {
        if (v != keep) in_w[v] = false;
      }
    }
    int after = static_cast<int>(std::count(in_w.begin(), in_w.end(), true)) - 2;
    out.checks.expect(2 * after <= before, "multipath.halving",
                      std::to_string(before) + " -> " + std::to_string(after));
    ++out.iterations;
  } while (std::count(in_w.begin(), in_w.end(), true) > 2);
  out.checks.expect(out.iterations <= ceil_log2(n), "multipath.iterations",
                    std::to_string(out.iterations) + " <= " + std::to_string(ceil_log2(n)));

  const int dummies = k * out.iterations;
  arcs.insert(arcs.end(), dummies, Arc{t, s});
  std::vector<Arc> tour;
  try {
    tour = euler_tour(n, arcs, s);
  } catch (const ContractViolation& e) {
    out.checks.expect(false, "multipath.eulerian", e.what());
  }
  NodeSeq walk{s};
  for (const Arc& a : tour) {
    if (a == Arc{t, s}) {
      out.paths.push_back(shortcut(walk));
      walk = {s};
    } else {
      walk.push_back(a.second);
    }
  }
  out.checks.expect(static_cast<int>(out.paths.size()) == dummies, "multipath.path_count",
                    std::to_string(out.paths.size()));

  std::vector<bool> seen(n, false);
  for (const auto& p : out.paths) {
    for (int v : p) seen[v] = true;
    out.cost += path_cost(inst, p);
  }
  out.checks.expect(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }), "multipath.covers_all", "");
  Rational covers;
  for (const auto& c : out.cover_costs) covers += c;
  out.checks.expect(out.cost <= covers, "multipath.cost_within_covers", out.cost.str() + " <= " + covers.str());
  return out;
}

KPersonResult solve_k_person(const MetricInstance& inst, int k, std::optional<int> iterations) {
  if (k < 1) throw ArgumentError("solve_k_person: k < 1");
  if (inst.n < 2) throw ArgumentError("solve_k_person: n < 2");
  const int n = inst.n;
  const int s = inst.s;
  const int t = inst.t;
  const int T = iterations.value_or((k + 1) * ceil_log2(n) + 1);
  if (T < 1) throw ArgumentError("solve_k_person: iteration count < 1");

  KPersonResult out;
  out.iterations = T;
  LoopResult st = cover_loop(inst, k, T, out.checks);
  out.total_cover_cost = st.total_cover;

  std::vector<Arc> f_arcs = union_arcs(st.F);
  auto reach = reachability(n, f_arcs);
  std::vector<int> inner;
  std::vector<int> slot(n, -1);
  for (int v = 0; v < n; ++v) {
    if (st.in_w[v] && v != s && v != t) {
      slot[v] = static_cast<int>(inner.size());
      inner.push_back(v);
    }
  }
  const int m = static_cast<int>(inner.size());
  std::vector<std::vector<int>> adj(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (reach[inner[a]][inner[b]]) adj[a].push_back(b);
    }
  }
  std::vector<int> match = max_bipartite_matching(adj, m);
  std::vector<bool> has_pred(m, false);
  for (int a = 0; a < m; ++a) {
    if (match[a] >= 0) has_pred[match[a]] = true;
  }
  out.chains = static_cast<int>(std::count(has_pred.begin(), has_pred.end(), false));
  out.checks.expect(out.chains <= k, "lemma7.unmatched",
                    std::to_string(out.chains) + " <= " + std::to_string(k));

  for (int a = 0; a < m; ++a) {
    if (has_pred[a]) continue;
    NodeSeq path{s};
    for (int b = a; b >= 0; b = match[b]) path.push_back(inner[b]);
    path.push_back(t);
    out.paths.push_back(std::move(path));
  }

  // Realize each chain step by an F path and count arc usage.
  std::vector<std::vector<int>> succ(n);
  for (const auto& [a, b] : f_arcs) succ[a].push_back(b);
  std::map<Arc, int> usage;
  for (const auto& path : out.paths) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      std::vector<int> prev(n, -1);
      std::deque<int> queue{path[i]};
      prev[path[i]] = path[i];
      while (!queue.empty() && prev[path[i + 1]] < 0) {
        int u = queue.front();
        queue.pop_front();
        for (int w : succ[u]) {
          if (prev[w] < 0) {
            prev[w] = u;
            queue.push_back(w);
          }
        }
      }
      if (prev[path[i + 1]] < 0) {
        out.checks.expect(false, "lemma7.chain_realizable", seq_str({path[i], path[i + 1]}));
      }
      for (int w = path[i + 1]; w != path[i]; w = prev[w]) out.max_arc_usage = std::max(out.max_arc_usage, ++usage[{prev[w], w}]);
    }
  }
  out.checks.note(out.max_arc_usage <= k, "lemma7.arc_usage",
                  std::to_string(out.max_arc_usage) + " <= " + std::to_string(k));

  while (static_cast<int>(out.paths.size()) < k) out.paths.push_back({s, t});
  for (const auto& cycle : h_cycles(inst, st, out.checks)) {
    for (auto& p : out.paths) {
      if (std::find(p.begin(), p.end(), cycle.front()) != p.end()) {
        splice(p, cycle);
        break;
      }
    }
  }

  std::vector<int> count(n, 0);
  for (auto& p : out.paths) {
    p = shortcut(p);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) ++count[p[i]];
    out.cost += path_cost(inst, p);
  }
  bool partition = true;
  for (int v = 0; v < n; ++v) {
    if (v != s && v != t && count[v] != 1) partition = false;
  }
  out.checks.expect(partition, "kperson.partition", "");
  Rational bound = Rational(k) * out.total_cover_cost;
  out.checks.expect(out.cost <= bound, "kperson.cost_within_covers", out.cost.str() + " <= " + bound.str());
  out.trace = std::move(st.trace);
  return out;
}

nlohmann::json state_to_json(const CoverLoopState& state) {
  nlohmann::json h = nlohmann::json::array();
  for (const auto& [a, b] : state.H) h.push_back({a, b});
  return {{"iteration", state.iteration}, {"W", state.W},     {"labels", state.labels},
          {"F", state.F},                 {"H", h},           {"cover_cost", rational_to_json(state.cover_cost)}};
}

nlohmann::json trace_to_json(const std::vector<CoverLoopState>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : trace) out.push_back(state_to_json(s));
  return out;
}

}  // namespace atspp
