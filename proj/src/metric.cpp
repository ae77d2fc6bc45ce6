#include "atspp/metric.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "atspp/errors.hpp"

namespace atspp {

ValidationReport validate(const MetricInstance& inst) {
  const int n = inst.n;
  if (n < 2) throw StructuralError("validate: need at least two nodes");
  if (static_cast<int>(inst.d.size()) != n) throw StructuralError("validate: matrix has wrong row count");
  for (const auto& row : inst.d) {
    if (static_cast<int>(row.size()) != n) throw StructuralError("validate: distance matrix is not square");
  }
  if (inst.s < 0 || inst.s >= n || inst.t < 0 || inst.t >= n) throw StructuralError("validate: s or t out of range");
  if (inst.s == inst.t) throw StructuralError("validate: s equals t");
  if (inst.weights) {
    if (static_cast<int>(inst.weights->size()) != n) throw StructuralError("validate: weights have wrong length");
    for (const auto& c : *inst.weights) {
      if (c.sign() <= 0) throw StructuralError("validate: node weights must be positive");
    }
  }

  ValidationReport report;
  for (int u = 0; u < n; ++u) {
    if (!inst.d[u][u].is_zero()) report.violations.push_back({Violation::Kind::kDiagonal, u, u, -1});
    for (int v = 0; v < n; ++v) {
      if (inst.d[u][v].sign() < 0) report.violations.push_back({Violation::Kind::kNegative, u, v, -1});
    }
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      for (int w = 0; w < n; ++w) {
        if (w == u || w == v) continue;
        if (inst.d[u][w] > inst.d[u][v] + inst.d[v][w]) {
          report.violations.push_back({Violation::Kind::kTriangle, u, v, w});
        }
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

MetricInstance metric_closure(int n, const std::vector<WeightedArc>& arcs, int s, int t) {
  if (n < 2) throw ArgumentError("metric_closure: need at least two nodes");
  if (s < 0 || t < 0 || s >= n || t >= n || s == t) throw ArgumentError("metric_closure: bad endpoints");
  std::vector<std::vector<std::optional<Rational>>> dist(n, std::vector<std::optional<Rational>>(n));
  for (int v = 0; v < n; ++v) dist[v][v] = Rational(0);
  for (const auto& [u, v, w] : arcs) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw ArgumentError("metric_closure: arc out of range");
    if (w.sign() < 0) throw ArgumentError("metric_closure: negative arc weight");
    if (u == v) continue;
    if (!dist[u][v] || w < *dist[u][v]) dist[u][v] = w;
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!dist[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (!dist[k][j]) continue;
        Rational via = *dist[i][k] + *dist[k][j];
        if (!dist[i][j] || via < *dist[i][j]) dist[i][j] = std::move(via);
      }
    }
  }
  MetricInstance inst;
  inst.n = n;
  inst.s = s;
  inst.t = t;
  inst.d.assign(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!dist[i][j]) {
        throw InfeasibleError("metric_closure: node " + std::to_string(j) + " is unreachable from node " +
                              std::to_string(i));
      }
      inst.d[i][j] = *dist[i][j];
    }
  }
  return inst;
}

MetricInstance gen_random(int n, std::uint64_t seed, int max_weight) {
  if (n < 2) throw ArgumentError("gen_random: n must be at least 2");
  if (max_weight < 1) throw ArgumentError("gen_random: max_weight must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<WeightedArc> arcs;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      // Plain modulo keeps the stream identical across standard libraries.
      arcs.push_back({u, v, Rational(static_cast<long long>(1 + rng() % static_cast<std::uint64_t>(max_weight)))});
    }
  }
  return metric_closure(n, arcs, 0, n - 1);
}

MetricInstance gen_bad_gap(long long D) {
  if (D < 10) throw ArgumentError("gen_bad_gap: D must be at least 10");
  // Nodes 1..6 of the construction map to 0..5.
  std::vector<WeightedArc> arcs;
  for (auto [u, v] : {Arc{1, 2}, Arc{2, 3}, Arc{3, 2}, Arc{3, 6}, Arc{1, 4}, Arc{4, 5}, Arc{5, 4}, Arc{5, 6}}) {
    arcs.push_back({u - 1, v - 1, Rational(1)});
  }
  arcs.push_back({5, 0, Rational(D)});
  return metric_closure(6, arcs, 0, 5);
}

ArcFlow bad_gap_assignment() {
  ArcFlow x(6);
  const Rational half(1, 2);
  for (auto [u, v] : {Arc{1, 2}, Arc{3, 2}, Arc{3, 6}, Arc{1, 4}, Arc{5, 4}, Arc{5, 6}}) x.set(u - 1, v - 1, half);
  x.set(1, 2, Rational(1));
  x.set(3, 4, Rational(1));
  return x;
}

int SubInstance::from_original(int v) const {
  auto it = std::lower_bound(to_original.begin(), to_original.end(), v);
  if (it == to_original.end() || *it != v) throw ArgumentError("SubInstance: node not in subset");
  return static_cast<int>(it - to_original.begin());
}

SubInstance induced_subinstance(const MetricInstance& inst, std::vector<int> W, int s2, int t2) {
  std::sort(W.begin(), W.end());
  W.erase(std::unique(W.begin(), W.end()), W.end());
  for (int v : W) {
    if (v < 0 || v >= inst.n) throw ArgumentError("induced_subinstance: node out of range");
  }
  if (s2 == t2) throw ArgumentError("induced_subinstance: s equals t");
  if (!std::binary_search(W.begin(), W.end(), s2) || !std::binary_search(W.begin(), W.end(), t2)) {
    throw ArgumentError("induced_subinstance: endpoints must belong to W");
  }
  SubInstance sub;
  sub.to_original = W;
  const int m = static_cast<int>(W.size());
  sub.inst.n = m;
  sub.inst.d.assign(m, std::vector<Rational>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) sub.inst.d[i][j] = inst.d[W[i]][W[j]];
  }
  if (inst.weights) {
    sub.inst.weights.emplace();
    for (int v : W) sub.inst.weights->push_back((*inst.weights)[v]);
  }
  sub.inst.s = sub.from_original(s2);
  sub.inst.t = sub.from_original(t2);
  return sub;
}

Rational path_cost(const MetricInstance& inst, const NodeSeq& nodes) {
  Rational sum;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) sum += inst.d[nodes[i]][nodes[i + 1]];
  return sum;
}

Rational cycle_cost(const MetricInstance& inst, const NodeSeq& nodes) {
  if (nodes.size() < 2) return Rational();
  return path_cost(inst, nodes) + inst.d[nodes.back()][nodes.front()];
}

nlohmann::json rational_to_json(const Rational& r) {
  if (r.is_integer() && r.is_small()) return r.floor();
  return r.str();
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_float()) return Rational::parse(j.dump());
  throw StructuralError("expected a rational (integer or \"p/q\" string), got " + j.dump());
}

nlohmann::json instance_to_json(const MetricInstance& inst) {
  nlohmann::json j;
  j["n"] = inst.n;
  j["s"] = inst.s;
  j["t"] = inst.t;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : inst.d) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : row) r.push_back(rational_to_json(x));
    rows.push_back(std::move(r));
  }
  j["d"] = std::move(rows);
  if (inst.weights) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& c : *inst.weights) w.push_back(rational_to_json(c));
    j["weights"] = std::move(w);
  }
  return j;
}

MetricInstance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw StructuralError("instance JSON must be an object");
  for (const char* key : {"n", "s", "t", "d"}) {
    if (!j.contains(key)) throw StructuralError(std::string("instance JSON lacks \"") + key + "\"");
  }
  MetricInstance inst;
  inst.n = j.at("n").get<int>();
  inst.s = j.at("s").get<int>();
  inst.t = j.at("t").get<int>();
  for (const auto& row : j.at("d")) {
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_from_json(x));
    inst.d.push_back(std::move(r));
  }
  if (j.contains("weights") && !j.at("weights").is_null()) {
    inst.weights.emplace();
    for (const auto& x : j.at("weights")) inst.weights->push_back(rational_from_json(x));
  }
  validate(inst);  // structural checks only; metric violations are reported, not thrown
  return inst;
}

MetricInstance unit_metric(int n) {
  MetricInstance inst;
  inst.n = n;
  inst.s = 0;
  inst.t = n - 1;
  inst.d.assign(n, std::vector<Rational>(n, Rational(1)));
  for (int v = 0; v < n; ++v) inst.d[v][v] = Rational(0);
  return inst;
}

}  // namespace atspp
