#include "atspp/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <string>

#include "atspp/errors.hpp"

namespace atspp {

// ---------------------------------------------------------------------------
// ArcFlow

void ArcFlow::check(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw ArgumentError("ArcFlow: arc (" + std::to_string(u) + "," + std::to_string(v) +
                        ") outside ground set of size " + std::to_string(n_));
  }
  if (u == v) throw ArgumentError("ArcFlow: self-loop at " + std::to_string(u));
}

Rational ArcFlow::get(int u, int v) const {
  auto it = arcs_.find({u, v});
  return it == arcs_.end() ? Rational() : it->second;
}

void ArcFlow::set(int u, int v, const Rational& value) {
  check(u, v);
  if (value.sign() < 0) throw ArgumentError("ArcFlow: negative value");
  if (value.is_zero()) {
    arcs_.erase({u, v});
  } else {
    arcs_[{u, v}] = value;
  }
}

void ArcFlow::add(int u, int v, const Rational& value) {
  check(u, v);
  if (value.is_zero()) return;
  auto it = arcs_.find({u, v});
  if (it == arcs_.end()) {
    if (value.sign() < 0) throw ArgumentError("ArcFlow: negative value");
    arcs_.emplace(Arc{u, v}, value);
    return;
  }
  it->second += value;
  if (it->second.sign() < 0) throw ArgumentError("ArcFlow: negative value");
  if (it->second.is_zero()) arcs_.erase(it);
}

void ArcFlow::add_path(const NodeSeq& nodes, const Rational& amount) {
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) add(nodes[i], nodes[i + 1], amount);
}

void ArcFlow::add_cycle(const NodeSeq& nodes, const Rational& amount) {
  if (nodes.size() < 2) return;
  add_path(nodes, amount);
  add(nodes.back(), nodes.front(), amount);
}

ArcFlow ArcFlow::scaled(const Rational& factor) const {
  ArcFlow out(n_);
  if (factor.is_zero()) return out;
  for (const auto& [arc, value] : arcs_) out.arcs_.emplace(arc, value * factor);
  return out;
}

Rational ArcFlow::out_flow(int u) const {
  Rational sum;
  for (auto it = arcs_.lower_bound({u, -1}); it != arcs_.end() && it->first.first == u; ++it) {
    sum += it->second;
  }
  return sum;
}

Rational ArcFlow::in_flow(int u) const {
  Rational sum;
  for (const auto& [arc, value] : arcs_) {
    if (arc.second == u) sum += value;
  }
  return sum;
}

Rational ArcFlow::cut_in(const std::vector<bool>& inside) const {
  Rational sum;
  for (const auto& [arc, value] : arcs_) {
    if (!inside[arc.first] && inside[arc.second]) sum += value;
  }
  return sum;
}

Rational ArcFlow::cost(const std::vector<std::vector<Rational>>& d) const {
  Rational sum;
  for (const auto& [arc, value] : arcs_) sum += d[arc.first][arc.second] * value;
  return sum;
}

std::vector<Arc> ArcFlow::support() const {
  std::vector<Arc> out;
  out.reserve(arcs_.size());
  for (const auto& [arc, value] : arcs_) out.push_back(arc);
  return out;
}

ArcFlow Decomposition::recompose(int n) const {
  ArcFlow f(n);
  for (const auto& c : cycles) f.add_cycle(c.nodes, c.amount);
  for (const auto& p : paths) f.add_path(p.nodes, p.amount);
  return f;
}

// ---------------------------------------------------------------------------
// Matching

MatchingResult min_cost_perfect_matching(const CostMatrix& cost) {
  const int m = static_cast<int>(cost.size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != m) {
      throw StructuralError("min_cost_perfect_matching: cost matrix is not square");
    }
  }
  MatchingResult result;
  if (m == 0) return result;

  // Potentials u (rows) and v (columns), 1-indexed with a virtual column 0.
  std::vector<Rational> u(m + 1), v(m + 1);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<std::optional<Rational>> minv(m + 1);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      std::optional<Rational> delta;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        if (const auto& c = cost[i0 - 1][j - 1]) {
          Rational cur = *c - u[i0] - v[j];
          if (!minv[j] || cur < *minv[j]) {
            minv[j] = std::move(cur);
            way[j] = j0;
          }
        }
        if (minv[j] && (!delta || *minv[j] < *delta)) {
          delta = minv[j];
          j1 = j;
        }
      }
      if (j1 < 0) throw InfeasibleError("min_cost_perfect_matching: no perfect matching avoids forbidden cells");
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += *delta;
          v[j] -= *delta;
        } else if (minv[j]) {
          *minv[j] -= *delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  result.assignment.assign(m, -1);
  for (int j = 1; j <= m; ++j) result.assignment[p[j] - 1] = j - 1;
  for (int i = 0; i < m; ++i) result.cost += *cost[i][result.assignment[i]];
  return result;
}

std::vector<int> max_bipartite_matching(const std::vector<std::vector<int>>& adjacency, int ny) {
  const int nx = static_cast<int>(adjacency.size());
  std::vector<int> match_x(nx, -1), match_y(ny, -1);
  std::vector<int> seen(ny, -1);

  std::function<bool(int, int)> augment = [&](int x, int stamp) {
    for (int y : adjacency[x]) {
      if (y < 0 || y >= ny) throw ArgumentError("max_bipartite_matching: neighbour out of range");
      if (seen[y] == stamp) continue;
      seen[y] = stamp;
      if (match_y[y] < 0 || augment(match_y[y], stamp)) {
        match_x[x] = y;
        match_y[y] = x;
        return true;
      }
    }
    return false;
  };
  for (int x = 0; x < nx; ++x) augment(x, x);
  return match_x;
}

// ---------------------------------------------------------------------------
// Max flow

MinCut max_flow_min_cut(const ArcFlow& capacities, int source, int sink) {
  const int n = capacities.n();
  if (source == sink) throw ArgumentError("max_flow_min_cut: source equals sink");
  if (source < 0 || sink < 0 || source >= n || sink >= n) {
    throw ArgumentError("max_flow_min_cut: terminal out of range");
  }
  std::vector<std::vector<Rational>> residual(n, std::vector<Rational>(n));
  std::vector<std::vector<int>> adj(n);
  for (const auto& [arc, cap] : capacities) {
    residual[arc.first][arc.second] += cap;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && (!residual[a][b].is_zero() || !residual[b][a].is_zero())) adj[a].push_back(b);
    }
  }

  Rational total;
  std::vector<int> parent(n);
  auto bfs = [&]() {
    std::fill(parent.begin(), parent.end(), -1);
    parent[source] = source;
    std::deque<int> queue{source};
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (int b : adj[a]) {
        if (parent[b] < 0 && residual[a][b].sign() > 0) {
          parent[b] = a;
          if (b == sink) return true;
          queue.push_back(b);
        }
      }
    }
    return false;
  };
  while (bfs()) {
    Rational bottleneck = residual[parent[sink]][sink];
    for (int b = sink; b != source; b = parent[b]) bottleneck = min(bottleneck, residual[parent[b]][b]);
    for (int b = sink; b != source; b = parent[b]) {
      residual[parent[b]][b] -= bottleneck;
      residual[b][parent[b]] += bottleneck;
    }
    total += bottleneck;
  }

  MinCut cut;
  cut.value = std::move(total);
  for (int a = 0; a < n; ++a) {
    if (parent[a] < 0) cut.sink_side.push_back(a);
  }
  return cut;
}

// ---------------------------------------------------------------------------
// Flow decomposition

namespace {

// Returns a directed cycle in the support of `flow`, or empty. DFS starts at
// the lowest-index node and scans successors in index order.
NodeSeq find_cycle(int n, const std::map<Arc, Rational>& flow) {
  std::vector<std::vector<int>> succ(n);
  for (const auto& [arc, value] : flow) succ[arc.first].push_back(arc.second);
  std::vector<int> color(n, 0), next(n, 0);
  std::vector<int> stack;
  for (int root = 0; root < n; ++root) {
    if (color[root] != 0 || succ[root].empty()) continue;
    stack.assign(1, root);
    color[root] = 1;
    while (!stack.empty()) {
      int a = stack.back();
      if (next[a] < static_cast<int>(succ[a].size())) {
        int b = succ[a][next[a]++];
        if (color[b] == 1) {
          auto it = std::find(stack.begin(), stack.end(), b);
          return NodeSeq(it, stack.end());
        }
        if (color[b] == 0) {
          color[b] = 1;
          stack.push_back(b);
        }
      } else {
        color[a] = 2;
        stack.pop_back();
      }
    }
  }
  return {};
}

void subtract(std::map<Arc, Rational>& flow, const Arc& arc, const Rational& amount) {
  auto it = flow.find(arc);
  it->second -= amount;
  if (it->second.is_zero()) flow.erase(it);
}

}  // namespace

Decomposition decompose_flow(const ArcFlow& f, int s, int t) {
  const int n = f.n();
  if (s == t) throw ArgumentError("decompose_flow: s equals t");
  for (int u = 0; u < n; ++u) {
    if (u == s || u == t) continue;
    if (!f.net_in(u).is_zero()) {
      throw ContractViolation("decompose_flow: node " + std::to_string(u) + " is unbalanced");
    }
  }
  Rational excess = f.out_flow(s) - f.in_flow(s);
  if (excess.sign() < 0 || excess != f.in_flow(t) - f.out_flow(t)) {
    throw ContractViolation("decompose_flow: source excess does not match sink deficit");
  }

  Decomposition out;
  std::map<Arc, Rational> rest = f.entries();
  for (NodeSeq cycle = find_cycle(n, rest); !cycle.empty(); cycle = find_cycle(n, rest)) {
    Rational amount = rest.at({cycle.back(), cycle.front()});
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) amount = min(amount, rest.at({cycle[i], cycle[i + 1]}));
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) subtract(rest, {cycle[i], cycle[i + 1]}, amount);
    subtract(rest, {cycle.back(), cycle.front()}, amount);
    out.cycles.push_back({std::move(cycle), std::move(amount)});
  }

  auto first_out = [&](int u) {
    auto it = rest.lower_bound({u, -1});
    return (it != rest.end() && it->first.first == u) ? it : rest.end();
  };
  while (first_out(s) != rest.end()) {
    NodeSeq path{s};
    while (path.back() != t) {
      auto it = first_out(path.back());
      if (it == rest.end()) throw ContractViolation("decompose_flow: path stalled before reaching t");
      path.push_back(it->first.second);
    }
    Rational amount = rest.at({path[0], path[1]});
    for (std::size_t i = 1; i + 1 < path.size(); ++i) amount = min(amount, rest.at({path[i], path[i + 1]}));
    for (std::size_t i = 0; i + 1 < path.size(); ++i) subtract(rest, {path[i], path[i + 1]}, amount);
    out.paths.push_back({std::move(path), std::move(amount)});
  }
  if (!rest.empty()) throw ContractViolation("decompose_flow: residual flow left after path extraction");
  return out;
}

// ---------------------------------------------------------------------------
// Orders, tours, shortcuts

NodeSeq topological_order(int n, const std::vector<Arc>& arcs) {
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (const auto& [a, b] : arcs) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw ArgumentError("topological_order: arc out of range");
    succ[a].push_back(b);
    ++indeg[b];
  }
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  NodeSeq order;
  while (!ready.empty()) {
    int a = ready.top();
    ready.pop();
    order.push_back(a);
    for (int b : succ[a]) {
      if (--indeg[b] == 0) ready.push(b);
    }
  }
  if (static_cast<int>(order.size()) == n) return order;

  std::map<Arc, Rational> remaining;
  for (const auto& [a, b] : arcs) {
    if (indeg[a] > 0 && indeg[b] > 0) remaining[{a, b}] = Rational(1);
  }
  NodeSeq cycle = find_cycle(n, remaining);
  std::string text;
  for (int v : cycle) text += " " + std::to_string(v);
  throw AcyclicityViolation("topological_order: cycle through" + text, cycle);
}

std::vector<Arc> euler_tour(int n, const std::vector<Arc>& arcs, int start) {
  if (arcs.empty()) return {};
  std::vector<int> balance(n, 0);
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
    const auto& [a, b] = arcs[i];
    if (a < 0 || b < 0 || a >= n || b >= n) throw ArgumentError("euler_tour: arc out of range");
    ++balance[a];
    --balance[b];
    adj[a].push_back(i);
  }
  for (int v = 0; v < n; ++v) {
    if (balance[v] != 0) {
      throw ContractViolation("euler_tour: node " + std::to_string(v) + " has in-degree != out-degree");
    }
    std::stable_sort(adj[v].begin(), adj[v].end(),
                     [&](int x, int y) { return arcs[x].second < arcs[y].second; });
  }
  if (adj[start].empty()) throw ContractViolation("euler_tour: start node has no arcs");

  std::vector<std::size_t> next(n, 0);
  std::vector<std::pair<int, int>> stack{{start, -1}};
  std::vector<Arc> tour;
  while (!stack.empty()) {
    auto [v, via] = stack.back();
    if (next[v] < adj[v].size()) {
      int e = adj[v][next[v]++];
      stack.push_back({arcs[e].second, e});
    } else {
      stack.pop_back();
      if (via >= 0) tour.push_back(arcs[via]);
    }
  }
  if (tour.size() != arcs.size()) throw ContractViolation("euler_tour: arc support is disconnected");
  std::reverse(tour.begin(), tour.end());
  return tour;
}

NodeSeq shortcut(const NodeSeq& walk) {
  if (walk.empty()) return {};
  const int last = walk.back();
  const bool pin_last = last != walk.front();
  NodeSeq out;
  std::vector<int> seen;
  for (int v : walk) {
    if (pin_last && v == last) continue;
    if (std::find(seen.begin(), seen.end(), v) != seen.end()) continue;
    seen.push_back(v);
    out.push_back(v);
  }
  if (pin_last) out.push_back(last);
  return out;
}

std::vector<std::vector<bool>> reachability(int n, const std::vector<Arc>& arcs) {
  topological_order(n, arcs);  // throws on a cycle
  std::vector<std::vector<int>> succ(n);
  for (const auto& [a, b] : arcs) succ[a].push_back(b);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int root = 0; root < n; ++root) {
    std::vector<int> stack(succ[root].begin(), succ[root].end());
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      if (reach[root][v]) continue;
      reach[root][v] = true;
      for (int w : succ[v]) stack.push_back(w);
    }
  }
  return reach;
}

NodeSeq walk_nodes(const std::vector<Arc>& tour) {
  NodeSeq out;
  if (tour.empty()) return out;
  out.push_back(tour.front().first);
  for (const auto& arc : tour) out.push_back(arc.second);
  return out;
}

std::vector<Arc> seq_arcs(const NodeSeq& nodes, bool closed) {
  std::vector<Arc> out;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) out.push_back({nodes[i], nodes[i + 1]});
  if (closed && nodes.size() >= 2) out.push_back({nodes.back(), nodes.front()});
  return out;
}

}  // namespace atspp
