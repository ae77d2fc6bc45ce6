#include "atspp/graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "atspp/cover.hpp"
#include "atspp/errors.hpp"
#include "atspp/metric.hpp"

using namespace atspp;

namespace {

CostMatrix dense(const std::vector<std::vector<long long>>& m) {
  CostMatrix c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (long long v : m[i]) c[i].emplace_back(Rational(v));
  return c;
}

std::optional<Rational> brute_matching(const CostMatrix& c) {
  std::vector<int> perm(c.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Rational> best;
  do {
    Rational total;
    bool ok = true;
    for (std::size_t i = 0; i < c.size() && ok; ++i) {
      if (!c[i][perm[i]]) ok = false;
      else total += *c[i][perm[i]];
    }
    if (ok && (!best || total < *best)) best = total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(Matching, Trivial) {
  EXPECT_EQ(min_cost_perfect_matching(dense({{1, 2}, {2, 1}})).cost, Rational(2));
  EXPECT_EQ(min_cost_perfect_matching(dense({{0}})).cost, Rational(0));
}

TEST(Matching, AllForbiddenIsInfeasible) {
  CostMatrix c(2, std::vector<std::optional<Rational>>(2));
  c[0][0] = Rational(1);
  EXPECT_THROW(min_cost_perfect_matching(c), InfeasibleError);
}

TEST(Matching, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 1 + trial % 7;
    CostMatrix c(m, std::vector<std::optional<Rational>>(m));
    for (auto& row : c)
      for (auto& cell : row)
        if (rng() % 6 != 0) cell = Rational(static_cast<long long>(rng() % 40), 1 + static_cast<long long>(rng() % 3));
    auto best = brute_matching(c);
    if (!best) {
      EXPECT_THROW(min_cost_perfect_matching(c), InfeasibleError);
      continue;
    }
    auto res = min_cost_perfect_matching(c);
    EXPECT_EQ(res.cost, *best);
    Rational recomputed;
    std::vector<bool> used(m);
    for (int i = 0; i < m; ++i) {
      ASSERT_TRUE(c[i][res.assignment[i]].has_value());
      EXPECT_FALSE(used[res.assignment[i]]);
      used[res.assignment[i]] = true;
      recomputed += *c[i][res.assignment[i]];
    }
    EXPECT_EQ(recomputed, res.cost);
  }
}

TEST(MaxFlow, SingleArc) {
  ArcFlow cap(2);
  cap.set(0, 1, Rational(3, 4));
  auto cut = max_flow_min_cut(cap, 0, 1);
  EXPECT_EQ(cut.value, Rational(3, 4));
  EXPECT_EQ(cut.sink_side, std::vector<int>{1});
}

TEST(MaxFlow, ParallelRoutes) {
  ArcFlow cap(4);
  cap.set(0, 1, Rational(1, 2));
  cap.set(1, 3, Rational(1, 2));
  cap.set(0, 2, Rational(1, 2));
  cap.set(2, 3, Rational(1, 2));
  EXPECT_EQ(max_flow_min_cut(cap, 0, 3).value, Rational(1));
}

TEST(MaxFlow, Disconnected) {
  ArcFlow cap(3);
  cap.set(1, 2, Rational(5));
  auto cut = max_flow_min_cut(cap, 0, 2);
  EXPECT_EQ(cut.value, Rational(0));
}

TEST(MaxFlow, MatchesBruteForceCuts) {
  std::mt19937_64 rng(11);
  const int n = 8;
  for (int trial = 0; trial < 30; ++trial) {
    ArcFlow cap(n);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if (u != v && rng() % 3 == 0) cap.set(u, v, Rational(1 + static_cast<long long>(rng() % 9), 1 + static_cast<long long>(rng() % 4)));
    const int src = 0, snk = n - 1;
    std::optional<Rational> best;
    for (int mask = 0; mask < (1 << (n - 2)); ++mask) {
      std::vector<bool> inside(n, false);  // sink side
      inside[snk] = true;
      for (int b = 0; b < n - 2; ++b)
        if (mask >> b & 1) inside[b + 1] = true;
      Rational value = cap.cut_in(inside);
      if (!best || value < *best) best = value;
    }
    auto cut = max_flow_min_cut(cap, src, snk);
    EXPECT_EQ(cut.value, *best);
    std::vector<bool> inside(n, false);
    for (int v : cut.sink_side) inside[v] = true;
    EXPECT_TRUE(inside[snk]);
    EXPECT_FALSE(inside[src]);
    EXPECT_EQ(cap.cut_in(inside), cut.value);
  }
}

TEST(BipartiteMatching, Trivial) {
  std::vector<std::vector<int>> k33 = {{0, 1, 2}, {0, 1, 2}, {0, 1, 2}};
  auto m = max_bipartite_matching(k33, 3);
  EXPECT_EQ(std::count_if(m.begin(), m.end(), [](int y) { return y >= 0; }), 3);
  auto empty = max_bipartite_matching(std::vector<std::vector<int>>(3), 3);
  EXPECT_EQ(std::count(empty.begin(), empty.end(), -1), 3);
}

TEST(BipartiteMatching, MatchesBruteForce) {
  std::mt19937_64 rng(5);
  const int nx = 8, ny = 8;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::vector<int>> adj(nx);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        if (rng() % 4 == 0) adj[x].push_back(y);
    // Largest matching by exhaustive search over x in order.
    std::vector<bool> used(ny);
    auto best = [&](auto&& self, int x) -> int {
      if (x == nx) return 0;
      int r = self(self, x + 1);
      for (int y : adj[x]) {
        if (used[y]) continue;
        used[y] = true;
        r = std::max(r, 1 + self(self, x + 1));
        used[y] = false;
      }
      return r;
    };
    auto m = max_bipartite_matching(adj, ny);
    std::vector<bool> seen(ny);
    int size = 0;
    for (int x = 0; x < nx; ++x) {
      if (m[x] < 0) continue;
      EXPECT_NE(std::find(adj[x].begin(), adj[x].end(), m[x]), adj[x].end());
      EXPECT_FALSE(seen[m[x]]);
      seen[m[x]] = true;
      ++size;
    }
    EXPECT_EQ(size, best(best, 0));
  }
}

TEST(ArcFlow, RejectsSelfLoopsAndDropsZeros) {
  ArcFlow f(3);
  EXPECT_ANY_THROW(f.set(1, 1, Rational(1)));
  f.add(0, 1, Rational(1, 2));
  f.add(0, 1, Rational(-1, 2));
  EXPECT_TRUE(f.empty());
}

TEST(Decompose, SinglePath) {
  ArcFlow f(3);
  f.add_path({0, 2, 1}, Rational(1));
  auto d = decompose_flow(f, 0, 1);
  EXPECT_TRUE(d.cycles.empty());
  ASSERT_EQ(d.paths.size(), 1u);
  EXPECT_EQ(d.paths[0].nodes, (NodeSeq{0, 2, 1}));
  EXPECT_EQ(d.paths[0].amount, Rational(1));
}

TEST(Decompose, PathPlusCycle) {
  ArcFlow f(4);
  f.add_path({0, 1}, Rational(1));
  f.add_cycle({2, 3}, Rational(1));
  auto d = decompose_flow(f, 0, 1);
  ASSERT_EQ(d.cycles.size(), 1u);
  ASSERT_EQ(d.paths.size(), 1u);
  EXPECT_EQ(d.recompose(4), f);
}

TEST(Decompose, Unbalanced) {
  ArcFlow f(3);
  f.add(0, 2, Rational(1));
  EXPECT_THROW(decompose_flow(f, 0, 1), ContractViolation);
}

TEST(Decompose, RecomposesSumOfCovers) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = gen_random(7, seed, 30);
    std::mt19937_64 rng(seed);
    ArcFlow sum(inst.n);
    for (int c = 0; c < 3; ++c) {
      std::vector<int> W = {inst.s, inst.t};
      for (int v = 0; v < inst.n; ++v)
        if (v != inst.s && v != inst.t && rng() % 2) W.push_back(v);
      auto cover = min_path_cycle_cover(inst, W);
      sum.add_path(cover.path, Rational(1, c + 1));
      for (auto& cyc : cover.cycles) sum.add_cycle(cyc, Rational(1, c + 1));
    }
    auto d = decompose_flow(sum, inst.s, inst.t);
    EXPECT_EQ(d.recompose(inst.n), sum);
    std::vector<Arc> path_arcs;
    for (auto& p : d.paths) {
      EXPECT_EQ(p.nodes.front(), inst.s);
      EXPECT_EQ(p.nodes.back(), inst.t);
      for (auto a : seq_arcs(p.nodes)) path_arcs.push_back(a);
    }
    EXPECT_NO_THROW(topological_order(inst.n, path_arcs));
  }
}

TEST(Topo, ChainAndTieBreak) {
  EXPECT_EQ(topological_order(3, {{0, 2}, {2, 1}}), (NodeSeq{0, 2, 1}));
  EXPECT_EQ(topological_order(3, {}), (NodeSeq{0, 1, 2}));
}

TEST(Topo, CycleCarriesWitness) {
  try {
    topological_order(3, {{0, 1}, {1, 2}, {2, 1}});
    FAIL() << "expected AcyclicityViolation";
  } catch (const AcyclicityViolation& e) {
    auto cyc = e.cycle();
    std::sort(cyc.begin(), cyc.end());
    cyc.erase(std::unique(cyc.begin(), cyc.end()), cyc.end());
    EXPECT_EQ(cyc, (std::vector<int>{1, 2}));
  }
}

TEST(Euler, TwoCycle) {
  auto tour = euler_tour(2, {{0, 1}, {1, 0}}, 0);
  EXPECT_EQ(tour, (std::vector<Arc>{{0, 1}, {1, 0}}));
}

TEST(Euler, TwoCyclesSharingNode) {
  std::vector<Arc> arcs = {{0, 1}, {1, 0}, {0, 2}, {2, 0}};
  auto tour = euler_tour(3, arcs, 0);
  ASSERT_EQ(tour.size(), 4u);
  auto a = arcs, b = tour;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i + 1 < tour.size(); ++i) EXPECT_EQ(tour[i].second, tour[i + 1].first);
  EXPECT_EQ(tour.back().second, 0);
}

TEST(Euler, Errors) {
  EXPECT_THROW(euler_tour(3, {{0, 1}}, 0), ContractViolation);
  EXPECT_THROW(euler_tour(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}}, 0), ContractViolation);
}

TEST(Shortcut, KeepsFirstOccurrence) {
  EXPECT_EQ(shortcut({0, 1, 2, 3, 4, 3, 5}), (NodeSeq{0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(shortcut({0, 1, 2}), (NodeSeq{0, 1, 2}));
}

TEST(Shortcut, NeverIncreasesCost) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto inst = gen_random(6, trial + 1, 50);
    NodeSeq walk = {inst.s};
    for (int i = 0; i < 12; ++i) {
      int v = static_cast<int>(rng() % inst.n);
      if (v != walk.back()) walk.push_back(v);
    }
    if (walk.back() != inst.t) walk.push_back(inst.t);
    auto sc = shortcut(walk);
    EXPECT_EQ(sc.back(), inst.t);
    EXPECT_LE(path_cost(inst, sc), path_cost(inst, walk));
  }
}

TEST(Reachability, Chain) {
  auto r = reachability(3, {{0, 1}, {1, 2}});
  EXPECT_TRUE(r[0][2]);
  EXPECT_FALSE(r[2][0]);
  auto e = reachability(3, {});
  for (auto& row : e)
    for (bool b : row) EXPECT_FALSE(b);
}

TEST(Reachability, MatchesDfs) {
  std::mt19937_64 rng(9);
  const int n = 7;
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Arc> arcs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng() % 3 == 0) arcs.push_back({u, v});
    auto r = reachability(n, arcs);
    for (int u = 0; u < n; ++u) {
      std::vector<bool> seen(n);
      std::vector<int> stack;
      for (auto [a, b] : arcs)
        if (a == u) stack.push_back(b);
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (seen[x]) continue;
        seen[x] = true;
        for (auto [a, b] : arcs)
          if (a == x) stack.push_back(b);
      }
      for (int v = 0; v < n; ++v) EXPECT_EQ(r[u][v], seen[v]) << u << "->" << v;
    }
  }
}
