#include "atspp/atspp.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "atspp/oracle.hpp"
#include "atspp/relaxations.hpp"

using namespace atspp;

namespace {

void expect_hamiltonian(const MetricInstance& inst, const NodeSeq& p) {
  ASSERT_EQ(static_cast<int>(p.size()), inst.n);
  EXPECT_EQ(p.front(), inst.s);
  EXPECT_EQ(p.back(), inst.t);
  NodeSeq sorted = p;
  std::sort(sorted.begin(), sorted.end());
  for (int v = 0; v < inst.n; ++v) EXPECT_EQ(sorted[v], v);
}

void expect_covers_all(const MetricInstance& inst, const std::vector<NodeSeq>& paths) {
  std::vector<bool> seen(inst.n);
  for (const auto& p : paths) {
    ASSERT_GE(p.size(), 2u);
    EXPECT_EQ(p.front(), inst.s);
    EXPECT_EQ(p.back(), inst.t);
    for (int v : p) seen[v] = true;
  }
  for (int v = 0; v < inst.n; ++v) EXPECT_TRUE(seen[v]) << "node " << v;
}

}  // namespace

TEST(Atspp, TwoNodes) {
  auto inst = gen_random(2, 3, 10);
  auto res = solve_atspp(inst);
  EXPECT_EQ(res.path.nodes, (NodeSeq{0, 1}));
  EXPECT_EQ(res.path.cost, inst.d[0][1]);
}

TEST(Atspp, UnitMetricIsOptimal) {
  auto res = solve_atspp(unit_metric(8));
  EXPECT_EQ(res.path.cost, Rational(7));
  expect_hamiltonian(unit_metric(8), res.path.nodes);
}

TEST(Atspp, DefaultIterations) {
  EXPECT_EQ(default_iterations(2), 3);
  EXPECT_EQ(default_iterations(8), 7);
  EXPECT_EQ(default_iterations(9), 9);
}

TEST(Atspp, RejectsTinyInstances) {
  MetricInstance one;
  one.n = 1;
  one.s = 0;
  one.t = 0;
  one.d = {{Rational(0)}};
  EXPECT_ANY_THROW(solve_atspp(one));
}

// Bound against LP(1), optimality floor from the oracle, and the per-iteration
// invariants recorded in the trace.
TEST(Atspp, RandomInstancesWithinBound) {
  for (int n = 3; n <= 9; ++n) {
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      auto inst = gen_random(n, seed * 31 + n, 80);
      auto res = solve_atspp(inst);
      expect_hamiltonian(inst, res.path.nodes);
      EXPECT_EQ(res.path.cost, path_cost(inst, res.path.nodes));
      EXPECT_EQ(res.checks.failures(), 0u);
      auto lp = solve_lp_alpha(inst, Rational(1));
      EXPECT_LE(res.path.cost, Rational(default_iterations(n)) * lp.value);
      EXPECT_GE(res.path.cost, exact_atspp(inst).value);
      EXPECT_LE(res.path.cost, res.total_cover_cost);

      const int log_n = ceil_log2(n);
      for (const auto& st : res.trace) {
        for (int l : st.labels) EXPECT_LE(l, log_n);
        std::vector<Arc> arcs;
        for (const auto& p : st.F) {
          EXPECT_EQ(p.front(), inst.s);
          EXPECT_EQ(p.back(), inst.t);
          for (auto a : seq_arcs(p)) arcs.push_back(a);
        }
        EXPECT_NO_THROW(topological_order(inst.n, arcs));
        std::vector<int> bal(inst.n);
        for (auto [u, v] : st.H) {
          ++bal[u];
          --bal[v];
        }
        for (int b : bal) EXPECT_EQ(b, 0);
      }
      // Every F path crosses interior v in W exactly T - l_v times.
      const auto& last = res.trace.back();
      const int T = res.iterations;
      std::map<int, int> through;
      for (const auto& p : last.F)
        for (std::size_t i = 1; i + 1 < p.size(); ++i) ++through[p[i]];
      for (int v : last.W)
        if (v != inst.s && v != inst.t) EXPECT_EQ(through[v], T - last.labels[v]) << "node " << v;
      EXPECT_EQ(static_cast<int>(last.F.size()), T);
    }
  }
}

TEST(Atspp, FewerIterationsStillHamiltonian) {
  auto inst = gen_random(8, 5, 40);
  for (int T = 1; T <= 3; ++T) {
    auto res = solve_atspp(inst, T);
    EXPECT_EQ(res.iterations, T);
    expect_hamiltonian(inst, res.path.nodes);
  }
}

TEST(Atspp, TraceJson) {
  auto res = solve_atspp(gen_random(6, 2, 30));
  auto j = trace_to_json(res.trace);
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j.size(), res.trace.size());
  EXPECT_TRUE(j[0].contains("labels"));
}

TEST(Multipath, UnitMetricK1) {
  auto inst = unit_metric(4);
  auto res = multipath_cover(inst, 1);
  EXPECT_LE(res.paths.size(), 2u);
  expect_covers_all(inst, res.paths);
}

TEST(Multipath, TwoNodes) {
  auto inst = gen_random(2, 1, 10);
  auto res = multipath_cover(inst, 2);
  ASSERT_EQ(res.paths.size(), 2u);
  for (auto& p : res.paths) EXPECT_EQ(p, (NodeSeq{0, 1}));
}

TEST(Multipath, WithinBound) {
  for (int n = 5; n <= 9; ++n) {
    auto inst = gen_random(n, 40 + n, 60);
    for (int k : {2, 3}) {
      auto res = multipath_cover(inst, k);
      const int bound_paths = k * ceil_log2(n);
      EXPECT_LE(static_cast<int>(res.paths.size()), bound_paths);
      expect_covers_all(inst, res.paths);
      Rational cost;
      for (auto& p : res.paths) cost += path_cost(inst, p);
      EXPECT_EQ(cost, res.cost);
      Rational sum_covers;
      for (auto& c : res.cover_costs) sum_covers += c;
      EXPECT_LE(res.cost, sum_covers);
      auto lp = solve_lp_alpha(inst, Rational(1, k));
      EXPECT_LE(res.cost, Rational(bound_paths) * lp.value);
      EXPECT_EQ(res.checks.failures(), 0u);
    }
  }
}

TEST(KPerson, KOneIsHamiltonian) {
  auto inst = gen_random(7, 3, 40);
  auto res = solve_k_person(inst, 1);
  ASSERT_EQ(res.paths.size(), 1u);
  expect_hamiltonian(inst, res.paths[0]);
  auto lp = solve_lp_alpha(inst, Rational(1));
  EXPECT_LE(res.cost, Rational(res.iterations) * lp.value);
}

TEST(KPerson, TwoNodes) {
  auto inst = gen_random(2, 9, 10);
  auto res = solve_k_person(inst, 3);
  ASSERT_EQ(res.paths.size(), 3u);
  for (auto& p : res.paths) EXPECT_EQ(p, (NodeSeq{0, 1}));
}

TEST(KPerson, WithinBoundAndAboveOptimum) {
  for (int n = 5; n <= 8; ++n) {
    auto inst = gen_random(n, 70 + n, 60);
    const int k = 2;
    auto res = solve_k_person(inst, k);
    ASSERT_EQ(static_cast<int>(res.paths.size()), k);
    expect_covers_all(inst, res.paths);
    std::vector<int> count(inst.n);
    for (auto& p : res.paths)
      for (std::size_t i = 1; i + 1 < p.size(); ++i) ++count[p[i]];
    for (int v = 0; v < inst.n; ++v)
      if (v != inst.s && v != inst.t) EXPECT_EQ(count[v], 1);
    const int T = (k + 1) * ceil_log2(n) + 1;
    EXPECT_EQ(res.iterations, T);
    auto lp = solve_lp_alpha(inst, Rational(1, k));
    EXPECT_LE(res.cost, Rational(k * T * k) * lp.value);
    EXPECT_GE(res.cost, exact_k_person(inst, k).value);
    EXPECT_EQ(res.checks.failures(), 0u);
  }
}

TEST(KPerson, Errors) {
  EXPECT_ANY_THROW(solve_k_person(gen_random(4, 1, 10), 0));
  EXPECT_ANY_THROW(multipath_cover(gen_random(4, 1, 10), 0));
}
