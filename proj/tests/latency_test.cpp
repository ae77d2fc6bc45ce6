#include "atspp/latency.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "atspp/oracle.hpp"

using namespace atspp;

TEST(Append, ExampleWalk) {
  auto inst = unit_metric(6);  // s=0, a=1, b=2, c=3, d=4, e=5
  auto [walk, len] = append({0, 1, 2, 3}, {0, 2, 4, 3, 5}, inst);
  EXPECT_EQ(walk, (NodeSeq{0, 1, 2, 3, 4, 3, 5}));
  EXPECT_EQ(len, Rational(1));
  EXPECT_EQ(shortcut(walk), (NodeSeq{0, 1, 2, 3, 4, 5}));
}

TEST(Append, NothingNew) {
  auto inst = gen_random(4, 1, 10);
  auto [walk, len] = append({0, 2, 1, 3}, {0, 1, 3}, inst);
  EXPECT_EQ(walk, (NodeSeq{0, 2, 1, 3}));
  EXPECT_EQ(len, Rational(0));
}

TEST(Append, FromSource) {
  auto inst = gen_random(3, 2, 10);
  auto [walk, len] = append({0}, {0, 1, 2}, inst);
  EXPECT_EQ(walk, (NodeSeq{0, 1, 2}));
  EXPECT_EQ(len, inst.d[0][1]);
}

TEST(TotalLatency, Simple) {
  auto inst = unit_metric(3);
  EXPECT_EQ(total_latency(inst, {0, 1, 2}), Rational(3));
  auto two = gen_random(2, 1, 10);
  two.d[0][1] = Rational(2);
  two.weights = std::vector<Rational>{Rational(1), Rational(5)};
  EXPECT_EQ(total_latency(two, {0, 1}, true), Rational(10));
}

TEST(TotalLatency, Malformed) {
  auto inst = unit_metric(4);
  EXPECT_THROW(total_latency(inst, {0, 1, 3}), ArgumentError);
  EXPECT_THROW(total_latency(inst, {1, 0, 2, 3}), ArgumentError);
  EXPECT_THROW(total_latency(inst, {0, 1, 1, 3}), ArgumentError);
}

TEST(TotalLatency, OracleBeatsRandomOrders) {
  std::mt19937_64 rng(12);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = gen_random(7, seed, 30);
    NodeSeq mid = {1, 2, 3, 4, 5};
    std::shuffle(mid.begin(), mid.end(), rng);
    NodeSeq order = {0};
    order.insert(order.end(), mid.begin(), mid.end());
    order.push_back(6);
    EXPECT_LE(exact_latency(inst).value, total_latency(inst, order));
  }
}

TEST(Latency, TwoNodes) {
  auto inst = gen_random(2, 5, 10);
  auto res = solve_latency(inst);
  EXPECT_EQ(res.order.order, (NodeSeq{0, 1}));
  EXPECT_EQ(res.order.total, inst.d[0][1]);
}

TEST(Latency, UnitThreeIsOptimal) {
  auto res = solve_latency(unit_metric(3));
  EXPECT_EQ(res.order.total, Rational(3));
  EXPECT_EQ(exact_latency(unit_metric(3)).value, Rational(3));
}

TEST(Latency, BoundConstant) {
  // L = 3: c = 9 * 7 + 38 * 3 = 177; 16 * 177 * (1 + 1/8)
  EXPECT_EQ(latency_bound_constant(8), Rational(16 * 177) * Rational(9, 8));
  EXPECT_EQ(latency_bound_constant(2), Rational(16 * (27 + 38)) * Rational(3, 2));
}

TEST(Latency, RandomWithinBoundsAndChecksPass) {
  for (int n = 4; n <= 7; ++n) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto inst = gen_random(n, seed * 7 + n, 40);
      auto res = solve_latency(inst);
      NodeSeq sorted = res.order.order;
      std::sort(sorted.begin(), sorted.end());
      for (int v = 0; v < n; ++v) EXPECT_EQ(sorted[v], v);
      EXPECT_EQ(res.order.total, total_latency(inst, res.order.order));
      EXPECT_GE(res.order.total, exact_latency(inst).value);
      EXPECT_LE(res.order.total, latency_bound_constant(n) * res.lp_value);
      EXPECT_EQ(res.checks.failures(), 0u);
      EXPECT_TRUE(lemma9_violations(inst, res.lp).empty());

      const auto& tr = res.trace;
      EXPECT_LE(tr.g, 2 * tr.log_n + 1);
      for (int i = 1; i <= tr.g; ++i) {
        for (int v : tr.initial[i]) {
          EXPECT_GE(tr.normalized[v], pow2(i - 1));
          if (i < tr.g) EXPECT_LT(tr.normalized[v], pow2(i));
        }
      }
    }
  }
}

TEST(Latency, WeightedRuns) {
  auto inst = gen_random(6, 3, 30);
  inst.weights = std::vector<Rational>{1, 4, 1, Rational(1, 2), 3, 2};
  auto res = solve_latency(inst, {.weighted = true});
  EXPECT_EQ(res.order.total, total_latency(inst, res.order.order, true));
  EXPECT_GE(res.order.total, exact_latency(inst, true).value);
}

TEST(Latency, RequiresPositiveDistances) {
  auto inst = unit_metric(4);
  inst.d[1][2] = Rational(0);
  EXPECT_ANY_THROW(solve_latency(inst));
}

TEST(Lemma9, HoldsOnLpOptima) {
  for (int n = 4; n <= 6; ++n) {
    auto inst = gen_random(n, 200 + n, 20);
    auto sol = solve_latency_lp(inst);
    EXPECT_TRUE(lemma9_violations(inst, sol).empty());
  }
}

TEST(Lemma9, FlagsTamperedSolution) {
  auto inst = gen_random(4, 3, 20);
  auto sol = solve_latency_lp(inst);
  // Pretend a triple is overfull while the target has tiny latency.
  sol.x[1][2] = Rational(1);
  sol.x[2][3] = Rational(1);
  sol.latency[3] = Rational(1, 1000);
  EXPECT_FALSE(lemma9_violations(inst, sol).empty());
}
