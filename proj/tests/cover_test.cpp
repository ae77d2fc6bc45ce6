#include "atspp/cover.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "atspp/relaxations.hpp"

using namespace atspp;

namespace {

std::vector<int> random_subset(const MetricInstance& inst, std::mt19937_64& rng) {
  std::vector<int> W = {inst.s, inst.t};
  for (int v = 0; v < inst.n; ++v)
    if (v != inst.s && v != inst.t && rng() % 3 != 0) W.push_back(v);
  std::sort(W.begin(), W.end());
  return W;
}

std::vector<int> all_nodes(int n) {
  std::vector<int> W(n);
  for (int v = 0; v < n; ++v) W[v] = v;
  return W;
}

// Cover structure: paths from s to t, every node of W exactly once (s and t
// once per path), cost recomputed from the distances.
void expect_valid_cover(const MetricInstance& inst, const std::vector<int>& W, const std::vector<NodeSeq>& paths,
                        const std::vector<NodeSeq>& cycles, const Rational& cost) {
  std::vector<int> seen(inst.n, 0);
  Rational total;
  for (const auto& p : paths) {
    ASSERT_GE(p.size(), 2u);
    EXPECT_EQ(p.front(), inst.s);
    EXPECT_EQ(p.back(), inst.t);
    for (std::size_t i = 1; i + 1 < p.size(); ++i) ++seen[p[i]];
    total += path_cost(inst, p);
  }
  for (const auto& c : cycles) {
    EXPECT_GE(c.size(), 2u);
    for (int v : c) ++seen[v];
    total += cycle_cost(inst, c);
  }
  for (int v = 0; v < inst.n; ++v) {
    if (v == inst.s || v == inst.t) {
      EXPECT_EQ(seen[v], 0);
      continue;
    }
    bool in_w = std::binary_search(W.begin(), W.end(), v);
    EXPECT_EQ(seen[v], in_w ? 1 : 0) << "node " << v;
  }
  EXPECT_EQ(total, cost);
}

}  // namespace

TEST(Cover, EndpointsOnly) {
  auto inst = gen_random(5, 2, 20);
  auto c = min_path_cycle_cover(inst, {inst.s, inst.t});
  EXPECT_EQ(c.path, (NodeSeq{inst.s, inst.t}));
  EXPECT_TRUE(c.cycles.empty());
  EXPECT_EQ(c.cost, inst.d[inst.s][inst.t]);
}

TEST(Cover, UnitMetricCostsSizeMinusOne) {
  auto inst = unit_metric(7);
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    auto W = random_subset(inst, rng);
    auto c = min_path_cycle_cover(inst, W);
    EXPECT_EQ(c.cost, Rational(static_cast<long long>(W.size()) - 1));
    expect_valid_cover(inst, W, {c.path}, c.cycles, c.cost);
  }
}

TEST(Cover, Errors) {
  auto inst = gen_random(5, 2, 20);
  EXPECT_THROW(min_path_cycle_cover(inst, {0, 1, 2}), ArgumentError);  // t = 4 missing
  EXPECT_THROW(min_k_path_cycle_cover(inst, {0, 4}, 0), ArgumentError);
}

TEST(Cover, FullSetWithinLpOne) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    auto inst = gen_random(6, seed, 50);
    auto W = all_nodes(inst.n);
    auto c = min_path_cycle_cover(inst, W);
    expect_valid_cover(inst, W, {c.path}, c.cycles, c.cost);
    EXPECT_LE(c.cost, solve_lp_alpha(inst, Rational(1)).value);
  }
}

TEST(Cover, KEqualsOneMatchesSingle) {
  std::mt19937_64 rng(8);
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    auto inst = gen_random(7, seed, 30);
    auto W = random_subset(inst, rng);
    EXPECT_EQ(min_k_path_cycle_cover(inst, W, 1).cost, min_path_cycle_cover(inst, W).cost);
  }
}

TEST(Cover, KCopiesOfDirectArc) {
  auto inst = gen_random(5, 3, 20);
  auto c = min_k_path_cycle_cover(inst, {inst.s, inst.t}, 3);
  ASSERT_EQ(c.paths.size(), 3u);
  for (auto& p : c.paths) EXPECT_EQ(p, (NodeSeq{inst.s, inst.t}));
  EXPECT_EQ(c.cost, inst.d[inst.s][inst.t] * Rational(3));
}

TEST(Cover, KCoverWithinKTimesLp) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = gen_random(7, seed, 50);
    auto W = all_nodes(inst.n);
    for (int k : {2, 3}) {
      auto c = min_k_path_cycle_cover(inst, W, k);
      ASSERT_EQ(static_cast<int>(c.paths.size()), k);
      expect_valid_cover(inst, W, c.paths, c.cycles, c.cost);
      EXPECT_LE(c.cost, Rational(k) * solve_lp_alpha(inst, Rational(1, k)).value);
    }
  }
}

// A cover read as a unit flow is a feasible degree-LP point on W.
TEST(Cover, RandomSubsetsValid) {
  std::mt19937_64 rng(21);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = gen_random(8, seed, 60);
    auto W = random_subset(inst, rng);
    auto c = min_path_cycle_cover(inst, W);
    expect_valid_cover(inst, W, {c.path}, c.cycles, c.cost);
    ArcFlow x(inst.n);
    x.add_path(c.path, Rational(1));
    for (auto& cyc : c.cycles) x.add_cycle(cyc, Rational(1));
    EXPECT_FALSE(degree_lp_violation(inst, W, x));
  }
}

TEST(DegreeLp, DetectsViolations) {
  auto inst = unit_metric(4);
  ArcFlow x(4);
  x.add_path({0, 1, 3}, Rational(1));
  EXPECT_TRUE(degree_lp_violation(inst, {0, 1, 2, 3}, x));  // node 2 uncovered
  EXPECT_FALSE(degree_lp_violation(inst, {0, 1, 3}, x));
  x.add(3, 0, Rational(1));
  EXPECT_TRUE(degree_lp_violation(inst, {0, 1, 3}, x));
}

TEST(Lemma6, IntegralPathSurvives) {
  auto inst = gen_random(6, 4, 30);
  ArcFlow x(inst.n);
  NodeSeq ham = {0, 1, 2, 3, 4, 5};
  x.add_path(ham, Rational(1));
  auto r = lemma6_round(inst, x, Rational(1));
  EXPECT_EQ(r.gamma, Rational(2, 3));
  EXPECT_EQ(r.path, ham);
  EXPECT_EQ(r.x_tilde, x);
  EXPECT_EQ(r.output_cost, r.input_cost);
  EXPECT_EQ(r.factor, Rational(3));
}

TEST(Lemma6, RoundsLpOptima) {
  const std::vector<Rational> alphas = {Rational(2, 3), Rational(9, 10), Rational(1)};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto inst = gen_random(6 + static_cast<int>(seed % 3), seed, 40);
    for (const auto& alpha : alphas) {
      auto lp = solve_lp_alpha(inst, alpha);
      auto r = lemma6_round(inst, lp.x, alpha);
      EXPECT_FALSE(degree_lp_violation(inst, all_nodes(inst.n), r.x_tilde));
      EXPECT_EQ(r.factor, Rational(3) / (Rational(2) * alpha - Rational(1)));
      EXPECT_LE(r.output_cost, r.factor * lp.value);
      EXPECT_EQ(r.output_cost, r.x_tilde.cost(inst.d));
      EXPECT_EQ(r.checks.failures(), 0u);
      // Covers are no more costly than any degree-LP point.
      EXPECT_GE(r.output_cost, min_path_cycle_cover(inst, all_nodes(inst.n)).cost);
    }
  }
}

TEST(Lemma6, Errors) {
  auto inst = gen_random(5, 1, 20);
  auto lp = solve_lp_alpha(inst, Rational(1));
  EXPECT_THROW(lemma6_round(inst, lp.x, Rational(1, 2)), ArgumentError);
  ArcFlow bad(inst.n);
  bad.add_path({0, 4}, Rational(1));
  EXPECT_THROW(lemma6_round(inst, bad, Rational(1)), ContractViolation);
}
