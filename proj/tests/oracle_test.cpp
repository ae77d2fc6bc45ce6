#include "atspp/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "atspp/errors.hpp"
#include "atspp/latency.hpp"

using namespace atspp;

namespace {

NodeSeq interior(const MetricInstance& inst) {
  NodeSeq mid;
  for (int v = 0; v < inst.n; ++v)
    if (v != inst.s && v != inst.t) mid.push_back(v);
  return mid;
}

// Minimum over all orders of the interior nodes.
Rational brute(const MetricInstance& inst, bool latency, bool weighted = false) {
  NodeSeq mid = interior(inst);
  std::optional<Rational> best;
  do {
    NodeSeq order = {inst.s};
    order.insert(order.end(), mid.begin(), mid.end());
    order.push_back(inst.t);
    Rational v = latency ? total_latency(inst, order, weighted) : path_cost(inst, order);
    if (!best || v < *best) best = v;
  } while (std::next_permutation(mid.begin(), mid.end()));
  return *best;
}

// Every assignment of interior nodes to k labelled paths, each path ordered
// by brute force.
Rational brute_k_person(const MetricInstance& inst, int k) {
  NodeSeq mid = interior(inst);
  const int m = static_cast<int>(mid.size());
  long long total = 1;
  for (int i = 0; i < m; ++i) total *= k;
  std::optional<Rational> best;
  for (long long code = 0; code < total; ++code) {
    std::vector<NodeSeq> groups(k);
    long long c = code;
    for (int i = 0; i < m; ++i, c /= k) groups[c % k].push_back(mid[i]);
    Rational sum;
    for (auto& g : groups) {
      std::sort(g.begin(), g.end());
      std::optional<Rational> gb;
      do {
        NodeSeq p = {inst.s};
        p.insert(p.end(), g.begin(), g.end());
        p.push_back(inst.t);
        Rational v = path_cost(inst, p);
        if (!gb || v < *gb) gb = v;
      } while (std::next_permutation(g.begin(), g.end()));
      sum += *gb;
    }
    if (!best || sum < *best) best = sum;
  }
  return *best;
}

}  // namespace

TEST(ExactAtspp, Trivial) {
  auto two = gen_random(2, 1, 10);
  EXPECT_EQ(exact_atspp(two).value, two.d[0][1]);
  EXPECT_EQ(exact_atspp(unit_metric(6)).value, Rational(5));
}

TEST(ExactAtspp, MatchesPermutations) {
  for (int n = 3; n <= 8; ++n) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto inst = gen_random(n, seed * 5 + n, 90);
      auto res = exact_atspp(inst);
      EXPECT_EQ(res.value, brute(inst, false));
      EXPECT_EQ(path_cost(inst, res.order), res.value);
      EXPECT_EQ(static_cast<int>(res.order.size()), n);
    }
  }
}

TEST(ExactAtspp, BadGap) { EXPECT_GE(exact_atspp(gen_bad_gap(1000)).value, Rational(1000)); }

TEST(ExactLatency, Trivial) {
  auto two = gen_random(2, 1, 10);
  two.weights = std::vector<Rational>{Rational(1), Rational(3)};
  EXPECT_EQ(exact_latency(two, true).value, Rational(3) * two.d[0][1]);
  EXPECT_EQ(exact_latency(unit_metric(3)).value, Rational(3));
}

TEST(ExactLatency, MatchesPermutations) {
  for (int n = 3; n <= 8; ++n) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto inst = gen_random(n, seed * 3 + n, 90);
      auto res = exact_latency(inst);
      EXPECT_EQ(res.value, brute(inst, true));
      EXPECT_EQ(total_latency(inst, res.order), res.value);
      inst.weights = std::vector<Rational>(n);
      for (int v = 0; v < n; ++v) (*inst.weights)[v] = Rational(1 + (v * 7 + static_cast<int>(seed)) % 5, 2);
      EXPECT_EQ(exact_latency(inst, true).value, brute(inst, true, true));
    }
  }
}

TEST(ExactKPerson, SingletonsWhenKLarge) {
  auto inst = gen_random(5, 4, 30);
  // k = 3 = n - 2 admits one node per path; the oracle may still group them.
  auto res = exact_k_person(inst, 3);
  EXPECT_EQ(res.value, brute_k_person(inst, 3));
  ASSERT_EQ(res.paths.size(), 3u);
}

TEST(ExactKPerson, TwoNodesConvention) {
  auto inst = gen_random(2, 4, 30);
  auto res = exact_k_person(inst, 3);
  EXPECT_EQ(res.value, Rational(3) * inst.d[0][1]);
  for (auto& p : res.paths) EXPECT_EQ(p, (NodeSeq{0, 1}));
}

TEST(ExactKPerson, MatchesBruteForce) {
  for (int n = 4; n <= 7; ++n) {
    for (int k : {1, 2, 3}) {
      auto inst = gen_random(n, 11 * n + k, 60);
      auto res = exact_k_person(inst, k);
      EXPECT_EQ(res.value, brute_k_person(inst, k));
      Rational sum;
      for (auto& p : res.paths) sum += path_cost(inst, p);
      EXPECT_EQ(sum, res.value);
      if (k == 1) EXPECT_EQ(res.value, exact_atspp(inst).value);
    }
  }
}

TEST(Oracles, SizeCaps) {
  EXPECT_THROW(exact_atspp(unit_metric(kAtsppOracleCap + 1)), SizeError);
  EXPECT_THROW(exact_latency(unit_metric(kLatencyOracleCap + 1)), SizeError);
  EXPECT_THROW(exact_k_person(unit_metric(kKPersonOracleCap + 1), 2), SizeError);
}
