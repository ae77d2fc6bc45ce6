#include "atspp/oracle.hpp"

#include <string>
#include <tuple>

#include "atspp/errors.hpp"

namespace atspp {

namespace {

// dp[mask][j]: cheapest walk from s through exactly the interior nodes in
// mask, ending at inner[j]. `weight(mask)` scales the arc taken from a state
// whose visited set is mask (1 for plain path cost).
struct SubsetDp {
  std::vector<int> inner;
  std::vector<std::vector<Rational>> cost;
  std::vector<std::vector<int>> parent;
  std::vector<std::vector<char>> valid;

  template <class Scale>
  SubsetDp(const MetricInstance& inst, Scale scale) {
    for (int v = 0; v < inst.n; ++v) {
      if (v != inst.s && v != inst.t) inner.push_back(v);
    }
    const int m = static_cast<int>(inner.size());
    const std::size_t states = std::size_t{1} << m;
    cost.assign(states, std::vector<Rational>(m));
    parent.assign(states, std::vector<int>(m, -1));
    valid.assign(states, std::vector<char>(m, 0));
    for (int j = 0; j < m; ++j) {
      cost[std::size_t{1} << j][j] = inst.dist(inst.s, inner[j]) * scale(0);
      valid[std::size_t{1} << j][j] = 1;
    }
    for (std::size_t mask = 1; mask < states; ++mask) {
      Rational factor = scale(mask);
      for (int j = 0; j < m; ++j) {
        if (!valid[mask][j]) continue;
        for (int w = 0; w < m; ++w) {
          if (mask >> w & 1) continue;
          std::size_t next = mask | (std::size_t{1} << w);
          Rational c = cost[mask][j] + inst.dist(inner[j], inner[w]) * factor;
          if (!valid[next][w] || c < cost[next][w]) {
            cost[next][w] = std::move(c);
            parent[next][w] = j;
            valid[next][w] = 1;
          }
        }
      }
    }
  }

  // Interior nodes of the best walk for (mask, j), in visiting order.
  NodeSeq walk(std::size_t mask, int j) const {
    NodeSeq rev;
    while (j >= 0) {
      rev.push_back(inner[j]);
      int p = parent[mask][j];
      mask &= ~(std::size_t{1} << j);
      j = p;
    }
    return {rev.rbegin(), rev.rend()};
  }
};

void check_cap(const MetricInstance& inst, int cap, const char* who) {
  if (inst.n > cap) {
    throw SizeError(std::string(who) + ": n = " + std::to_string(inst.n) + " exceeds cap " + std::to_string(cap));
  }
  if (inst.n < 2) throw ArgumentError(std::string(who) + ": n < 2");
}

// Best closing of the DP at t for the given mask; j = -1 means s -> t.
std::pair<Rational, int> close(const MetricInstance& inst, const SubsetDp& dp, std::size_t mask,
                               const Rational& last_factor) {
  if (mask == 0) return {inst.dist(inst.s, inst.t) * last_factor, -1};
  Rational best;
  int arg = -1;
  for (int j = 0; j < static_cast<int>(dp.inner.size()); ++j) {
    if (!dp.valid[mask][j]) continue;
    Rational c = dp.cost[mask][j] + inst.dist(dp.inner[j], inst.t) * last_factor;
    if (arg < 0 || c < best) {
      best = std::move(c);
      arg = j;
    }
  }
  return {best, arg};
}

NodeSeq full_path(const MetricInstance& inst, const SubsetDp& dp, std::size_t mask, int j) {
  NodeSeq path{inst.s};
  if (j >= 0) {
    NodeSeq mid = dp.walk(mask, j);
    path.insert(path.end(), mid.begin(), mid.end());
  }
  path.push_back(inst.t);
  return path;
}

}  // namespace

ExactResult exact_atspp(const MetricInstance& inst) {
  check_cap(inst, kAtsppOracleCap, "exact_atspp");
  SubsetDp dp(inst, [](std::size_t) { return Rational(1); });
  std::size_t full = (std::size_t{1} << dp.inner.size()) - 1;
  auto [value, j] = close(inst, dp, full, Rational(1));
  return {value, full_path(inst, dp, full, j)};
}

ExactResult exact_latency(const MetricInstance& inst, bool weighted) {
  check_cap(inst, kLatencyOracleCap, "exact_latency");
  if (weighted && !inst.weights) throw ArgumentError("exact_latency: instance has no weights");
  auto c = [&](int v) { return weighted ? inst.weight(v) : Rational(1); };
  std::vector<int> inner;
  for (int v = 0; v < inst.n; ++v) {
    if (v != inst.s && v != inst.t) inner.push_back(v);
  }
  Rational all = c(inst.t);
  for (int v : inner) all += c(v);
  SubsetDp dp(inst, [&](std::size_t mask) {
    Rational rest = all;
    for (std::size_t j = 0; j < inner.size(); ++j) {
      if (mask >> j & 1) rest -= c(inner[j]);
    }
    return rest;
  });
  std::size_t full = (std::size_t{1} << inner.size()) - 1;
  auto [value, j] = close(inst, dp, full, c(inst.t));
  return {value, full_path(inst, dp, full, j)};
}

ExactKPerson exact_k_person(const MetricInstance& inst, int k) {
  check_cap(inst, kKPersonOracleCap, "exact_k_person");
  if (k < 1) throw ArgumentError("exact_k_person: k < 1");
  SubsetDp dp(inst, [](std::size_t) { return Rational(1); });
  const std::size_t states = std::size_t{1} << dp.inner.size();

  std::vector<Rational> single(states);
  std::vector<int> single_end(states);
  for (std::size_t mask = 0; mask < states; ++mask) {
    std::tie(single[mask], single_end[mask]) = close(inst, dp, mask, Rational(1));
  }
  // best[r][mask]: r paths covering mask; choice[r][mask]: the last path's set.
  std::vector<std::vector<Rational>> best(k + 1, std::vector<Rational>(states));
  std::vector<std::vector<std::size_t>> choice(k + 1, std::vector<std::size_t>(states, 0));
  best[1] = single;
  for (std::size_t mask = 0; mask < states; ++mask) choice[1][mask] = mask;
  for (int r = 2; r <= k; ++r) {
    for (std::size_t mask = 0; mask < states; ++mask) {
      bool any = false;
      for (std::size_t sub = mask;; sub = (sub - 1) & mask) {
        Rational c = single[sub] + best[r - 1][mask ^ sub];
        if (!any || c < best[r][mask]) {
          best[r][mask] = std::move(c);
          choice[r][mask] = sub;
          any = true;
        }
        if (sub == 0) break;
      }
    }
  }
  ExactKPerson out;
  std::size_t mask = states - 1;
  out.value = best[k][mask];
  for (int r = k; r >= 1; --r) {
    std::size_t sub = choice[r][mask];
    out.paths.push_back(full_path(inst, dp, sub, single_end[sub]));
    mask ^= sub;
  }
  return out;
}

}  // namespace atspp
