#include "atspp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <type_traits>
#include <map>
#include <random>
#include <utility>

#include "atspp/errors.hpp"
#include "atspp/metric.hpp"

namespace atspp {

namespace {

const char* sense_str(Sense s) {
  switch (s) {
    case Sense::kLe: return "<=";
    case Sense::kGe: return ">=";
    case Sense::kEq: return "=";
  }
  return "?";
}

bool sense_holds(Sense s, const Rational& lhs, const Rational& rhs) {
  switch (s) {
    case Sense::kLe: return lhs <= rhs;
    case Sense::kGe: return lhs >= rhs;
    case Sense::kEq: return lhs == rhs;
  }
  return false;
}

Sense flipped(Sense s) {
  if (s == Sense::kLe) return Sense::kGe;
  if (s == Sense::kGe) return Sense::kLe;
  return s;
}

}  // namespace

int LpModel::add_variable(std::string name, Rational objective) {
  names_.push_back(std::move(name));
  objective_.push_back(std::move(objective));
  return static_cast<int>(names_.size()) - 1;
}

void LpModel::set_objective(int var, Rational coef) {
  if (var < 0 || var >= num_variables()) throw ArgumentError("LpModel: unknown variable");
  objective_[var] = std::move(coef);
}

int LpModel::add_constraint(LinearConstraint constraint) {
  std::map<int, Rational> merged;
  for (auto& term : constraint.terms) {
    if (term.var < 0 || term.var >= num_variables()) {
      throw ArgumentError("LpModel: constraint " + constraint.name + " references an undeclared variable");
    }
    merged[term.var] += term.coef;
  }
  constraint.terms.clear();
  for (auto& [var, coef] : merged) {
    if (!coef.is_zero()) constraint.terms.push_back({var, std::move(coef)});
  }
  constraints_.push_back(std::move(constraint));
  return static_cast<int>(constraints_.size()) - 1;
}

Rational LpModel::evaluate(const std::vector<Rational>& x) const {
  Rational sum;
  for (int v = 0; v < num_variables(); ++v) {
    if (!objective_[v].is_zero() && !x[v].is_zero()) sum += objective_[v] * x[v];
  }
  return sum;
}

bool LpModel::satisfied(const LinearConstraint& c, const std::vector<Rational>& x) {
  Rational lhs;
  for (const auto& term : c.terms) {
    if (!x[term.var].is_zero()) lhs += term.coef * x[term.var];
  }
  return sense_holds(c.sense, lhs, c.rhs);
}

std::optional<int> LpModel::first_violation(const std::vector<Rational>& x) const {
  for (int v = 0; v < num_variables(); ++v) {
    if (x[v].sign() < 0) return -1 - v;
  }
  for (int i = 0; i < num_constraints(); ++i) {
    if (!satisfied(constraints_[i], x)) return i;
  }
  return std::nullopt;
}

nlohmann::json LpModel::to_json() const {
  nlohmann::json j;
  j["variables"] = names_;
  nlohmann::json obj = nlohmann::json::object();
  for (int v = 0; v < num_variables(); ++v) {
    if (!objective_[v].is_zero()) obj[names_[v]] = rational_to_json(objective_[v]);
  }
  j["objective"] = std::move(obj);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& c : constraints_) {
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& term : c.terms) terms[names_[term.var]] = rational_to_json(term.coef);
    rows.push_back({{"name", c.name}, {"terms", std::move(terms)}, {"sense", sense_str(c.sense)},
                    {"rhs", rational_to_json(c.rhs)}});
  }
  j["constraints"] = std::move(rows);
  return j;
}

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

nlohmann::json solution_to_json(const LpModel& model, const LpSolution& solution) {
  nlohmann::json j;
  j["status"] = to_string(solution.status);
  j["pivots"] = solution.pivots;
  if (solution.status != LpStatus::kOptimal) return j;
  j["objective"] = rational_to_json(solution.objective);
  nlohmann::json values = nlohmann::json::object();
  for (int v = 0; v < model.num_variables(); ++v) {
    if (!solution.values[v].is_zero()) values[model.name(v)] = rational_to_json(solution.values[v]);
  }
  j["values"] = std::move(values);
  return j;
}

namespace {

enum class ColumnKind { kStructural, kSlack, kArtificial };

struct StdColumn {
  ColumnKind kind;
  int ref;  // variable index for structural columns
};

using SparseRow = std::vector<std::pair<int, Rational>>;  // sorted by column

// Equality form after presolve: every row carries its own slack or
// artificial column, and `basis` is the starting basis.
struct StandardForm {
  std::vector<StdColumn> columns;
  std::vector<SparseRow> rows;
  std::vector<Rational> rhs;
  std::vector<int> basis;
  std::vector<Rational> cost;
  std::vector<int> column_of_var;

  int add_column(ColumnKind kind, int ref) {
    columns.push_back({kind, ref});
    cost.emplace_back();
    return static_cast<int>(columns.size()) - 1;
  }
};

// Coefficients of a constraint over the structural columns after fixing.
SparseRow substitute(const LinearConstraint& c, const StandardForm& sf,
                     const std::vector<std::optional<Rational>>& fixed, Rational& rhs) {
  SparseRow row;
  rhs = c.rhs;
  for (const auto& term : c.terms) {
    if (fixed[term.var]) {
      rhs.sub_mul(term.coef, *fixed[term.var]);
    } else {
      row.emplace_back(sf.column_of_var[term.var], term.coef);
    }
  }
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return row;
}

void negate(SparseRow& row, Rational& rhs) {
  for (auto& entry : row) entry.second = -entry.second;
  rhs = -rhs;
}

StandardForm build_standard_form(const LpModel& model, const std::vector<std::optional<Rational>>& fixed,
                                 const std::vector<bool>& active) {
  StandardForm sf;
  const int nv = model.num_variables();
  sf.column_of_var.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (fixed[v]) continue;
    sf.column_of_var[v] = sf.add_column(ColumnKind::kStructural, v);
    sf.cost.back() = model.objective()[v];
  }
  const auto& cons = model.constraints();
  for (std::size_t i = 0; i < cons.size(); ++i) {
    if (!active[i]) continue;
    Rational rhs;
    SparseRow row = substitute(cons[i], sf, fixed, rhs);
    Sense sense = cons[i].sense;
    if ((sense == Sense::kGe && rhs.is_zero()) || rhs.sign() < 0) {
      negate(row, rhs);
      sense = flipped(sense);
    }
    if (sense == Sense::kLe) {
      int slack = sf.add_column(ColumnKind::kSlack, -1);
      row.emplace_back(slack, Rational(1));
      sf.basis.push_back(slack);
    } else {
      if (sense == Sense::kGe) row.emplace_back(sf.add_column(ColumnKind::kSlack, -1), Rational(-1));
      int artificial = sf.add_column(ColumnKind::kArtificial, -1);
      row.emplace_back(artificial, Rational(1));
      sf.basis.push_back(artificial);
    }
    sf.rows.push_back(std::move(row));
    sf.rhs.push_back(std::move(rhs));
  }
  return sf;
}

template <class T>
struct Num;

template <>
struct Num<double> {
  static constexpr double kEps = 1e-9;
  static constexpr double kDrop = 1e-11;
  static constexpr double kOptTol = 1e-7;
  static int sign(double v) { return v > kEps ? 1 : (v < -kEps ? -1 : 0); }
  static bool improving(double reduced) { return reduced < -kOptTol; }
  static bool zero(double v) { return v == 0.0; }
  static double from(const Rational& r) { return r.to_double(); }
  static void sub_mul(double& a, double f, double b) {
    a -= f * b;
    if (std::abs(a) < kDrop) a = 0.0;
  }
};

template <>
struct Num<Rational> {
  static int sign(const Rational& v) { return v.sign(); }
  static bool improving(const Rational& reduced) { return reduced.sign() < 0; }
  static bool zero(const Rational& v) { return v.is_zero(); }
  static Rational from(const Rational& r) { return r; }
  static void sub_mul(Rational& a, const Rational& f, const Rational& b) { a.sub_mul(f, b); }
};

enum class Outcome { kOptimal, kInfeasible, kUnbounded, kStalled };

constexpr int kDegenerateStreak = 16;
constexpr double kPivotTol = 1e-6;
constexpr double kPhaseOneTol = 1e-5;
constexpr double kShiftTol = 1e-6;
constexpr double kShift = 1e-6;

// Dense simplex tableau over T. Artificial columns become dead after phase 1
// but keep their indices, so the basis can be read against the standard form.
template <class T>
class Tableau {
  using N = Num<T>;

 public:
  Tableau(const StandardForm& sf, long pivot_cap) : pivot_cap_(pivot_cap) {
    const std::size_t width = sf.columns.size();
    for (std::size_t i = 0; i < sf.rows.size(); ++i) {
      std::vector<T> row(width);
      for (const auto& [col, coef] : sf.rows[i]) row[col] = N::from(coef);
      rows_.push_back(std::move(row));
      rhs_.push_back(N::from(sf.rhs[i]));
    }
    basis_ = sf.basis;
    for (const auto& col : sf.columns) artificial_.push_back(col.kind == ColumnKind::kArtificial);
    dead_.assign(width, false);
    for (const auto& c : sf.cost) cost_.push_back(N::from(c));
    if constexpr (std::is_same_v<T, double>) {
      // Lower bounds shifted to -delta_j break ties between degenerate bases;
      // b moves by A delta, so dependent rows stay consistent.
      shift_.assign(width, 0.0);
      for (std::size_t j = 0; j < width; ++j) {
        if (!artificial_[j]) shift_[j] = next_shift();
      }
      for (std::size_t i = 0; i < sf.rows.size(); ++i) {
        for (const auto& [col, coef] : sf.rows[i]) rhs_[i] += rows_[i][col] * shift_[col];
      }
    }
  }

  Outcome solve() {
    run_start_ = pivots_;
    const std::size_t width = cost_.size();
    if (std::find(artificial_.begin(), artificial_.end(), true) != artificial_.end()) {
      std::vector<T> phase1(width);
      for (std::size_t j = 0; j < width; ++j) {
        if (artificial_[j]) phase1[j] = T(1);
      }
      set_costs(phase1);
      Outcome o = run_primal();
      if (o == Outcome::kStalled) return o;
      if constexpr (std::is_same_v<T, double>) {
        // Drift only; a wrong call here is caught by exact certification.
        if (neg_objective_ < -kPhaseOneTol) return Outcome::kInfeasible;
      } else {
        if (N::sign(neg_objective_) != 0) return Outcome::kInfeasible;
      }
      drive_out_artificials();
    }
    set_costs(cost_);
    return run_primal();
  }

  // Appends a slack column and a row given over standard-form columns.
  void add_row(const SparseRow& row, const Rational& rhs) {
    const int slack = static_cast<int>(reduced_.size());
    for (auto& r : rows_) r.emplace_back();
    reduced_.emplace_back();
    cost_.emplace_back();
    artificial_.push_back(false);
    dead_.push_back(false);
    std::vector<T> dense(reduced_.size());
    for (const auto& [col, coef] : row) dense[col] = N::from(coef);
    T b = N::from(rhs);
    if constexpr (std::is_same_v<T, double>) {
      shift_.push_back(shifted_ ? next_shift() : 0.0);
      for (const auto& [col, coef] : row) b += dense[col] * shift_[col];
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      T f = dense[basis_[i]];
      if (N::zero(f)) continue;
      const auto& brow = rows_[i];
      for (std::size_t j = 0; j < brow.size(); ++j) {
        if (!N::zero(brow[j])) N::sub_mul(dense[j], f, brow[j]);
      }
      dense[basis_[i]] = T();
      N::sub_mul(b, f, rhs_[i]);
    }
    rows_.push_back(std::move(dense));
    rhs_.push_back(std::move(b));
    basis_.push_back(slack);
  }

  Outcome reoptimize() {
    run_start_ = pivots_;
    Outcome o = run_dual();
    if (o != Outcome::kOptimal) return o;
    return run_primal();
  }

  // Overwrites the drift-prone right-hand side and cost row with exact values
  // for the current basis.
  void refresh(const std::vector<Rational>& column_values, const std::vector<Rational>& reduced) {
    for (std::size_t i = 0; i < rows_.size(); ++i) rhs_[i] = N::from(column_values[basis_[i]]);
    if constexpr (std::is_same_v<T, double>) {
      shifted_ = false;
      std::fill(shift_.begin(), shift_.end(), 0.0);
    }
    for (std::size_t j = 0; j < reduced_.size(); ++j) reduced_[j] = N::from(reduced[j]);
    for (int b : basis_) reduced_[b] = T();
  }

  const std::vector<int>& basis() const { return basis_; }
  const std::vector<T>& rhs() const { return rhs_; }
  long pivots() const { return pivots_; }

 private:
  void set_costs(const std::vector<T>& cost) {
    reduced_ = cost;
    neg_objective_ = T();
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const T cb = cost[basis_[i]];
      if (N::zero(cb)) continue;
      const auto& row = rows_[i];
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (!N::zero(row[j])) N::sub_mul(reduced_[j], cb, row[j]);
      }
      N::sub_mul(neg_objective_, cb, rhs_[i]);
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) reduced_[basis_[i]] = T();
  }

  void pivot(int r, int q) {
    ++pivots_;
    auto& prow = rows_[r];
    const T p = prow[q];
    if (p != T(1)) {
      for (auto& a : prow) {
        if (!N::zero(a)) a /= p;
      }
      rhs_[r] /= p;
    }
    prow[q] = T(1);
    std::vector<int> nz;
    for (std::size_t j = 0; j < prow.size(); ++j) {
      if (!N::zero(prow[j])) nz.push_back(static_cast<int>(j));
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (static_cast<int>(i) == r || N::zero(rows_[i][q])) continue;
      const T f = rows_[i][q];
      auto& row = rows_[i];
      for (int j : nz) N::sub_mul(row[j], f, prow[j]);
      row[q] = T();
      N::sub_mul(rhs_[i], f, rhs_[r]);
    }
    if (!N::zero(reduced_[q])) {
      const T f = reduced_[q];
      for (int j : nz) N::sub_mul(reduced_[j], f, prow[j]);
      reduced_[q] = T();
      N::sub_mul(neg_objective_, f, rhs_[r]);
    }
    basis_[r] = q;
    if constexpr (std::is_same_v<T, double>) {
      if (primal_mode_) {
        for (auto& b : rhs_) {
          if (b < 0.0 && b > -kShiftTol) b = 0.0;
        }
      }
    }
  }

  bool stalled() const { return pivot_cap_ > 0 && pivots_ - run_start_ >= pivot_cap_; }

  Outcome run_primal() {
    primal_mode_ = true;
    struct Reset {
      bool& flag;
      ~Reset() { flag = false; }
    } reset{primal_mode_};
    int streak = 0;
    bool bland = false;
    for (;;) {
      if (stalled()) return Outcome::kStalled;
      int q = -1;
      for (std::size_t j = 0; j < reduced_.size(); ++j) {
        if (dead_[j] || !N::improving(reduced_[j])) continue;
        if (bland) {
          q = static_cast<int>(j);
          break;
        }
        if (q < 0 || reduced_[j] < reduced_[q]) q = static_cast<int>(j);
      }
      if (q < 0) return Outcome::kOptimal;

      int r = -1;
      T best{};
      if constexpr (std::is_same_v<T, double>) {
        // Harris two-pass test: bound the step with relaxed ratios, then take
        // the largest pivot element among rows within that bound.
        double bound = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
          const double a = rows_[i][q];
          if (a <= kPivotTol) continue;
          const double relaxed = (std::max(rhs_[i], 0.0) + N::kEps) / a;
          if (!any || relaxed < bound) bound = relaxed;
          any = true;
        }
        for (std::size_t i = 0; any && i < rows_.size(); ++i) {
          const double a = rows_[i][q];
          if (a <= kPivotTol) continue;
          const double ratio = std::max(rhs_[i], 0.0) / a;
          if (ratio > bound) continue;
          if (r < 0 || a > rows_[r][q]) {
            r = static_cast<int>(i);
            best = ratio;
          }
        }
      } else {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
          if (N::sign(rows_[i][q]) <= 0) continue;
          T ratio = rhs_[i] / rows_[i][q];
          if (r < 0 || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
            r = static_cast<int>(i);
            best = std::move(ratio);
          }
        }
      }
      if (r < 0) return Outcome::kUnbounded;
      if (N::sign(best) == 0) {
        if (++streak >= kDegenerateStreak) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      pivot(r, q);
    }
  }

  Outcome run_dual() {
    int streak = 0;
    bool bland = false;
    for (;;) {
      if (stalled()) return Outcome::kStalled;
      int r = -1;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if constexpr (std::is_same_v<T, double>) {
          if (rhs_[i] >= -kShiftTol) continue;
        } else {
          if (rhs_[i].sign() >= 0) continue;
        }
        if (r < 0) {
          r = static_cast<int>(i);
        } else if (bland) {
          if (basis_[i] < basis_[r]) r = static_cast<int>(i);
        } else if (rhs_[i] < rhs_[r] || (rhs_[i] == rhs_[r] && basis_[i] < basis_[r])) {
          r = static_cast<int>(i);
        }
      }
      if (r < 0) return Outcome::kOptimal;

      int q = -1;
      T best{};
      const auto& row = rows_[r];
      if constexpr (std::is_same_v<T, double>) {
        double bound = 0.0;
        bool any = false;
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (dead_[j] || row[j] >= -kPivotTol) continue;
          const double relaxed = (std::max(reduced_[j], 0.0) + N::kEps) / -row[j];
          if (!any || relaxed < bound) bound = relaxed;
          any = true;
        }
        for (std::size_t j = 0; any && j < row.size(); ++j) {
          if (dead_[j] || row[j] >= -kPivotTol) continue;
          const double ratio = std::max(reduced_[j], 0.0) / -row[j];
          if (ratio > bound) continue;
          if (q < 0 || -row[j] > -row[q]) {
            q = static_cast<int>(j);
            best = ratio;
          }
        }
      } else {
        for (std::size_t j = 0; j < row.size(); ++j) {
          if (dead_[j] || N::sign(row[j]) >= 0) continue;
          T ratio = reduced_[j] / -row[j];
          if (q < 0 || ratio < best) {
            q = static_cast<int>(j);
            best = std::move(ratio);
          }
        }
      }
      if (q < 0) return Outcome::kInfeasible;
      if (N::sign(best) == 0) {
        if (++streak >= kDegenerateStreak) bland = true;
      } else {
        streak = 0;
        bland = false;
      }
      pivot(r, q);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!artificial_[basis_[i]]) continue;
      int q = -1;
      for (std::size_t j = 0; j < artificial_.size(); ++j) {
        if (artificial_[j] || N::sign(rows_[i][j]) == 0) continue;
        if constexpr (std::is_same_v<T, double>) {
          if (std::abs(rows_[i][j]) <= kPivotTol) continue;
          if (q < 0 || std::abs(rows_[i][j]) > std::abs(rows_[i][q])) q = static_cast<int>(j);
        } else {
          q = static_cast<int>(j);
          break;
        }
      }
      // A row with no usable column is redundant; its artificial stays basic at zero.
      if constexpr (std::is_same_v<T, double>) rhs_[i] = 0.0;
      if (q >= 0) pivot(static_cast<int>(i), q);
    }
    for (std::size_t j = 0; j < artificial_.size(); ++j) {
      if (artificial_[j]) dead_[j] = true;
    }
  }

  std::vector<std::vector<T>> rows_;
  std::vector<T> rhs_;
  std::vector<int> basis_;
  std::vector<T> cost_;
  std::vector<T> reduced_;
  std::vector<bool> artificial_;
  std::vector<bool> dead_;
  T neg_objective_{};
  long pivots_ = 0;
  long pivot_cap_ = 0;
  std::vector<double> shift_;
  bool shifted_ = true;
  std::mt19937_64 rng_{0x5eed};

  double next_shift() { return kShift * (1.0 + static_cast<double>(rng_() % 1024) / 1024.0); }
  bool primal_mode_ = false;
  long run_start_ = 0;
};

// Solves a square sparse system exactly by Gaussian elimination with a
// Markowitz-style pivot order. Returns nullopt when the matrix is singular.
std::optional<std::vector<Rational>> sparse_solve(std::vector<SparseRow> rows, std::vector<Rational> rhs) {
  const int m = static_cast<int>(rows.size());
  std::vector<std::set<int>> col_rows(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [col, coef] : rows[i]) col_rows[col].insert(i);
  }
  std::vector<bool> col_done(m, false);
  std::vector<std::pair<int, int>> order;
  SparseRow merged;
  for (int step = 0; step < m; ++step) {
    int c = -1;
    for (int j = 0; j < m; ++j) {
      if (col_done[j]) continue;
      if (c < 0 || col_rows[j].size() < col_rows[c].size()) c = j;
    }
    if (col_rows[c].empty()) return std::nullopt;
    int r = -1;
    for (int i : col_rows[c]) {
      if (r < 0 || rows[i].size() < rows[r].size()) r = i;
    }
    const SparseRow& prow = rows[r];
    auto pit = std::lower_bound(prow.begin(), prow.end(), c, [](const auto& e, int col) { return e.first < col; });
    const Rational p = pit->second;
    std::vector<int> targets(col_rows[c].begin(), col_rows[c].end());
    for (int k : targets) {
      if (k == r) continue;
      SparseRow& row = rows[k];
      auto kit = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int col) { return e.first < col; });
      Rational f = kit->second / p;
      merged.clear();
      std::size_t a = 0;
      std::size_t b = 0;
      while (a < row.size() || b < prow.size()) {
        if (b == prow.size() || (a < row.size() && row[a].first < prow[b].first)) {
          merged.push_back(std::move(row[a++]));
        } else if (a == row.size() || prow[b].first < row[a].first) {
          Rational v;
          v.sub_mul(f, prow[b].second);
          col_rows[prow[b].first].insert(k);
          merged.emplace_back(prow[b].first, std::move(v));
          ++b;
        } else {
          Rational v = std::move(row[a].second);
          v.sub_mul(f, prow[b].second);
          if (v.is_zero()) {
            col_rows[prow[b].first].erase(k);
          } else {
            merged.emplace_back(prow[b].first, std::move(v));
          }
          ++a;
          ++b;
        }
      }
      row.swap(merged);
      rhs[k].sub_mul(f, rhs[r]);
    }
    for (const auto& [col, coef] : prow) col_rows[col].erase(r);
    col_done[c] = true;
    order.emplace_back(r, c);
  }
  std::vector<Rational> x(m);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto [r, c] = *it;
    Rational acc = rhs[r];
    Rational p;
    for (const auto& [col, coef] : rows[r]) {
      if (col == c) {
        p = coef;
      } else if (!x[col].is_zero()) {
        acc.sub_mul(coef, x[col]);
      }
    }
    x[c] = acc / p;
  }
  return x;
}

struct Certificate {
  bool singular = true;
  bool optimal = false;
  std::vector<Rational> values;   // per standard-form column
  std::vector<Rational> reduced;  // per standard-form column
};

// Exact optimality test for a basis: primal values from B x = b, duals from
// B^T y = c_B, then sign checks with no tolerance.
Certificate certify(const StandardForm& sf, const std::vector<int>& basis) {
  Certificate cert;
  const int m = static_cast<int>(sf.rows.size());
  const int width = static_cast<int>(sf.columns.size());
  std::vector<int> pos(width, -1);
  for (int k = 0; k < m; ++k) {
    if (pos[basis[k]] >= 0) return cert;
    pos[basis[k]] = k;
  }
  std::vector<SparseRow> b_rows(m);
  std::vector<SparseRow> bt_rows(m);
  for (int i = 0; i < m; ++i) {
    for (const auto& [col, coef] : sf.rows[i]) {
      if (pos[col] < 0) continue;
      b_rows[i].emplace_back(pos[col], coef);
      bt_rows[pos[col]].emplace_back(i, coef);
    }
  }
  for (auto& row : b_rows) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  auto x = sparse_solve(std::move(b_rows), sf.rhs);
  if (!x) return cert;
  std::vector<Rational> cb(m);
  for (int k = 0; k < m; ++k) {
    if (sf.columns[basis[k]].kind != ColumnKind::kArtificial) cb[k] = sf.cost[basis[k]];
  }
  auto y = sparse_solve(std::move(bt_rows), std::move(cb));
  if (!y) return cert;
  cert.singular = false;
  cert.reduced = sf.cost;
  for (int i = 0; i < m; ++i) {
    if ((*y)[i].is_zero()) continue;
    for (const auto& [col, coef] : sf.rows[i]) cert.reduced[col].sub_mul((*y)[i], coef);
  }
  cert.values.assign(width, Rational());
  for (int k = 0; k < m; ++k) cert.values[basis[k]] = std::move((*x)[k]);

  cert.optimal = true;
  for (int k = 0; k < m && cert.optimal; ++k) {
    const Rational& value = cert.values[basis[k]];
    if (value.sign() < 0) cert.optimal = false;
    if (sf.columns[basis[k]].kind == ColumnKind::kArtificial && !value.is_zero()) cert.optimal = false;
  }
  for (int j = 0; j < width && cert.optimal; ++j) {
    if (pos[j] >= 0 || sf.columns[j].kind == ColumnKind::kArtificial) continue;
    if (cert.reduced[j].sign() < 0) cert.optimal = false;
  }
  return cert;
}

constexpr int kRefinements = 8;

long float_pivot_cap(const StandardForm& sf) {
  return 50L * static_cast<long>(sf.rows.size() + sf.columns.size()) + 1000;
}

}  // namespace

struct SimplexSolver::Impl {
  StandardForm sf;
  std::unique_ptr<Tableau<double>> approx;
  long approx_pivots_seen = 0;
  Outcome last = Outcome::kStalled;
};

SimplexSolver::SimplexSolver(LpModel model, SimplexOptions options)
    : model_(std::move(model)), options_(options), impl_(std::make_unique<Impl>()) {}
SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

bool SimplexSolver::presolve() {
  const int nv = model_.num_variables();
  const auto& cons = model_.constraints();
  fixed_.assign(nv, std::nullopt);
  active_.assign(cons.size(), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < cons.size(); ++i) {
      if (!active_[i]) continue;
      const auto& c = cons[i];
      Rational rhs = c.rhs;
      std::vector<const Term*> free;
      int positive = 0;
      int negative = 0;
      for (const auto& term : c.terms) {
        if (fixed_[term.var]) {
          rhs.sub_mul(term.coef, *fixed_[term.var]);
        } else {
          free.push_back(&term);
          (term.coef.sign() > 0 ? positive : negative)++;
        }
      }
      if (free.empty()) {
        if (!sense_holds(c.sense, Rational(), rhs)) return false;
        active_[i] = false;
        continue;
      }
      if (c.sense == Sense::kEq && free.size() == 1) {
        Rational value = rhs / free.front()->coef;
        if (value.sign() < 0) return false;
        fixed_[free.front()->var] = std::move(value);
        active_[i] = false;
        changed = true;
        continue;
      }
      if (!rhs.is_zero()) continue;
      bool forces_zero = (negative == 0 && c.sense != Sense::kGe) || (positive == 0 && c.sense != Sense::kLe);
      if (forces_zero) {
        for (const Term* term : free) fixed_[term->var] = Rational();
        active_[i] = false;
        changed = true;
      }
    }
  }
  return true;
}

LpSolution SimplexSolver::solve() {
  solved_ = true;
  if (!presolve()) {
    status_ = LpStatus::kInfeasible;
    return extract({});
  }
  impl_->sf = build_standard_form(model_, fixed_, active_);
  if (options_.exact_only) return exact_solve();
  impl_->approx = std::make_unique<Tableau<double>>(impl_->sf, float_pivot_cap(impl_->sf));
  impl_->approx_pivots_seen = 0;
  impl_->last = impl_->approx->solve();
  return finish();
}

void SimplexSolver::add_cut(LinearConstraint cut) {
  if (!solved_ || status_ != LpStatus::kOptimal) {
    throw ContractViolation("SimplexSolver::add_cut: requires an optimal solve first");
  }
  if (cut.sense == Sense::kEq) throw ArgumentError("SimplexSolver::add_cut: equality cuts are not supported");
  const int index = model_.add_constraint(std::move(cut));
  const LinearConstraint& c = model_.constraints()[index];
  active_.push_back(true);
  StandardForm& sf = impl_->sf;
  Rational rhs;
  SparseRow row = substitute(c, sf, fixed_, rhs);
  if (c.sense == Sense::kGe) negate(row, rhs);
  const int slack = sf.add_column(ColumnKind::kSlack, -1);
  row.emplace_back(slack, Rational(1));
  if (impl_->approx) impl_->approx->add_row(row, rhs);
  sf.rows.push_back(std::move(row));
  sf.rhs.push_back(std::move(rhs));
  sf.basis.push_back(slack);
}

LpSolution SimplexSolver::reoptimize() {
  if (!solved_) return solve();
  if (status_ != LpStatus::kOptimal) return extract({});
  if (!impl_->approx) return exact_solve();
  impl_->last = impl_->approx->reoptimize();
  return finish();
}

LpSolution SimplexSolver::finish() {
  pivots_ += impl_->approx->pivots() - impl_->approx_pivots_seen;
  impl_->approx_pivots_seen = impl_->approx->pivots();
  for (int round = 0; impl_->last == Outcome::kOptimal; ++round) {
    Certificate cert = certify(impl_->sf, impl_->approx->basis());
    if (cert.optimal) {
      status_ = LpStatus::kOptimal;
      return extract(std::move(cert.values));
    }
    if (cert.singular || round == kRefinements) break;
    impl_->approx->refresh(cert.values, cert.reduced);
    impl_->last = impl_->approx->reoptimize();
    pivots_ += impl_->approx->pivots() - impl_->approx_pivots_seen;
    impl_->approx_pivots_seen = impl_->approx->pivots();
  }
  if (impl_->last == Outcome::kOptimal || impl_->last == Outcome::kStalled) ++fallbacks_;
  return exact_solve();
}

LpSolution SimplexSolver::exact_solve() {
  Tableau<Rational> exact(impl_->sf, 0);
  Outcome o = exact.solve();
  pivots_ += exact.pivots();
  if (o == Outcome::kInfeasible) {
    status_ = LpStatus::kInfeasible;
    return extract({});
  }
  if (o == Outcome::kUnbounded) {
    status_ = LpStatus::kUnbounded;
    return extract({});
  }
  status_ = LpStatus::kOptimal;
  std::vector<Rational> columns(impl_->sf.columns.size());
  for (std::size_t i = 0; i < exact.basis().size(); ++i) columns[exact.basis()[i]] = exact.rhs()[i];
  return extract(std::move(columns));
}

LpSolution SimplexSolver::extract(std::vector<Rational> columns) {
  LpSolution sol;
  sol.status = status_;
  sol.pivots = pivots_;
  if (status_ != LpStatus::kOptimal) return sol;
  const int nv = model_.num_variables();
  sol.values.assign(nv, Rational());
  for (int v = 0; v < nv; ++v) {
    if (fixed_[v]) {
      sol.values[v] = *fixed_[v];
    } else {
      sol.values[v] = std::move(columns[impl_->sf.column_of_var[v]]);
    }
  }
  sol.objective = model_.evaluate(sol.values);
  if (auto bad = model_.first_violation(sol.values)) {
    std::string what = *bad < 0 ? "negative variable " + model_.name(-1 - *bad)
                                : "violated constraint " + model_.constraints()[*bad].name;
    throw InvariantViolation("simplex returned an infeasible point: " + what);
  }
  return sol;
}

LpSolution simplex_solve(const LpModel& model, SimplexOptions options) {
  SimplexSolver solver(model, options);
  return solver.solve();
}

}  // namespace atspp
