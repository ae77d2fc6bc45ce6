#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atspp/rational.hpp"
#include "json.hpp"

namespace atspp {

enum class Sense { kLe, kGe, kEq };

struct Term {
  int var;
  Rational coef;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kGe;
  Rational rhs;
  std::string name;
};

// Minimisation LP over nonnegative variables with exact coefficients.
class LpModel {
 public:
  int add_variable(std::string name, Rational objective = Rational());
  void set_objective(int var, Rational coef);
  // Merges repeated variables and drops zero coefficients. Throws
  // ArgumentError when a term references an undeclared variable.
  int add_constraint(LinearConstraint constraint);

  int num_variables() const { return static_cast<int>(names_.size()); }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }
  const std::string& name(int var) const { return names_.at(var); }
  const std::vector<Rational>& objective() const { return objective_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  Rational evaluate(const std::vector<Rational>& x) const;
  static bool satisfied(const LinearConstraint& c, const std::vector<Rational>& x);
  // Index of the first violated constraint, if any.
  std::optional<int> first_violation(const std::vector<Rational>& x) const;

  nlohmann::json to_json() const;

 private:
  std::vector<std::string> names_;
  std::vector<Rational> objective_;
  std::vector<LinearConstraint> constraints_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

const char* to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<Rational> values;
  Rational objective;
  long pivots = 0;
};

nlohmann::json solution_to_json(const LpModel& model, const LpSolution& solution);

// Exact simplex. A light presolve fixes variables forced by singleton
// equalities and sign-definite zero rows. A double-precision tableau then
// proposes an optimal basis, which is certified in exact arithmetic by sparse
// rational solves for the primal and dual values; only if certification fails
// (or the floating run reports infeasible/unbounded) does an exact rational
// tableau decide. Both tableaus use Dantzig pricing with Bland's rule during
// degenerate streaks. Cuts added after an optimal solve are absorbed by a dual
// simplex pass from the current basis.
struct SimplexOptions {
  bool exact_only = false;  // skip the floating-point pass entirely
};

class SimplexSolver {
 public:
  explicit SimplexSolver(LpModel model, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  LpSolution solve();
  // Requires the previous solve to be optimal. Only <= and >= cuts.
  void add_cut(LinearConstraint cut);
  LpSolution reoptimize();

  const LpModel& model() const { return model_; }
  long total_pivots() const { return pivots_; }
  // Solves that needed the exact tableau because certification failed.
  int exact_fallbacks() const { return fallbacks_; }

 private:
  struct Impl;

  bool presolve();
  LpSolution finish();
  LpSolution exact_solve();
  LpSolution extract(std::vector<Rational> values);

  LpModel model_;
  SimplexOptions options_;
  std::vector<std::optional<Rational>> fixed_;
  std::vector<bool> active_;
  std::unique_ptr<Impl> impl_;
  LpStatus status_ = LpStatus::kInfeasible;
  bool solved_ = false;
  long pivots_ = 0;
  int fallbacks_ = 0;
};

// One-shot convenience wrapper.
LpSolution simplex_solve(const LpModel& model, SimplexOptions options = {});

}  // namespace atspp
