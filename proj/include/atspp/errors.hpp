#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace atspp {

// Bad caller input: out-of-range arguments, malformed node sets.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed data structure, e.g. a non-square distance matrix.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The instance admits no solution (unreachable pair, no perfect matching).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a documented precondition of an operation.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Exponential-time oracle called above its size cap.
class SizeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A directed cycle was found where an acyclic arc set was required.
class AcyclicityViolation : public std::logic_error {
 public:
  AcyclicityViolation(const std::string& what, std::vector<int> cycle)
      : std::logic_error(what), cycle_(std::move(cycle)) {}
  const std::vector<int>& cycle() const { return cycle_; }

 private:
  std::vector<int> cycle_;
};

// A proven invariant failed at runtime. Carries the solver state at the
// point of failure so it can be dumped for diagnosis.
class InvariantViolation : public std::logic_error {
 public:
  InvariantViolation(const std::string& what, nlohmann::json state = {})
      : std::logic_error(what), state_(std::move(state)) {}
  const nlohmann::json& state() const { return state_; }

 private:
  nlohmann::json state_;
};

// One named runtime check together with the quantity it witnessed.
struct LemmaCheck {
  std::string name;
  bool passed = true;
  std::string witness;
};

// Accumulates checks. A failing fatal check throws InvariantViolation.
class CheckLog {
 public:
  void expect(bool ok, const std::string& name, const std::string& witness);
  void note(bool ok, const std::string& name, const std::string& witness);
  void append(const CheckLog& other);

  const std::vector<LemmaCheck>& checks() const { return checks_; }
  std::size_t failures() const;
  std::size_t size() const { return checks_.size(); }
  nlohmann::json to_json() const;

  // State attached to any InvariantViolation thrown from expect().
  void set_context(nlohmann::json context) { context_ = std::move(context); }

 private:
  std::vector<LemmaCheck> checks_;
  nlohmann::json context_;
};

}  // namespace atspp
