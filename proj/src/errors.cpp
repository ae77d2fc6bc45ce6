#include "atspp/errors.hpp"

#include <algorithm>

namespace atspp {

void CheckLog::expect(bool ok, const std::string& name, const std::string& witness) {
  checks_.push_back({name, ok, witness});
  if (!ok) {
    nlohmann::json state = context_;
    state["failed_check"] = {{"name", name}, {"witness", witness}};
    throw InvariantViolation(name + " violated: " + witness, std::move(state));
  }
}

void CheckLog::note(bool ok, const std::string& name, const std::string& witness) {
  checks_.push_back({name, ok, witness});
}

void CheckLog::append(const CheckLog& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

std::size_t CheckLog::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks_.begin(), checks_.end(), [](const LemmaCheck& c) { return !c.passed; }));
}

nlohmann::json CheckLog::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : checks_) {
    out.push_back({{"name", c.name}, {"passed", c.passed}, {"witness", c.witness}});
  }
  return out;
}

}  // namespace atspp
