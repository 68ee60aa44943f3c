#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

// Precondition violation: the inputs are outside the admissible range.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A solver failed to converge or lost a bracket; carries diagnostics.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::string diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::string& diagnostics() const { return diagnostics_; }

 private:
  std::string diagnostics_;
};

}  // namespace wedge
