#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace vtrack {

// A physical or scaling parameter is outside its admissible domain.
class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One or more hard gain constraints failed; `failures` lists each inequality.
class ConstraintViolation : public std::runtime_error {
 public:
  explicit ConstraintViolation(std::vector<std::string> failures);
  const std::vector<std::string>& failures() const noexcept { return failures_; }

 private:
  std::vector<std::string> failures_;
};

// Reference input or trajectory breaks the bounded-input assumption.
class AssumptionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Assembled control exceeds its actuator ceiling.
class SaturationBudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integration produced a non-finite value or left the divergence guard.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time);
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Malformed scenario or grid document. line/column are 1-based, 0 if unknown.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace vtrack
