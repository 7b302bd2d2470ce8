#include "vtrack/errors.hpp"

namespace vtrack {

namespace {

std::string join_failures(const std::vector<std::string>& failures) {
  std::string out = "gain constraints violated:";
  for (const auto& f : failures) {
    out += "\n  ";
    out += f;
  }
  return out;
}

std::string with_location(const std::string& what, int line, int column) {
  if (line <= 0) return what;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

}  // namespace

ConstraintViolation::ConstraintViolation(std::vector<std::string> failures)
    : std::runtime_error(join_failures(failures)), failures_(std::move(failures)) {}

DivergenceError::DivergenceError(const std::string& what, double time)
    : std::runtime_error(what + " at s=" + std::to_string(time)), time_(time) {}

ScenarioError::ScenarioError(const std::string& what, int line, int column)
    : std::runtime_error(with_location(what, line, column)), line_(line), column_(column) {}

}  // namespace vtrack
