#pragma once

#include <stdexcept>
#include <string>

namespace hcouple {

enum class ErrorKind {
  invalid_pattern,
  cap_exceeded,
  divisibility,
  budget_exceeded,
  contract_violation,
  zero_probability_condition,
  component_too_large,
  invalid_constants,
  out_of_range,
  config,
  parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI and the
/// experiment harness can map it to an exit code or a per-trial record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Budget/cap style errors (exit code 3) versus configuration errors (exit code 2).
bool is_budget_error(ErrorKind kind);

}  // namespace hcouple
