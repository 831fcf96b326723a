#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace techcycle {

enum class ErrorKind {
  Parse,
  Validation,
  Duplicate,
  MissingCpiYear,
  EmptyGroup,
  UnknownTechnology,
  InsufficientData,
  DegenerateRegressor,
  Domain,
  NoCycle,
  DegenerateCycle,
  NotYetDefined,
  Window,
  Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this type; `kind()` lets callers
// (the CLI in particular) map failures onto stable exit codes.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace techcycle
