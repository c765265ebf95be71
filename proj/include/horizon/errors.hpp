#pragma once

#include <stdexcept>
#include <string>

namespace horizon {

enum class ErrorCode {
  invalid_input,
  unsupported_input,
  non_summable_system,
  no_convergence,
  stiffness,
  grid_mismatch,
  radius_exceeded,
  incomplete_verification,
  not_found,
  horizon_too_short,
  resource_too_large,
  schema_mismatch,
  io_failure,
};

/// Exception carrying a stable error code for the C API layer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::unsupported_input: return "unsupported-input";
    case ErrorCode::non_summable_system: return "non-summable-system";
    case ErrorCode::no_convergence: return "no-convergence";
    case ErrorCode::stiffness: return "stiffness";
    case ErrorCode::grid_mismatch: return "grid-mismatch";
    case ErrorCode::radius_exceeded: return "radius-exceeded";
    case ErrorCode::incomplete_verification: return "incomplete-verification";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::horizon_too_short: return "horizon-too-short";
    case ErrorCode::resource_too_large: return "resource-too-large";
    case ErrorCode::schema_mismatch: return "schema-mismatch";
    case ErrorCode::io_failure: return "io-failure";
  }
  return "unknown";
}

}  // namespace horizon
