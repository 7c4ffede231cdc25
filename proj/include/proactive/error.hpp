#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace proactive {

/// Error classes surfaced by the library. Each maps to exactly one wire
/// code (see api_code()).
enum class ErrorCode {
  not_found,
  bad_state,
  stale_preview,
  unsupported_in_condition,
  provider_unavailable,
  runner_unavailable,
  validation,
  configuration,
  contract_violation,
  telemetry_failure,
};

std::string_view to_string(ErrorCode code);

/// The code reported over HTTP. Configuration errors surface as
/// `validation`, contract violations and telemetry failures as `bad_state`.
std::string_view api_code(ErrorCode code);

/// HTTP status for the wire code of `code`.
int http_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace proactive
