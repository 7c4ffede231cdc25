#include "proactive/error.hpp"

namespace proactive {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::bad_state: return "bad_state";
    case ErrorCode::stale_preview: return "stale_preview";
    case ErrorCode::unsupported_in_condition: return "unsupported_in_condition";
    case ErrorCode::provider_unavailable: return "provider_unavailable";
    case ErrorCode::runner_unavailable: return "runner_unavailable";
    case ErrorCode::validation: return "validation";
    case ErrorCode::configuration: return "configuration";
    case ErrorCode::contract_violation: return "contract_violation";
    case ErrorCode::telemetry_failure: return "telemetry_failure";
  }
  return "unknown";
}

std::string_view api_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::configuration: return "validation";
    case ErrorCode::contract_violation:
    case ErrorCode::telemetry_failure: return "bad_state";
    default: return to_string(code);
  }
}

int http_status(ErrorCode code) {
  const auto wire = api_code(code);
  if (wire == "not_found") return 404;
  if (wire == "validation") return 400;
  if (wire == "provider_unavailable" || wire == "runner_unavailable") return 503;
  return 409;
}

}  // namespace proactive
