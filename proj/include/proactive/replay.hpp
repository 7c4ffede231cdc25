#pragma once

#include <memory>
#include <string>
#include <vector>

#include "proactive/provider.hpp"
#include "proactive/telemetry.hpp"

namespace proactive {

struct ReplayOptions {
  /// Provider used instead of the replies recorded in the log. Must be
  /// deterministic and answer calls in the order the session makes them.
  std::shared_ptr<Provider> provider;
  /// Session id of the replayed session.
  SessionId session_id = "replay";
};

struct ReplayResult {
  std::vector<std::string> original;
  std::vector<std::string> replayed;
  /// Errors raised by replayed inputs.
  std::vector<std::string> input_errors;
  /// Index of the first differing line, or -1.
  long first_mismatch = -1;
  bool identical() const { return first_mismatch < 0 && input_errors.empty(); }
  /// Human-readable account of the first difference.
  std::string describe() const;
};

/// Re-runs one session's recorded inputs through a fresh session on a
/// virtual clock and compares the logs line by line with the session id
/// blanked. Provider replies, run results and completion times come from
/// the log itself unless a provider is supplied. Ticks are placed exactly
/// at the recorded start of each proactive generation, so logs from the
/// live service replay as well as virtual ones.
/// Throws Error(validation) when the log does not hold exactly one session.
ReplayResult replay_session(const LogContents& log, const ReplayOptions& opts = {});

/// Replaces the value of the top-level "session_id" key with "".
std::string blank_session_id(const std::string& line);

}  // namespace proactive
