#pragma once

#include <chrono>
#include <cstdint>
#include <compare>
#include <string>

namespace proactive {

/// Milliseconds on the session clock. The service feeds wall-clock epoch
/// milliseconds; tests and replay feed a virtual clock.
using Millis = std::chrono::milliseconds;

struct Timestamp {
  std::int64_t ms = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;

  Timestamp operator+(Millis d) const { return {ms + d.count()}; }
  Millis operator-(Timestamp other) const { return Millis{ms - other.ms}; }
};

inline Timestamp at_ms(std::int64_t ms) { return Timestamp{ms}; }
inline Timestamp at_seconds(double s) {
  return Timestamp{static_cast<std::int64_t>(s * 1000.0)};
}

/// Monotone token identifying one suggestion generation request.
struct GenerationToken {
  std::uint64_t value = 0;

  friend auto operator<=>(const GenerationToken&, const GenerationToken&) = default;
};

using SessionId = std::string;
using DocId = std::string;
using SuggestionId = std::string;
using BatchId = std::string;
using PreviewId = std::string;

}  // namespace proactive
