#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "proactive/provider.hpp"
#include "proactive/session.hpp"
#include "proactive/suggestion.hpp"
#include "proactive/telemetry.hpp"

namespace proactive::testing {

/// A well-formed suggestion reply with `n` entries cycling through `cats`.
inline std::string suggestion_reply(int n, std::vector<Category> cats = {Category::explain_code}) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    const auto c = cats[static_cast<std::size_t>(i) % cats.size()];
    arr.push_back({{"type", std::string(wire_name(c))},
                   {"summary", "Suggestion number " + std::to_string(i + 1)},
                   {"code", "x = " + std::to_string(i + 1)},
                   {"explanation", {"first point", "second point"}}});
  }
  return "```json\n" + arr.dump(2) + "\n```";
}

inline ProviderResponse response(std::string text, Millis latency = Millis{1000}) {
  ProviderResponse r;
  r.raw_text = std::move(text);
  r.latency = latency;
  r.provider_name = "test";
  return r;
}

/// Answers every suggestion prompt with `n` entries, chat with a fixed
/// sentence, and previews with the configured integration result.
class FakeProvider : public Provider {
 public:
  int per_batch = 3;
  Millis latency{1000};
  std::string preview_code;
  int calls = 0;

  ProviderResponse complete(const PromptBundle& b) override {
    ++calls;
    switch (b.kind) {
      case PromptKind::chat: return response("Here is an answer.", latency);
      case PromptKind::preview: return response("```python\n" + preview_code + "```", latency);
      case PromptKind::debug:
        return response(suggestion_reply(per_batch, {Category::debug_runtime, Category::explain_code}),
                        latency);
      case PromptKind::standard:
        return response(suggestion_reply(per_batch, {Category::explain_code, Category::add_tests,
                                                     Category::brainstorm_functionality}),
                        latency);
    }
    return response("", latency);
  }
  std::string name() const override { return "fake"; }
};

inline std::vector<TelemetryEvent> events_of(const Session& s) {
  std::vector<TelemetryEvent> out;
  for (const auto& l : s.telemetry_lines()) out.push_back(*parse_event_line(l));
  return out;
}

inline int count_kind(const Session& s, EventKind k) {
  int n = 0;
  for (const auto& e : events_of(s)) n += e.kind == k;
  return n;
}

}  // namespace proactive::testing
