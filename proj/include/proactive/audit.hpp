#pragma once

#include <map>
#include <string>
#include <vector>

#include "proactive/suggestion.hpp"
#include "proactive/telemetry.hpp"

namespace proactive {

/// Session state rebuilt purely from its telemetry.
struct ReconstructedState {
  struct Doc {
    std::string text;
    int version = 0;
  };
  std::map<DocId, Doc> documents;
  std::map<SuggestionId, SuggestionState> suggestions;
  BatchId current_batch;
  std::size_t chat_messages = 0;
  std::map<PreviewId, std::string> previews;  // id -> requested|ready|failed|accepted|hidden
  std::optional<std::string> task_id;
  int runs = 0;
};

struct AuditReport {
  std::vector<std::string> problems;
  ReconstructedState state;
  bool ok() const { return problems.empty(); }
};

/// Checks one session's events for internal consistency: gapless seq,
/// monotone time, document versions, legal suggestion transitions, every
/// generation resolved by exactly one shown or discarded event, and
/// previews resolved at most once.
AuditReport audit_session(const std::vector<TelemetryEvent>& events);

/// Groups by session and audits each. Problems are prefixed with the id.
AuditReport audit_log(const LogContents& log);

}  // namespace proactive
