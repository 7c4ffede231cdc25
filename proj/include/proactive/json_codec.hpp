#pragma once

#include "json.hpp"
#include "proactive/condition.hpp"
#include "proactive/diff.hpp"
#include "proactive/records.hpp"
#include "proactive/suggestion.hpp"

namespace proactive {

// Wire and telemetry representations. Field names are part of the external
// interface.

nlohmann::json to_json(const ConditionConfig& cfg);
/// Throws Error(validation) on missing or mistyped fields.
ConditionConfig condition_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SuggestionContent& s);
nlohmann::json to_json(const Suggestion& s);
nlohmann::json to_json(const ChatMessage& m);
nlohmann::json to_json(const RunResult& r);
RunResult run_result_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CodeDocument& d);

/// {old_start, old_len, new_start, new_len, removed, added}
nlohmann::json to_json(const DiffHunk& h);
DiffHunk hunk_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PreviewResult& p);
PreviewResult preview_from_json(const nlohmann::json& j);

}  // namespace proactive
