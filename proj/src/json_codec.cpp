#include "proactive/json_codec.hpp"

#include <cmath>

#include "proactive/error.hpp"
#include "proactive/text.hpp"

namespace proactive {

using nlohmann::json;

namespace {

double seconds(Millis ms) { return static_cast<double>(ms.count()) / 1000.0; }
Millis from_seconds(double s) { return Millis{static_cast<std::int64_t>(std::llround(s * 1000.0))}; }

template <typename T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::validation, std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::validation, std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

json to_json(const ConditionConfig& c) {
  json j{{"name", c.name},
         {"proactive_enabled", c.proactive_enabled},
         {"preview_enabled", c.preview_enabled},
         {"idle_threshold_s", seconds(c.idle_threshold)},
         {"cooldown_s", seconds(c.cooldown)},
         {"suggestions_per_batch", c.suggestions_per_batch},
         {"guiding_prompts", c.guiding_prompts},
         {"history_limit", c.history_limit}};
  if (c.typing_resume_grace) j["typing_resume_grace_s"] = seconds(*c.typing_resume_grace);
  return j;
}

ConditionConfig condition_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "condition must be an object");
  ConditionConfig c;
  c.name = field<std::string>(j, "name");
  c.proactive_enabled = field<bool>(j, "proactive_enabled");
  c.preview_enabled = field<bool>(j, "preview_enabled");
  c.idle_threshold = from_seconds(field<double>(j, "idle_threshold_s"));
  c.cooldown = from_seconds(field<double>(j, "cooldown_s"));
  c.suggestions_per_batch = field<int>(j, "suggestions_per_batch");
  c.guiding_prompts = field<bool>(j, "guiding_prompts");
  c.history_limit = j.contains("history_limit") ? field<int>(j, "history_limit") : 40;
  if (j.contains("typing_resume_grace_s"))
    c.typing_resume_grace = from_seconds(field<double>(j, "typing_resume_grace_s"));
  try {
    validate(c);
  } catch (const Error& e) {
    throw Error(ErrorCode::validation, e.what());
  }
  return c;
}

json to_json(const SuggestionContent& s) {
  json j{{"category", std::string(wire_name(s.category))},
         {"label", std::string(display_label(s.category))},
         {"summary", s.summary},
         {"code", s.code ? json(*s.code) : json(nullptr)},
         {"explanation", s.explanation}};
  return j;
}

json to_json(const Suggestion& s) {
  json j = to_json(s.content);
  j["suggestion_id"] = s.id;
  j["batch_id"] = s.batch_id;
  j["origin"] = std::string(to_string(s.origin));
  j["state"] = std::string(to_string(s.state));
  return j;
}

json to_json(const ChatMessage& m) {
  json j{{"role", std::string(to_string(m.role))},
         {"content", m.content},
         {"code_blocks", m.code_blocks},
         {"ts_ms", m.ts.ms}};
  if (m.suggestion_id) j["suggestion_id"] = *m.suggestion_id;
  return j;
}

json to_json(const RunResult& r) {
  return json{{"stdout", r.stdout_text},   {"stderr", r.stderr_text},
              {"exit_status", r.exit_status}, {"is_error", r.is_error},
              {"timed_out", r.timed_out},   {"duration_ms", r.duration.count()}};
}

RunResult run_result_from_json(const json& j) {
  RunResult r;
  r.stdout_text = j.value("stdout", std::string());
  r.stderr_text = j.value("stderr", std::string());
  r.exit_status = j.value("exit_status", 0);
  r.is_error = j.value("is_error", false);
  r.timed_out = j.value("timed_out", false);
  r.duration = Millis{j.value("duration_ms", std::int64_t{0})};
  return r;
}

json to_json(const CodeDocument& d) {
  return json{{"doc_id", d.id}, {"text", d.text}, {"version", d.version}};
}

json to_json(const DiffHunk& h) {
  return json{{"old_start", h.old_start}, {"old_len", h.old_len},
              {"new_start", h.new_start}, {"new_len", h.new_len},
              {"removed", h.removed_lines}, {"added", h.added_lines}};
}

DiffHunk hunk_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::validation, "hunk must be an object");
  DiffHunk h;
  h.old_start = field<int>(j, "old_start");
  h.old_len = field<int>(j, "old_len");
  h.new_start = field<int>(j, "new_start");
  h.new_len = field<int>(j, "new_len");
  h.removed_lines = field<std::vector<std::string>>(j, "removed");
  h.added_lines = field<std::vector<std::string>>(j, "added");
  return h;
}

json to_json(const PreviewResult& p) {
  json hunks = json::array();
  for (const auto& h : p.hunks) hunks.push_back(to_json(h));
  return json{{"preview_id", p.preview_id},
              {"suggestion_id", p.suggestion_id},
              {"doc_id", p.doc_id},
              {"original_text", p.original_text},
              {"proposed_text", p.proposed_text},
              {"original_hash", p.original_hash},
              {"hunks", std::move(hunks)},
              {"provider_latency_ms", p.provider_latency.count()}};
}

PreviewResult preview_from_json(const json& j) {
  PreviewResult p;
  p.preview_id = field<std::string>(j, "preview_id");
  p.suggestion_id = field<std::string>(j, "suggestion_id");
  p.doc_id = field<std::string>(j, "doc_id");
  p.original_text = field<std::string>(j, "original_text");
  p.proposed_text = field<std::string>(j, "proposed_text");
  p.original_hash = j.contains("original_hash") ? field<std::string>(j, "original_hash")
                                                : text::sha256_hex(p.original_text);
  for (const auto& h : field<json>(j, "hunks")) p.hunks.push_back(hunk_from_json(h));
  p.provider_latency = Millis{j.value("provider_latency_ms", std::int64_t{0})};
  return p;
}

}  // namespace proactive
