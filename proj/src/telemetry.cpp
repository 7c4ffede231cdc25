#include "proactive/telemetry.hpp"

#include <array>
#include <sstream>

#include "proactive/error.hpp"

namespace proactive {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 24> kKindNames{{
    {EventKind::session_created, "session_created"},
    {EventKind::code_update, "code_update"},
    {EventKind::chat_send, "chat_send"},
    {EventKind::chat_typing, "chat_typing"},
    {EventKind::chat_response, "chat_response"},
    {EventKind::suggestions_generated, "suggestions_generated"},
    {EventKind::suggestion_shown, "suggestion_shown"},
    {EventKind::suggestion_expand, "suggestion_expand"},
    {EventKind::suggestion_collapse, "suggestion_collapse"},
    {EventKind::suggestion_accept, "suggestion_accept"},
    {EventKind::suggestion_delete, "suggestion_delete"},
    {EventKind::suggestions_clear, "suggestions_clear"},
    {EventKind::suggestion_copy, "suggestion_copy"},
    {EventKind::suggestion_request, "suggestion_request"},
    {EventKind::suggestion_preview, "suggestion_preview"},
    {EventKind::preview_request, "preview_request"},
    {EventKind::preview_accept, "preview_accept"},
    {EventKind::preview_hide, "preview_hide"},
    {EventKind::generation_discarded, "generation_discarded"},
    {EventKind::parse_failure, "parse_failure"},
    {EventKind::provider_error, "provider_error"},
    {EventKind::run, "run"},
    {EventKind::task_start, "task_start"},
    {EventKind::task_submit, "task_submit"},
}};

}  // namespace

std::string_view to_string(EventKind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (const auto& [kind, name] : kKindNames)
    if (name == s) return kind;
  return std::nullopt;
}

std::string serialize(const TelemetryEvent& ev) {
  nlohmann::json j;
  j["session_id"] = ev.session_id;
  j["condition_name"] = ev.condition_name;
  j["task_id"] = ev.task_id ? nlohmann::json(*ev.task_id) : nlohmann::json(nullptr);
  j["seq"] = ev.seq;
  j["ts_ms"] = ev.ts.ms;
  j["kind"] = std::string(to_string(ev.kind));
  j["payload"] = ev.payload;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::optional<TelemetryEvent> parse_event_line(std::string_view line) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    TelemetryEvent ev;
    ev.session_id = j.at("session_id").get<std::string>();
    ev.condition_name = j.at("condition_name").get<std::string>();
    if (auto it = j.find("task_id"); it != j.end() && it->is_string())
      ev.task_id = it->get<std::string>();
    ev.seq = j.at("seq").get<std::int64_t>();
    ev.ts = Timestamp{j.at("ts_ms").get<std::int64_t>()};
    auto kind = event_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) return std::nullopt;
    ev.kind = *kind;
    ev.payload = j.value("payload", nlohmann::json::object());
    if (!ev.payload.is_object()) return std::nullopt;
    return ev;
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

std::string schema_header_line() {
  return nlohmann::json{{"schema_version", kTelemetrySchemaVersion}}.dump();
}

void MemorySink::append(const std::string& line) {
  std::lock_guard lock(mu_);
  lines_.push_back(line);
}

std::vector<std::string> MemorySink::lines() const {
  std::lock_guard lock(mu_);
  return lines_;
}

JsonlFileSink::JsonlFileSink(std::filesystem::path path) : path_(std::move(path)) {
  std::error_code ec;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path(), ec);
  const bool fresh = !std::filesystem::exists(path_) || std::filesystem::file_size(path_, ec) == 0;
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::telemetry_failure, "cannot open telemetry file " + path_.string());
  if (fresh) {
    out_ << schema_header_line() << '\n';
    out_.flush();
  }
}

void JsonlFileSink::append(const std::string& line) {
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw Error(ErrorCode::telemetry_failure, "telemetry write failed: " + path_.string());
}

SinkFactory per_session_files(std::filesystem::path dir) {
  return [dir = std::move(dir)](const SessionId& id) -> std::shared_ptr<TelemetrySink> {
    return std::make_shared<JsonlFileSink>(dir / (id + ".jsonl"));
  };
}

SinkFactory shared_file(std::filesystem::path path) {
  auto sink = std::make_shared<JsonlFileSink>(std::move(path));
  return [sink](const SessionId&) -> std::shared_ptr<TelemetrySink> { return sink; };
}

LogContents read_log_text(std::string_view text) {
  LogContents out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (auto ev = parse_event_line(line)) {
      out.events.push_back(std::move(*ev));
      out.lines.emplace_back(line);
      continue;
    }
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.is_object() && j.contains("schema_version") && j.size() == 1 &&
        j["schema_version"].is_number_integer()) {
      out.schema_version = j["schema_version"].get<int>();
      continue;
    }
    ++out.malformed;
  }
  return out;
}

LogContents read_log_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::not_found, "cannot read log " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_log_text(ss.str());
}

}  // namespace proactive
