#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "proactive/types.hpp"

namespace proactive {

enum class EventKind {
  session_created,
  code_update,
  chat_send,
  chat_typing,
  chat_response,
  suggestions_generated,
  suggestion_shown,
  suggestion_expand,
  suggestion_collapse,
  suggestion_accept,
  suggestion_delete,
  suggestions_clear,
  suggestion_copy,
  suggestion_request,
  suggestion_preview,
  preview_request,
  preview_accept,
  preview_hide,
  generation_discarded,
  parse_failure,
  provider_error,
  run,
  task_start,
  task_submit,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

inline constexpr int kTelemetrySchemaVersion = 1;

struct TelemetryEvent {
  SessionId session_id;
  std::string condition_name;
  std::optional<std::string> task_id;
  std::int64_t seq = 0;
  Timestamp ts;
  EventKind kind = EventKind::session_created;
  nlohmann::json payload = nlohmann::json::object();
};

/// One line, no trailing newline. Keys are emitted in sorted order so equal
/// events serialize to equal bytes.
std::string serialize(const TelemetryEvent& ev);

/// nullopt for anything that is not a well-formed event line (including
/// the schema header).
std::optional<TelemetryEvent> parse_event_line(std::string_view line);

/// First line of every log file: {"schema_version":1}.
std::string schema_header_line();

/// Destination for serialized events. Implementations serialize concurrent
/// appends and throw Error(telemetry_failure) when the write fails.
class TelemetrySink {
 public:
  virtual ~TelemetrySink() = default;
  virtual void append(const std::string& line) = 0;
};

class MemorySink : public TelemetrySink {
 public:
  void append(const std::string& line) override;
  std::vector<std::string> lines() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
};

/// Line-delimited file; each line is flushed before append() returns. The
/// schema header is written when the file is new or empty.
class JsonlFileSink : public TelemetrySink {
 public:
  explicit JsonlFileSink(std::filesystem::path path);
  void append(const std::string& line) override;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::mutex mu_;
  std::ofstream out_;
};

/// Creates the sink for a new session.
using SinkFactory = std::function<std::shared_ptr<TelemetrySink>(const SessionId&)>;

/// One file per session under `dir`, named <session_id>.jsonl.
SinkFactory per_session_files(std::filesystem::path dir);
/// Every session appends to the same file.
SinkFactory shared_file(std::filesystem::path path);

struct LogContents {
  std::vector<TelemetryEvent> events;
  std::vector<std::string> lines;  // raw event lines, same order as events
  int malformed = 0;
  std::optional<int> schema_version;
};

LogContents read_log_text(std::string_view text);
LogContents read_log_file(const std::filesystem::path& path);

}  // namespace proactive
