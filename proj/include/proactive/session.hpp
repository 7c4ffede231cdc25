#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "proactive/condition.hpp"
#include "proactive/diff.hpp"
#include "proactive/prompt.hpp"
#include "proactive/provider.hpp"
#include "proactive/records.hpp"
#include "proactive/suggestion.hpp"
#include "proactive/tasks.hpp"
#include "proactive/telemetry.hpp"
#include "proactive/timing_policy.hpp"

namespace proactive {

// Work a session hands to its runtime. Each completes by calling the
// matching Session::on_* method from the session's serial event stream.

struct GenerateSuggestions {
  GenerationToken token;
  GenerationKind kind = GenerationKind::standard;
  GenerationOrigin origin = GenerationOrigin::proactive;
  std::uint64_t call_id = 0;
  PromptBundle bundle;
};

struct RequestChatReply {
  std::uint64_t call_id = 0;
  PromptBundle bundle;
};

struct RequestPreview {
  std::uint64_t call_id = 0;
  PreviewId preview_id;
  PromptBundle bundle;
};

struct RunProgram {
  std::uint64_t run_id = 0;
  DocId doc_id;
  std::string code;
};

using Effect = std::variant<GenerateSuggestions, RequestChatReply, RequestPreview, RunProgram>;
using Effects = std::vector<Effect>;

/// Result of a provider call as it re-enters the session.
struct ProviderOutcome {
  std::optional<ProviderResponse> response;
  std::string error;
  /// Time until the failure; ignored on success.
  Millis error_latency{0};

  static ProviderOutcome ok(ProviderResponse r) { return {std::move(r), {}, {}}; }
  static ProviderOutcome failed(std::string why, Millis latency = Millis{0}) {
    return {std::nullopt, std::move(why), latency};
  }
};

/// One server-push message. `seq` is per session and gapless.
struct PushFrame {
  std::int64_t seq = 0;
  std::string frame_kind;  // suggestions_batch | chat_message | preview_ready | run_output | notice
  nlohmann::json payload;
};

using FrameListener = std::function<void(const PushFrame&)>;

struct SessionOptions {
  ConditionConfig condition;
  std::optional<std::string> task_id;
  /// Initial text of the single document.
  std::string initial_code;
  std::optional<std::string> participant_id;
  bool runner_available = false;
  /// Copy provider request/response bodies into telemetry.
  bool log_provider_io = false;
};

/// Options for a session that starts on a study task.
SessionOptions options_for(const ConditionConfig& cfg, const TaskFixture* task);

/// All state of one coding session. Not thread-safe: the owner feeds every
/// input and completion through one serial stream with non-decreasing
/// timestamps. Each mutating call logs its telemetry before returning and
/// returns the asynchronous work it started.
class Session {
 public:
  Session(SessionId id, SessionOptions opts, std::shared_ptr<TelemetrySink> sink, Timestamp created);

  const SessionId& id() const { return id_; }
  const ConditionConfig& condition() const { return opts_.condition; }
  const std::optional<std::string>& task_id() const { return task_id_; }
  const std::vector<CodeDocument>& documents() const { return documents_; }
  /// Throws Error(not_found).
  const CodeDocument& document(const DocId& id) const;
  const CodeDocument& primary_document() const { return documents_.front(); }
  const std::vector<ChatMessage>& chat() const { return chat_; }
  /// Every suggestion ever displayed, in display order.
  const std::vector<Suggestion>& suggestions() const { return suggestions_; }
  /// Members of the current batch that are neither accepted nor deleted.
  std::vector<const Suggestion*> visible_suggestions() const;
  /// Members of the current batch in any state.
  std::vector<const Suggestion*> current_batch() const;
  /// Throws Error(not_found).
  const Suggestion& suggestion(const SuggestionId& id) const;
  const std::optional<RunResult>& last_run() const { return last_run_; }
  const TimingState& timing() const { return timing_; }
  const std::map<PreviewId, PreviewResult>& previews() const { return previews_; }
  const std::vector<std::string>& telemetry_lines() const { return lines_; }
  bool read_only() const { return read_only_; }
  Timestamp created_at() const { return created_; }

  /// Descriptor returned by the API and carried in reconnect notices.
  nlohmann::json snapshot() const;

  void set_frame_listener(FrameListener listener) { listener_ = std::move(listener); }
  /// Pushes a `notice` frame holding snapshot(). Not a state change, so
  /// nothing is logged.
  void announce_state();

  // User inputs.
  Effects apply_edit(const DocId& doc, std::string text, Timestamp ts);
  Effects chat_typing(Timestamp ts);
  /// Rejects empty content with Error(validation).
  Effects post_chat(std::string content, Timestamp ts);
  /// Empties the chat history and deletes live suggestions.
  Effects clear_chat(Timestamp ts);
  Effects expand(const SuggestionId& id, Timestamp ts);
  Effects collapse(const SuggestionId& id, Timestamp ts);
  Effects accept(const SuggestionId& id, Timestamp ts);
  Effects remove(const SuggestionId& id, Timestamp ts);
  Effects clear_all(Timestamp ts);
  Effects copy(const SuggestionId& id, Timestamp ts);
  Effects request_suggestions(Timestamp ts);
  Effects request_preview(const SuggestionId& id, Timestamp ts);
  /// `selected` indexes preview.hunks (all when absent). `final_text`
  /// replaces the merged result wholesale.
  Effects accept_preview(const PreviewId& id, std::optional<std::vector<int>> selected,
                         std::optional<std::string> final_text, Timestamp ts);
  Effects hide_preview(const PreviewId& id, Timestamp ts);
  Effects run_code(const DocId& doc, Timestamp ts);
  Effects start_task(std::string task_id, std::optional<std::string> starter_code, Timestamp ts);
  Effects submit_task(Timestamp ts);
  Effects tick(Timestamp ts);

  // Completions.
  Effects on_suggestions(GenerationToken token, std::uint64_t call_id, ProviderOutcome outcome,
                         Timestamp ts);
  Effects on_chat_reply(std::uint64_t call_id, ProviderOutcome outcome, Timestamp ts);
  Effects on_preview(std::uint64_t call_id, ProviderOutcome outcome, Timestamp ts);
  Effects on_run_result(std::uint64_t run_id, RunResult result, Timestamp ts);

 private:
  struct InFlightGeneration {
    GenerationKind kind;
    GenerationOrigin origin;
    Timestamp requested;
  };
  struct PendingPreview {
    PreviewId preview_id;
    SuggestionId suggestion_id;
    DocId doc_id;
    std::string original_text;
    Timestamp requested;
  };
  struct PendingRun {
    DocId doc_id;
    Timestamp requested;
  };
  struct PendingChat {
    Timestamp requested;
  };

  // Rejects input on a read-only session or with a timestamp that goes back.
  void begin(Timestamp ts);
  void log(EventKind kind, nlohmann::json payload, Timestamp ts);
  void push(std::string frame_kind, nlohmann::json payload);
  Decision feed(const ActivityEvent& ev);
  Effects act_on(const Decision& d, Timestamp ts);
  CodeDocument& mutable_document(const DocId& id);
  Suggestion& live_suggestion(const SuggestionId& id);
  Suggestion& any_suggestion(const SuggestionId& id);
  void write_document(CodeDocument& doc, std::string text, const char* source, Timestamp ts);
  void attach_io(nlohmann::json& payload, const ProviderResponse& r) const;
  std::vector<SuggestionId> delete_live(Timestamp ts);

  SessionId id_;
  SessionOptions opts_;
  std::shared_ptr<TelemetrySink> sink_;
  Timestamp created_;
  Timestamp last_ts_;
  FrameListener listener_;

  std::vector<CodeDocument> documents_;
  std::vector<ChatMessage> chat_;
  std::vector<Suggestion> suggestions_;
  BatchId current_batch_;
  std::optional<RunResult> last_run_;
  std::optional<std::string> task_id_;
  TimingState timing_;

  std::map<std::uint64_t, InFlightGeneration> generations_;  // by token
  std::map<std::uint64_t, PendingPreview> pending_previews_;   // by call id
  std::map<std::uint64_t, PendingRun> pending_runs_;
  std::map<std::uint64_t, PendingChat> pending_chats_;
  std::map<PreviewId, PreviewResult> previews_;
  std::map<PreviewId, bool> preview_resolved_;

  std::int64_t next_seq_ = 0;
  std::int64_t next_frame_seq_ = 0;
  std::uint64_t next_call_ = 1;
  std::uint64_t next_run_ = 1;
  int next_suggestion_ = 1;
  int next_batch_ = 1;
  int next_preview_ = 1;
  bool read_only_ = false;
  std::vector<std::string> lines_;
};

}  // namespace proactive
