#include "proactive/session.hpp"

#include <algorithm>

#include "proactive/error.hpp"
#include "proactive/json_codec.hpp"
#include "proactive/parser.hpp"
#include "proactive/text.hpp"

namespace proactive {

using nlohmann::json;

SessionOptions options_for(const ConditionConfig& cfg, const TaskFixture* task) {
  SessionOptions o;
  o.condition = cfg;
  if (task) {
    o.task_id = task->id;
    o.initial_code = task->starter_code;
  }
  return o;
}

namespace {

SuggestionOrigin origin_of(GenerationKind kind, GenerationOrigin origin) {
  if (origin == GenerationOrigin::manual) return SuggestionOrigin::manual_request;
  return kind == GenerationKind::debug ? SuggestionOrigin::proactive_debug
                                       : SuggestionOrigin::proactive_standard;
}

std::vector<std::string> code_blocks_of(std::string_view content) {
  std::vector<std::string> out;
  for (auto& b : text::fenced_blocks(content)) out.push_back(std::move(b.body));
  return out;
}

std::string accepted_message(const SuggestionContent& s) {
  std::string out = s.summary;
  if (s.code) out += "\n\n```\n" + *s.code + "\n```";
  if (!s.explanation.empty()) {
    out += "\n";
    for (const auto& e : s.explanation) out += "\n- " + e;
  }
  return out;
}

json categories_json(const std::vector<SuggestionContent>& items) {
  json out = json::array();
  for (const auto& s : items) out.push_back(std::string(wire_name(s.category)));
  return out;
}

}  // namespace

Session::Session(SessionId id, SessionOptions opts, std::shared_ptr<TelemetrySink> sink,
                 Timestamp created)
    : id_(std::move(id)), opts_(std::move(opts)), sink_(std::move(sink)), created_(created) {
  validate(opts_.condition);
  documents_.push_back(CodeDocument{"doc1", opts_.initial_code, 1});
  task_id_ = opts_.task_id;
  timing_ = TimingState::starting_at(created);
  last_ts_ = created;

  json docs = json::array();
  for (const auto& d : documents_) docs.push_back(json{{"doc_id", d.id}});
  log(EventKind::session_created,
      json{{"condition", to_json(opts_.condition)},
           {"participant_id", opts_.participant_id ? json(*opts_.participant_id) : json(nullptr)},
           {"task_id", task_id_ ? json(*task_id_) : json(nullptr)},
           {"documents", std::move(docs)},
           {"runner_available", opts_.runner_available}},
      created);
  if (task_id_) log(EventKind::task_start, json{{"task_id", *task_id_}, {"source", "create"}}, created);
  const auto& doc = documents_.front();
  log(EventKind::code_update,
      json{{"doc_id", doc.id}, {"version", doc.version}, {"text", doc.text}, {"source", "seed"}},
      created);
}

const CodeDocument& Session::document(const DocId& id) const {
  for (const auto& d : documents_)
    if (d.id == id) return d;
  throw Error(ErrorCode::not_found, "no document '" + id + "'");
}

CodeDocument& Session::mutable_document(const DocId& id) {
  return const_cast<CodeDocument&>(std::as_const(*this).document(id));
}

std::vector<const Suggestion*> Session::current_batch() const {
  std::vector<const Suggestion*> out;
  if (current_batch_.empty()) return out;
  for (const auto& s : suggestions_)
    if (s.batch_id == current_batch_) out.push_back(&s);
  return out;
}

std::vector<const Suggestion*> Session::visible_suggestions() const {
  auto batch = current_batch();
  std::erase_if(batch, [](const Suggestion* s) { return is_terminal(s->state); });
  return batch;
}

const Suggestion& Session::suggestion(const SuggestionId& id) const {
  for (const auto& s : suggestions_)
    if (s.id == id) return s;
  throw Error(ErrorCode::not_found, "no suggestion '" + id + "'");
}

Suggestion& Session::any_suggestion(const SuggestionId& id) {
  return const_cast<Suggestion&>(std::as_const(*this).suggestion(id));
}

Suggestion& Session::live_suggestion(const SuggestionId& id) {
  auto& s = any_suggestion(id);
  if (s.batch_id != current_batch_)
    throw Error(ErrorCode::not_found, "suggestion '" + id + "' is no longer displayed");
  return s;
}

json Session::snapshot() const {
  json docs = json::array();
  for (const auto& d : documents_) docs.push_back(to_json(d));
  json chat = json::array();
  for (const auto& m : chat_) chat.push_back(to_json(m));
  json batch = json::array();
  for (const auto* s : current_batch()) batch.push_back(to_json(*s));
  json open_previews = json::array();
  for (const auto& [pid, resolved] : preview_resolved_)
    if (!resolved) open_previews.push_back(pid);
  return json{{"session_id", id_},
              {"condition", to_json(opts_.condition)},
              {"task_id", task_id_ ? json(*task_id_) : json(nullptr)},
              {"created_at_ms", created_.ms},
              {"documents", std::move(docs)},
              {"chat", std::move(chat)},
              {"batch_id", current_batch_.empty() ? json(nullptr) : json(current_batch_)},
              {"suggestions", std::move(batch)},
              {"last_run", last_run_ ? to_json(*last_run_) : json(nullptr)},
              {"mode", std::string(to_string(timing_.mode))},
              {"generation_token", timing_.generation_token.value},
              {"open_previews", std::move(open_previews)},
              {"read_only", read_only_}};
}

void Session::announce_state() { push("notice", json{{"type", "state"}, {"session", snapshot()}}); }

void Session::begin(Timestamp ts) {
  if (read_only_)
    throw Error(ErrorCode::telemetry_failure,
                "session " + id_ + " is read-only after a telemetry write failure");
  if (ts < last_ts_)
    throw Error(ErrorCode::contract_violation,
                "input at " + std::to_string(ts.ms) + " ms precedes " + std::to_string(last_ts_.ms) +
                    " ms");
  last_ts_ = ts;
}

void Session::log(EventKind kind, json payload, Timestamp ts) {
  TelemetryEvent ev;
  ev.session_id = id_;
  ev.condition_name = opts_.condition.name;
  ev.task_id = task_id_;
  ev.seq = next_seq_++;
  ev.ts = ts;
  ev.kind = kind;
  ev.payload = std::move(payload);
  auto line = serialize(ev);
  lines_.push_back(line);
  if (!sink_) return;
  try {
    sink_->append(line);
  } catch (const std::exception& e) {
    read_only_ = true;
    throw Error(ErrorCode::telemetry_failure, std::string("telemetry write failed: ") + e.what());
  }
}

void Session::push(std::string frame_kind, json payload) {
  PushFrame f{next_frame_seq_++, std::move(frame_kind), std::move(payload)};
  if (listener_) listener_(f);
}

Decision Session::feed(const ActivityEvent& ev) {
  auto step = on_event(timing_, opts_.condition, ev);
  timing_ = std::move(step.state);
  return step.decision;
}

Effects Session::act_on(const Decision& d, Timestamp ts) {
  if (d.kind != DecisionKind::start_generation) return {};
  generations_[d.token.value] = InFlightGeneration{d.generation, d.origin, ts};
  PromptContext ctx{chat_, primary_document().text};
  GenerateSuggestions g;
  g.token = d.token;
  g.kind = d.generation;
  g.origin = d.origin;
  g.call_id = next_call_++;
  if (d.generation == GenerationKind::debug) {
    g.bundle = build_debug_prompt(ctx, opts_.condition, *last_run_);
  } else {
    g.bundle = build_standard_prompt(ctx, opts_.condition);
  }
  return {std::move(g)};
}

void Session::attach_io(json& payload, const ProviderResponse& r) const {
  if (!opts_.log_provider_io) return;
  if (r.request_body.empty() && r.response_body.empty()) return;
  payload["provider_io"] = json{{"request", r.request_body}, {"response", r.response_body}};
}

void Session::write_document(CodeDocument& doc, std::string text, const char* source, Timestamp ts) {
  doc.text = std::move(text);
  ++doc.version;
  log(EventKind::code_update,
      json{{"doc_id", doc.id}, {"version", doc.version}, {"text", doc.text}, {"source", source}}, ts);
  feed(ActivityEvent::typing(ts));
}

std::vector<SuggestionId> Session::delete_live(Timestamp) {
  std::vector<SuggestionId> ids;
  for (auto& s : suggestions_) {
    if (s.batch_id == current_batch_ && !is_terminal(s.state)) {
      s.state = SuggestionState::deleted;
      ids.push_back(s.id);
    }
  }
  return ids;
}

Effects Session::apply_edit(const DocId& doc_id, std::string text, Timestamp ts) {
  begin(ts);
  auto& doc = mutable_document(doc_id);
  write_document(doc, std::move(text), "user", ts);
  return {};
}

Effects Session::chat_typing(Timestamp ts) {
  begin(ts);
  log(EventKind::chat_typing, json::object(), ts);
  feed(ActivityEvent::chat_typing(ts));
  return {};
}

Effects Session::post_chat(std::string content, Timestamp ts) {
  begin(ts);
  if (text::trim(content).empty()) throw Error(ErrorCode::validation, "chat message is empty");
  ChatMessage msg{ChatRole::user, content, code_blocks_of(content), ts, std::nullopt};
  chat_.push_back(msg);
  const auto call = next_call_++;
  pending_chats_[call] = PendingChat{ts};
  log(EventKind::chat_send, json{{"content", content}, {"call_id", call}}, ts);
  feed(ActivityEvent::chat_send(ts));
  push("chat_message", json{{"index", chat_.size() - 1}, {"message", to_json(msg)}});
  PromptContext ctx{chat_, primary_document().text};
  return {RequestChatReply{call, build_chat_prompt(ctx, opts_.condition, opts_.condition.proactive_enabled)}};
}

Effects Session::clear_chat(Timestamp ts) {
  begin(ts);
  auto ids = delete_live(ts);
  chat_.clear();
  log(EventKind::suggestions_clear, json{{"scope", "chat"}, {"suggestion_ids", ids}}, ts);
  push("notice", json{{"type", "chat_cleared"}, {"suggestion_ids", ids}});
  return {};
}

Effects Session::expand(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  auto& s = live_suggestion(id);
  if (s.state == SuggestionState::expanded) return {};
  if (s.state != SuggestionState::collapsed)
    throw Error(ErrorCode::bad_state, "suggestion '" + id + "' is " + std::string(to_string(s.state)));
  s.state = SuggestionState::expanded;
  log(EventKind::suggestion_expand,
      json{{"suggestion_id", id}, {"category", std::string(wire_name(s.content.category))}}, ts);
  feed(ActivityEvent::interaction(ts));
  return {};
}

Effects Session::collapse(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  auto& s = live_suggestion(id);
  if (s.state == SuggestionState::collapsed) return {};
  if (s.state != SuggestionState::expanded)
    throw Error(ErrorCode::bad_state, "suggestion '" + id + "' is " + std::string(to_string(s.state)));
  s.state = SuggestionState::collapsed;
  log(EventKind::suggestion_collapse,
      json{{"suggestion_id", id}, {"category", std::string(wire_name(s.content.category))}}, ts);
  return {};
}

Effects Session::accept(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  auto& s = live_suggestion(id);
  if (s.state != SuggestionState::expanded)
    throw Error(ErrorCode::bad_state, "only an expanded suggestion can be accepted; '" + id +
                                          "' is " + std::string(to_string(s.state)));
  s.state = SuggestionState::accepted;
  ChatMessage msg{ChatRole::accepted_suggestion, accepted_message(s.content), {}, ts, s.id};
  if (s.content.code) msg.code_blocks.push_back(*s.content.code);
  chat_.push_back(msg);
  log(EventKind::suggestion_accept,
      json{{"suggestion_id", id},
           {"category", std::string(wire_name(s.content.category))},
           {"batch_id", s.batch_id},
           {"has_code", s.content.code.has_value()}},
      ts);
  feed(ActivityEvent::interaction(ts));
  push("chat_message", json{{"index", chat_.size() - 1}, {"message", to_json(msg)}});
  push("notice", json{{"type", "suggestion_state"}, {"suggestion_id", id}, {"state", "accepted"}});
  return {};
}

Effects Session::remove(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  auto& s = live_suggestion(id);
  if (s.state == SuggestionState::deleted) return {};
  if (s.state != SuggestionState::expanded)
    throw Error(ErrorCode::bad_state, "only an expanded suggestion can be deleted; '" + id +
                                          "' is " + std::string(to_string(s.state)));
  s.state = SuggestionState::deleted;
  log(EventKind::suggestion_delete,
      json{{"suggestion_id", id},
           {"category", std::string(wire_name(s.content.category))},
           {"batch_id", s.batch_id}},
      ts);
  feed(ActivityEvent::interaction(ts));
  return {};
}

Effects Session::clear_all(Timestamp ts) {
  begin(ts);
  auto ids = delete_live(ts);
  log(EventKind::suggestions_clear, json{{"scope", "suggestions"}, {"suggestion_ids", ids}}, ts);
  feed(ActivityEvent::interaction(ts));
  push("notice", json{{"type", "suggestions_cleared"}, {"suggestion_ids", ids}});
  return {};
}

Effects Session::copy(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  auto& s = any_suggestion(id);
  if (s.state == SuggestionState::deleted)
    throw Error(ErrorCode::bad_state, "suggestion '" + id + "' was deleted");
  log(EventKind::suggestion_copy,
      json{{"suggestion_id", id},
           {"category", std::string(wire_name(s.content.category))},
           {"batch_id", s.batch_id}},
      ts);
  return {};
}

Effects Session::request_suggestions(Timestamp ts) {
  begin(ts);
  auto step = on_manual_request(timing_, opts_.condition, ts);
  timing_ = std::move(step.state);
  log(EventKind::suggestion_request, json{{"token", step.decision.token.value}}, ts);
  return act_on(step.decision, ts);
}

Effects Session::request_preview(const SuggestionId& id, Timestamp ts) {
  begin(ts);
  if (!opts_.condition.preview_enabled)
    throw Error(ErrorCode::unsupported_in_condition,
                "preview is not available in condition '" + opts_.condition.name + "'");
  const auto& s = any_suggestion(id);
  if (s.state == SuggestionState::deleted)
    throw Error(ErrorCode::bad_state, "suggestion '" + id + "' was deleted");
  if (!s.content.code && s.content.explanation.empty())
    throw Error(ErrorCode::validation, "suggestion '" + id + "' has nothing to integrate");
  const auto& doc = primary_document();
  const auto call = next_call_++;
  const PreviewId pid = "p" + std::to_string(next_preview_++);
  pending_previews_[call] = PendingPreview{pid, id, doc.id, doc.text, ts};
  log(EventKind::preview_request,
      json{{"preview_id", pid}, {"suggestion_id", id}, {"doc_id", doc.id}, {"call_id", call}}, ts);
  feed(ActivityEvent::interaction(ts));
  return {RequestPreview{call, pid, build_preview_prompt(doc.text, s.content)}};
}

Effects Session::accept_preview(const PreviewId& pid, std::optional<std::vector<int>> selected,
                                std::optional<std::string> final_text, Timestamp ts) {
  begin(ts);
  auto it = previews_.find(pid);
  if (it == previews_.end()) throw Error(ErrorCode::not_found, "no preview '" + pid + "'");
  if (preview_resolved_[pid])
    throw Error(ErrorCode::bad_state, "preview '" + pid + "' was already resolved");
  const auto& preview = it->second;
  auto& doc = mutable_document(preview.doc_id);

  std::string merged;
  json selected_json = nullptr;
  int count = 0;
  if (final_text) {
    if (text::sha256_hex(doc.text) != preview.original_hash)
      throw Error(ErrorCode::stale_preview,
                  "the code changed since preview " + pid + "; preview again");
    merged = *final_text;
    count = static_cast<int>(preview.hunks.size());
  } else {
    std::vector<int> idx;
    if (selected) {
      idx = *selected;
    } else {
      for (int i = 0; i < static_cast<int>(preview.hunks.size()); ++i) idx.push_back(i);
    }
    merged = apply_selected(preview, doc.text, idx);
    std::sort(idx.begin(), idx.end());
    count = static_cast<int>(idx.size());
    selected_json = idx;
  }
  preview_resolved_[pid] = true;
  json payload{{"preview_id", pid},
               {"suggestion_id", preview.suggestion_id},
               {"selected_hunks", selected_json},
               {"hunk_count", count},
               {"total_hunks", preview.hunks.size()},
               {"final_text_override", final_text.has_value()}};
  if (final_text) payload["final_text"] = *final_text;
  log(EventKind::preview_accept, std::move(payload), ts);
  write_document(doc, std::move(merged), "preview", ts);
  push("notice", json{{"type", "document_updated"}, {"document", to_json(doc)}});
  return {};
}

Effects Session::hide_preview(const PreviewId& pid, Timestamp ts) {
  begin(ts);
  auto it = previews_.find(pid);
  if (it == previews_.end()) throw Error(ErrorCode::not_found, "no preview '" + pid + "'");
  if (preview_resolved_[pid])
    throw Error(ErrorCode::bad_state, "preview '" + pid + "' was already resolved");
  preview_resolved_[pid] = true;
  log(EventKind::preview_hide,
      json{{"preview_id", pid}, {"suggestion_id", it->second.suggestion_id}}, ts);
  feed(ActivityEvent::interaction(ts));
  return {};
}

Effects Session::run_code(const DocId& doc_id, Timestamp ts) {
  begin(ts);
  if (!opts_.runner_available) throw Error(ErrorCode::runner_unavailable, "runner not configured");
  const auto& doc = document(doc_id);
  const auto run_id = next_run_++;
  pending_runs_[run_id] = PendingRun{doc.id, ts};
  return {RunProgram{run_id, doc.id, doc.text}};
}

Effects Session::start_task(std::string task_id, std::optional<std::string> starter_code,
                            Timestamp ts) {
  begin(ts);
  if (task_id.empty()) throw Error(ErrorCode::validation, "task_id is empty");
  task_id_ = task_id;
  json payload{{"task_id", task_id}, {"source", "user"}};
  if (starter_code) payload["starter_code"] = *starter_code;
  log(EventKind::task_start, std::move(payload), ts);
  if (starter_code) {
    auto& doc = documents_.front();
    write_document(doc, std::move(*starter_code), "task", ts);
    push("notice", json{{"type", "document_updated"}, {"document", to_json(doc)}});
  }
  return {};
}

Effects Session::submit_task(Timestamp ts) {
  begin(ts);
  if (!task_id_) throw Error(ErrorCode::bad_state, "no task in progress");
  const auto& doc = primary_document();
  log(EventKind::task_submit,
      json{{"task_id", *task_id_}, {"doc_id", doc.id}, {"version", doc.version}}, ts);
  return {};
}

Effects Session::tick(Timestamp ts) {
  if (read_only_) return {};
  begin(ts);
  return act_on(feed(ActivityEvent::tick(ts)), ts);
}

Effects Session::on_suggestions(GenerationToken token, std::uint64_t call_id,
                                ProviderOutcome outcome, Timestamp ts) {
  begin(ts);
  InFlightGeneration info{GenerationKind::standard, GenerationOrigin::proactive, ts};
  if (auto it = generations_.find(token.value); it != generations_.end()) {
    info = it->second;
    generations_.erase(it);
  }
  const auto kind_s = std::string(to_string(info.kind));
  const auto origin_s = std::string(to_string(info.origin));

  if (!outcome.response) {
    log(EventKind::provider_error,
        json{{"op", "suggestions"},
             {"call_id", call_id},
             {"token", token.value},
             {"kind", kind_s},
             {"origin", origin_s},
             {"message", outcome.error},
             {"requested_ts_ms", info.requested.ms},
             {"latency_ms", outcome.error_latency.count()}},
        ts);
    feed(ActivityEvent::failed(ts, token));
    return {};
  }

  const auto& resp = *outcome.response;
  const std::span<const Category> allowed =
      info.kind == GenerationKind::debug ? std::span<const Category>(kDebugCategories)
                                         : std::span<const Category>(kAllCategories);
  auto parsed = parse_suggestions(resp.raw_text, opts_.condition.suggestions_per_batch, allowed);
  if (parsed.failed()) {
    json payload{{"call_id", call_id},
                 {"token", token.value},
                 {"kind", kind_s},
                 {"origin", origin_s},
                 {"raw_text", resp.raw_text},
                 {"warnings", parsed.warnings},
                 {"latency_ms", resp.latency.count()},
                 {"provider", resp.provider_name},
                 {"requested_ts_ms", info.requested.ms}};
    attach_io(payload, resp);
    log(EventKind::parse_failure, std::move(payload), ts);
    feed(ActivityEvent::failed(ts, token));
    return {};
  }

  {
    json payload{{"call_id", call_id},
                 {"token", token.value},
                 {"kind", kind_s},
                 {"origin", origin_s},
                 {"latency_ms", resp.latency.count()},
                 {"provider", resp.provider_name},
                 {"categories", categories_json(parsed.suggestions)},
                 {"raw_text", resp.raw_text},
                 {"warnings", parsed.warnings},
                 {"format", parsed.format},
                 {"requested_ts_ms", info.requested.ms}};
    attach_io(payload, resp);
    log(EventKind::suggestions_generated, std::move(payload), ts);
  }

  const bool stale = token != timing_.generation_token;
  const auto d = feed(ActivityEvent::completed(ts, token));
  if (d.kind != DecisionKind::display_batch) {
    log(EventKind::generation_discarded,
        json{{"call_id", call_id},
             {"token", token.value},
             {"kind", kind_s},
             {"reason", stale ? "stale_token" : "busy"}},
        ts);
    return {};
  }

  json replaced = json::array();
  for (const auto* s : visible_suggestions()) replaced.push_back(s->id);
  current_batch_ = "b" + std::to_string(next_batch_++);
  json shown = json::array();
  json frame_items = json::array();
  for (auto& content : parsed.suggestions) {
    Suggestion s;
    s.id = "s" + std::to_string(next_suggestion_++);
    s.batch_id = current_batch_;
    s.content = std::move(content);
    s.origin = origin_of(info.kind, info.origin);
    shown.push_back(json{{"suggestion_id", s.id},
                         {"category", std::string(wire_name(s.content.category))},
                         {"summary", s.content.summary},
                         {"has_code", s.content.code.has_value()}});
    frame_items.push_back(to_json(s));
    suggestions_.push_back(std::move(s));
  }
  log(EventKind::suggestion_shown,
      json{{"batch_id", current_batch_},
           {"token", token.value},
           {"kind", kind_s},
           {"origin", origin_s},
           {"suggestions", std::move(shown)},
           {"replaced", std::move(replaced)}},
      ts);
  push("suggestions_batch", json{{"batch_id", current_batch_}, {"suggestions", std::move(frame_items)}});
  return {};
}

Effects Session::on_chat_reply(std::uint64_t call_id, ProviderOutcome outcome, Timestamp ts) {
  begin(ts);
  Timestamp requested = ts;
  if (auto it = pending_chats_.find(call_id); it != pending_chats_.end()) {
    requested = it->second.requested;
    pending_chats_.erase(it);
  }
  ChatMessage msg;
  msg.role = ChatRole::assistant;
  msg.ts = ts;
  if (outcome.response) {
    const auto& resp = *outcome.response;
    msg.content = resp.raw_text;
    msg.code_blocks = code_blocks_of(resp.raw_text);
    chat_.push_back(msg);
    json payload{{"call_id", call_id},
                 {"content", resp.raw_text},
                 {"latency_ms", resp.latency.count()},
                 {"provider", resp.provider_name},
                 {"requested_ts_ms", requested.ms}};
    attach_io(payload, resp);
    log(EventKind::chat_response, std::move(payload), ts);
  } else {
    msg.content = "The assistant could not respond: " + outcome.error;
    chat_.push_back(msg);
    log(EventKind::provider_error,
        json{{"op", "chat"},
             {"call_id", call_id},
             {"message", outcome.error},
             {"requested_ts_ms", requested.ms},
             {"latency_ms", outcome.error_latency.count()}},
        ts);
  }
  push("chat_message", json{{"index", chat_.size() - 1}, {"message", to_json(msg)}});
  if (pending_chats_.empty()) feed(ActivityEvent::chat_response(ts));
  return {};
}

Effects Session::on_preview(std::uint64_t call_id, ProviderOutcome outcome, Timestamp ts) {
  begin(ts);
  auto it = pending_previews_.find(call_id);
  if (it == pending_previews_.end()) return {};
  const PendingPreview pending = it->second;
  pending_previews_.erase(it);

  json payload{{"call_id", call_id},
               {"preview_id", pending.preview_id},
               {"suggestion_id", pending.suggestion_id},
               {"doc_id", pending.doc_id},
               {"requested_ts_ms", pending.requested.ms}};
  if (!outcome.response) {
    payload["op"] = "preview";
    payload["message"] = outcome.error;
    payload["latency_ms"] = outcome.error_latency.count();
    log(EventKind::provider_error, std::move(payload), ts);
    push("notice", json{{"type", "preview_error"},
                        {"preview_id", pending.preview_id},
                        {"suggestion_id", pending.suggestion_id},
                        {"message", outcome.error}});
    return {};
  }

  const auto& resp = *outcome.response;
  payload["raw_text"] = resp.raw_text;
  payload["latency_ms"] = resp.latency.count();
  payload["provider"] = resp.provider_name;
  attach_io(payload, resp);
  auto code = extract_code_block(resp.raw_text);
  if (!code) {
    payload["status"] = "no_code_block";
    payload["hunk_count"] = 0;
    log(EventKind::suggestion_preview, std::move(payload), ts);
    push("notice", json{{"type", "preview_error"},
                        {"preview_id", pending.preview_id},
                        {"suggestion_id", pending.suggestion_id},
                        {"message", "the assistant returned no code to integrate"}});
    return {};
  }

  PreviewResult preview;
  preview.preview_id = pending.preview_id;
  preview.suggestion_id = pending.suggestion_id;
  preview.doc_id = pending.doc_id;
  preview.original_text = pending.original_text;
  preview.proposed_text = std::move(*code);
  // Fenced blocks drop the final newline; keep the file's convention.
  if (!preview.original_text.empty() && preview.original_text.back() == '\n' &&
      (preview.proposed_text.empty() || preview.proposed_text.back() != '\n'))
    preview.proposed_text.push_back('\n');
  preview.original_hash = text::sha256_hex(preview.original_text);
  preview.hunks = compute_diff(preview.original_text, preview.proposed_text);
  preview.provider_latency = resp.latency;

  payload["status"] = "ok";
  payload["hunk_count"] = preview.hunks.size();
  log(EventKind::suggestion_preview, std::move(payload), ts);
  preview_resolved_[preview.preview_id] = false;
  auto wire = to_json(preview);
  previews_[preview.preview_id] = std::move(preview);
  push("preview_ready", std::move(wire));
  return {};
}

Effects Session::on_run_result(std::uint64_t run_id, RunResult result, Timestamp ts) {
  begin(ts);
  PendingRun pending{primary_document().id, ts};
  if (auto it = pending_runs_.find(run_id); it != pending_runs_.end()) {
    pending = it->second;
    pending_runs_.erase(it);
  }
  last_run_ = result;
  json payload = to_json(result);
  payload["run_id"] = run_id;
  payload["doc_id"] = pending.doc_id;
  payload["requested_ts_ms"] = pending.requested.ms;
  log(EventKind::run, payload, ts);
  push("run_output", std::move(payload));
  return act_on(feed(ActivityEvent::run(ts, result.is_error)), ts);
}

}  // namespace proactive
