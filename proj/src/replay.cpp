#include "proactive/replay.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "proactive/condition.hpp"
#include "proactive/error.hpp"
#include "proactive/json_codec.hpp"
#include "proactive/runner.hpp"
#include "proactive/session.hpp"
#include "proactive/virtual_runtime.hpp"

namespace proactive {

using nlohmann::json;

namespace {

std::string str(const json& p, const char* key) {
  auto it = p.find(key);
  return it != p.end() && it->is_string() ? it->get<std::string>() : std::string();
}

std::uint64_t num(const json& p, const char* key) {
  auto it = p.find(key);
  return it != p.end() && it->is_number_unsigned() ? it->get<std::uint64_t>() : 0;
}

/// Replies recorded in the log, answered in call-id order.
class RecordedProvider : public Provider {
 public:
  explicit RecordedProvider(std::map<std::uint64_t, std::pair<bool, ProviderResponse>> replies,
                            std::string name)
      : replies_(std::move(replies)), name_(std::move(name)) {}

  ProviderResponse complete(const PromptBundle&) override {
    std::lock_guard lock(mu_);
    const auto call = next_++;
    auto it = replies_.find(call);
    // Calls still in flight when the log ended never complete.
    if (it == replies_.end()) throw ProviderError("no recorded reply", Millis{24LL * 3600 * 1000});
    const auto& [ok, resp] = it->second;
    if (!ok) throw ProviderError(resp.raw_text, resp.latency);
    return resp;
  }
  std::string name() const override { return name_; }

 private:
  std::map<std::uint64_t, std::pair<bool, ProviderResponse>> replies_;
  std::string name_;
  std::uint64_t next_ = 1;
  std::mutex mu_;
};

ProviderResponse response_from(const json& p, const char* text_key) {
  ProviderResponse r;
  r.raw_text = str(p, text_key);
  r.latency = Millis{p.value("latency_ms", std::int64_t{0})};
  r.provider_name = str(p, "provider");
  if (auto it = p.find("provider_io"); it != p.end()) {
    r.request_body = str(*it, "request");
    r.response_body = str(*it, "response");
  }
  return r;
}

}  // namespace

std::string blank_session_id(const std::string& line) {
  static const std::string key = "\"session_id\":\"";
  auto pos = line.find(key);
  if (pos == std::string::npos) return line;
  const auto start = pos + key.size();
  auto end = start;
  while (end < line.size() && line[end] != '"') {
    if (line[end] == '\\') ++end;
    ++end;
  }
  return line.substr(0, start) + line.substr(end);
}

std::string ReplayResult::describe() const {
  if (identical()) return "replay identical (" + std::to_string(original.size()) + " events)";
  std::string out;
  for (const auto& e : input_errors) out += "input error: " + e + "\n";
  if (first_mismatch >= 0) {
    const auto i = static_cast<std::size_t>(first_mismatch);
    out += "first difference at event " + std::to_string(i) + "\n";
    out += "  original: " + (i < original.size() ? original[i] : std::string("<missing>")) + "\n";
    out += "  replayed: " + (i < replayed.size() ? replayed[i] : std::string("<missing>")) + "\n";
  }
  return out;
}

ReplayResult replay_session(const LogContents& log, const ReplayOptions& opts) {
  std::set<SessionId> ids;
  for (const auto& e : log.events) ids.insert(e.session_id);
  if (ids.size() != 1)
    throw Error(ErrorCode::validation,
                "replay needs a log of exactly one session, found " + std::to_string(ids.size()));

  std::vector<std::size_t> order(log.events.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return log.events[a].seq < log.events[b].seq;
  });
  std::vector<const TelemetryEvent*> events;
  for (auto i : order) events.push_back(&log.events[i]);
  const auto& created = *events.front();
  if (created.kind != EventKind::session_created)
    throw Error(ErrorCode::validation, "log does not start with session_created");

  SessionOptions so;
  so.condition = condition_from_json(created.payload.at("condition"));
  if (auto pid = str(created.payload, "participant_id"); !pid.empty()) so.participant_id = pid;
  if (auto tid = str(created.payload, "task_id"); !tid.empty()) so.task_id = tid;
  so.runner_available = created.payload.value("runner_available", false);

  std::map<std::uint64_t, std::pair<bool, ProviderResponse>> replies;
  std::map<std::uint64_t, Timestamp> call_done;
  std::map<std::uint64_t, Timestamp> run_done;
  std::map<std::uint64_t, RunResult> run_results;
  std::vector<Timestamp> ticks;
  std::string provider_name = "recorded";

  struct Step {
    Timestamp ts;
    VirtualRuntime::Input fn;
  };
  std::vector<Step> inputs;
  auto input = [&](Timestamp ts, VirtualRuntime::Input fn) { inputs.push_back({ts, std::move(fn)}); };

  bool seeded = false;
  for (const auto* ev : events) {
    const auto& p = ev->payload;
    const auto ts = ev->ts;
    if (p.contains("provider_io")) so.log_provider_io = true;
    switch (ev->kind) {
      case EventKind::code_update:
        if (!seeded) {
          so.initial_code = str(p, "text");
          seeded = true;
        } else if (str(p, "source") == "user") {
          input(ts, [doc = str(p, "doc_id"), text = str(p, "text")](Session& s, Timestamp t) {
            return s.apply_edit(doc, text, t);
          });
        }
        break;
      case EventKind::chat_typing:
        input(ts, [](Session& s, Timestamp t) { return s.chat_typing(t); });
        break;
      case EventKind::chat_send:
        input(ts, [c = str(p, "content")](Session& s, Timestamp t) { return s.post_chat(c, t); });
        break;
      case EventKind::suggestions_clear:
        if (str(p, "scope") == "chat")
          input(ts, [](Session& s, Timestamp t) { return s.clear_chat(t); });
        else
          input(ts, [](Session& s, Timestamp t) { return s.clear_all(t); });
        break;
      case EventKind::suggestion_expand:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) { return s.expand(id, t); });
        break;
      case EventKind::suggestion_collapse:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) { return s.collapse(id, t); });
        break;
      case EventKind::suggestion_accept:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) { return s.accept(id, t); });
        break;
      case EventKind::suggestion_delete:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) { return s.remove(id, t); });
        break;
      case EventKind::suggestion_copy:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) { return s.copy(id, t); });
        break;
      case EventKind::suggestion_request:
        input(ts, [](Session& s, Timestamp t) { return s.request_suggestions(t); });
        break;
      case EventKind::preview_request:
        input(ts, [id = str(p, "suggestion_id")](Session& s, Timestamp t) {
          return s.request_preview(id, t);
        });
        break;
      case EventKind::preview_accept: {
        std::optional<std::vector<int>> selected;
        std::optional<std::string> final_text;
        if (p.contains("final_text")) {
          final_text = str(p, "final_text");
        } else if (p.contains("selected_hunks") && p["selected_hunks"].is_array()) {
          selected = p["selected_hunks"].get<std::vector<int>>();
        }
        input(ts, [pid = str(p, "preview_id"), selected, final_text](Session& s, Timestamp t) {
          return s.accept_preview(pid, selected, final_text, t);
        });
        break;
      }
      case EventKind::preview_hide:
        input(ts, [pid = str(p, "preview_id")](Session& s, Timestamp t) {
          return s.hide_preview(pid, t);
        });
        break;
      case EventKind::task_start:
        if (str(p, "source") == "user") {
          std::optional<std::string> starter;
          if (p.contains("starter_code")) starter = str(p, "starter_code");
          input(ts, [tid = str(p, "task_id"), starter](Session& s, Timestamp t) {
            return s.start_task(tid, starter, t);
          });
        }
        break;
      case EventKind::task_submit:
        input(ts, [](Session& s, Timestamp t) { return s.submit_task(t); });
        break;
      case EventKind::run: {
        const auto run_id = num(p, "run_id");
        run_results[run_id] = run_result_from_json(p);
        run_done[run_id] = ts;
        input(Timestamp{p.value("requested_ts_ms", ts.ms)},
              [doc = str(p, "doc_id")](Session& s, Timestamp t) { return s.run_code(doc, t); });
        break;
      }
      case EventKind::suggestions_generated:
      case EventKind::parse_failure: {
        const auto call = num(p, "call_id");
        replies[call] = {true, response_from(p, "raw_text")};
        call_done[call] = ts;
        if (str(p, "origin") == "proactive" && str(p, "kind") == "standard")
          ticks.push_back(Timestamp{p.value("requested_ts_ms", ts.ms)});
        if (auto n = str(p, "provider"); !n.empty()) provider_name = n;
        break;
      }
      case EventKind::chat_response: {
        const auto call = num(p, "call_id");
        replies[call] = {true, response_from(p, "content")};
        call_done[call] = ts;
        break;
      }
      case EventKind::suggestion_preview: {
        const auto call = num(p, "call_id");
        replies[call] = {true, response_from(p, "raw_text")};
        call_done[call] = ts;
        break;
      }
      case EventKind::provider_error: {
        const auto call = num(p, "call_id");
        ProviderResponse r;
        r.raw_text = str(p, "message");
        r.latency = Millis{p.value("latency_ms", std::int64_t{0})};
        replies[call] = {false, r};
        call_done[call] = ts;
        if (str(p, "op") == "suggestions" && str(p, "origin") == "proactive" &&
            str(p, "kind") == "standard")
          ticks.push_back(Timestamp{p.value("requested_ts_ms", ts.ms)});
        break;
      }
      default:
        break;
    }
  }

  std::vector<RunResult> runs;
  for (auto& [id, r] : run_results) runs.push_back(r);
  ScriptedRunner runner(std::move(runs));

  std::shared_ptr<Provider> provider = opts.provider;
  if (!provider) provider = std::make_shared<RecordedProvider>(std::move(replies), provider_name);

  auto sink = std::make_shared<MemorySink>();
  Session session(opts.session_id, so, sink, created.ts);
  VirtualRuntime::Options ro;
  ro.tick = Millis{0};
  ro.extra_ticks = ticks;
  if (!opts.provider) {
    ro.completion_at = [&](std::uint64_t id, bool is_run) -> std::optional<Timestamp> {
      const auto& m = is_run ? run_done : call_done;
      auto it = m.find(id);
      if (it == m.end()) return std::nullopt;
      return it->second;
    };
  } else {
    ro.completion_at = [&](std::uint64_t id, bool is_run) -> std::optional<Timestamp> {
      if (!is_run) return std::nullopt;
      auto it = run_done.find(id);
      return it == run_done.end() ? std::nullopt : std::optional<Timestamp>(it->second);
    };
  }
  VirtualRuntime rt(session, *provider, &runner, ro);
  // Recorded inputs keep their log order; run requests are placed by time.
  std::stable_sort(inputs.begin(), inputs.end(),
                   [](const Step& a, const Step& b) { return a.ts < b.ts; });
  for (auto& s : inputs) rt.at(s.ts, std::move(s.fn));
  rt.run_until(events.back()->ts);

  ReplayResult out;
  for (auto i : order)
    out.original.push_back(blank_session_id(i < log.lines.size() ? log.lines[i] : serialize(log.events[i])));
  for (const auto& l : session.telemetry_lines()) out.replayed.push_back(blank_session_id(l));
  out.input_errors = rt.errors();
  const auto n = std::max(out.original.size(), out.replayed.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= out.original.size() || i >= out.replayed.size() || out.original[i] != out.replayed[i]) {
      out.first_mismatch = static_cast<long>(i);
      break;
    }
  }
  return out;
}

}  // namespace proactive
