#include "proactive/audit.hpp"

#include <algorithm>
#include <set>

namespace proactive {

namespace {

using nlohmann::json;

std::string str(const json& p, const char* key) {
  auto it = p.find(key);
  return it != p.end() && it->is_string() ? it->get<std::string>() : std::string();
}

std::uint64_t num(const json& p, const char* key) {
  auto it = p.find(key);
  return it != p.end() && it->is_number_unsigned() ? it->get<std::uint64_t>() : 0;
}

}  // namespace

AuditReport audit_session(const std::vector<TelemetryEvent>& events) {
  AuditReport r;
  auto& st = r.state;
  auto problem = [&](const TelemetryEvent& e, const std::string& what) {
    r.problems.push_back("seq " + std::to_string(e.seq) + " (" + std::string(to_string(e.kind)) +
                         "): " + what);
  };
  if (events.empty()) {
    r.problems.push_back("no events");
    return r;
  }
  if (events.front().kind != EventKind::session_created)
    r.problems.push_back("first event is not session_created");

  std::set<std::uint64_t> open_generations;  // tokens generated but not yet shown/discarded
  std::set<std::uint64_t> open_chats;
  std::map<std::uint64_t, PreviewId> open_preview_calls;
  bool expect_preview_update = false;

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    const auto& p = e.payload;
    if (e.seq != static_cast<std::int64_t>(i)) problem(e, "seq gap, expected " + std::to_string(i));
    if (i > 0 && e.ts < events[i - 1].ts) problem(e, "timestamp goes backwards");
    if (e.session_id != events.front().session_id) problem(e, "session id changes");
    if (e.condition_name != events.front().condition_name) problem(e, "condition changes");
    if (expect_preview_update &&
        !(e.kind == EventKind::code_update && str(p, "source") == "preview"))
      problem(e, "preview_accept not followed by its code_update");
    expect_preview_update = false;

    switch (e.kind) {
      case EventKind::session_created:
        if (i != 0) problem(e, "repeated session_created");
        if (p.contains("task_id") && p["task_id"].is_string()) st.task_id = str(p, "task_id");
        break;

      case EventKind::code_update: {
        const auto doc = str(p, "doc_id");
        const int version = p.value("version", 0);
        auto& d = st.documents[doc];
        if (version != d.version + 1)
          problem(e, "document " + doc + " version " + std::to_string(version) + " after " +
                         std::to_string(d.version));
        d.version = version;
        d.text = str(p, "text");
        break;
      }

      case EventKind::chat_send:
        ++st.chat_messages;
        open_chats.insert(num(p, "call_id"));
        break;

      case EventKind::chat_response:
        ++st.chat_messages;
        if (!open_chats.erase(num(p, "call_id"))) problem(e, "reply to an unknown chat call");
        break;

      case EventKind::suggestions_generated:
        if (!open_generations.insert(num(p, "token")).second)
          problem(e, "token generated twice");
        break;

      case EventKind::suggestion_shown: {
        if (!open_generations.erase(num(p, "token"))) problem(e, "shown without generation");
        st.current_batch = str(p, "batch_id");
        for (const auto& s : p.value("suggestions", json::array())) {
          const auto id = str(s, "suggestion_id");
          if (!st.suggestions.emplace(id, SuggestionState::collapsed).second)
            problem(e, "suggestion " + id + " shown twice");
        }
        break;
      }

      case EventKind::generation_discarded:
        if (!open_generations.erase(num(p, "token"))) problem(e, "discard without generation");
        break;

      case EventKind::parse_failure:
        break;

      case EventKind::suggestion_expand:
      case EventKind::suggestion_collapse:
      case EventKind::suggestion_accept:
      case EventKind::suggestion_delete:
      case EventKind::suggestion_copy: {
        const auto id = str(p, "suggestion_id");
        auto it = st.suggestions.find(id);
        if (it == st.suggestions.end()) {
          problem(e, "unknown suggestion " + id);
          break;
        }
        auto& state = it->second;
        if (e.kind == EventKind::suggestion_copy) {
          if (state == SuggestionState::deleted) problem(e, "copy of a deleted suggestion");
          break;
        }
        const auto want = e.kind == EventKind::suggestion_expand ? SuggestionState::collapsed
                                                                 : SuggestionState::expanded;
        if (state != want)
          problem(e, id + " is " + std::string(to_string(state)) + ", expected " +
                         std::string(to_string(want)));
        if (e.kind == EventKind::suggestion_expand) state = SuggestionState::expanded;
        if (e.kind == EventKind::suggestion_collapse) state = SuggestionState::collapsed;
        if (e.kind == EventKind::suggestion_delete) state = SuggestionState::deleted;
        if (e.kind == EventKind::suggestion_accept) {
          state = SuggestionState::accepted;
          ++st.chat_messages;
        }
        break;
      }

      case EventKind::suggestions_clear:
        for (const auto& id : p.value("suggestion_ids", json::array())) {
          auto it = st.suggestions.find(id.get<std::string>());
          if (it == st.suggestions.end() || is_terminal(it->second))
            problem(e, "clear of a suggestion that was not live");
          else
            it->second = SuggestionState::deleted;
        }
        if (str(p, "scope") == "chat") st.chat_messages = 0;
        break;

      case EventKind::suggestion_request:
        break;

      case EventKind::preview_request: {
        const auto pid = str(p, "preview_id");
        if (st.previews.count(pid)) problem(e, "preview id reused");
        st.previews[pid] = "requested";
        open_preview_calls[num(p, "call_id")] = pid;
        break;
      }

      case EventKind::suggestion_preview: {
        auto it = open_preview_calls.find(num(p, "call_id"));
        if (it == open_preview_calls.end()) {
          problem(e, "preview result without request");
          break;
        }
        st.previews[it->second] = str(p, "status") == "ok" ? "ready" : "failed";
        open_preview_calls.erase(it);
        break;
      }

      case EventKind::preview_accept:
      case EventKind::preview_hide: {
        const auto pid = str(p, "preview_id");
        auto it = st.previews.find(pid);
        if (it == st.previews.end() || it->second != "ready") {
          problem(e, "preview " + pid + " is not open");
          break;
        }
        it->second = e.kind == EventKind::preview_accept ? "accepted" : "hidden";
        expect_preview_update = e.kind == EventKind::preview_accept;
        break;
      }

      case EventKind::provider_error: {
        const auto op = str(p, "op");
        if (op == "chat") {
          ++st.chat_messages;
          if (!open_chats.erase(num(p, "call_id"))) problem(e, "error for an unknown chat call");
        } else if (op == "preview") {
          auto it = open_preview_calls.find(num(p, "call_id"));
          if (it == open_preview_calls.end()) {
            problem(e, "preview error without request");
          } else {
            st.previews[it->second] = "failed";
            open_preview_calls.erase(it);
          }
        }
        break;
      }

      case EventKind::run:
        ++st.runs;
        break;

      case EventKind::task_start:
        st.task_id = str(p, "task_id");
        break;

      case EventKind::task_submit:
        if (str(p, "task_id") != st.task_id.value_or(""))
          problem(e, "submit for a task that is not in progress");
        break;

      case EventKind::chat_typing:
        break;
    }
  }
  if (!open_generations.empty())
    r.problems.push_back(std::to_string(open_generations.size()) +
                         " generation(s) never shown or discarded");
  return r;
}

AuditReport audit_log(const LogContents& log) {
  std::map<SessionId, std::vector<TelemetryEvent>> sessions;
  for (const auto& e : log.events) sessions[e.session_id].push_back(e);
  AuditReport out;
  if (log.malformed) out.problems.push_back(std::to_string(log.malformed) + " malformed line(s)");
  for (auto& [id, events] : sessions) {
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.seq < b.seq; });
    auto r = audit_session(events);
    for (auto& p : r.problems) out.problems.push_back(id + ": " + p);
    if (sessions.size() == 1) out.state = std::move(r.state);
  }
  return out;
}

}  // namespace proactive
