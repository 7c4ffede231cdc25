#pragma once

#include <memory>
#include <string>
#include <vector>

#include "proactive/error.hpp"
#include "proactive/runner.hpp"
#include "proactive/session.hpp"
#include "proactive/virtual_runtime.hpp"
#include "support.hpp"

namespace proactive::testing {

/// Three virtual minutes under suggest_preview: a proactive batch is shown,
/// expanded and previewed, one hunk is accepted, an erroring run brings a
/// debug batch, and the user keeps working.
struct ScenarioResult {
  std::vector<std::string> lines;
  std::vector<std::string> errors;
  std::vector<PushFrame> frames;
  std::string final_code;
};

inline ScenarioResult run_e2e_scenario(const std::string& session_id = "e2e") {
  FakeProvider provider;
  provider.preview_code =
      "def mean(xs):\n    if not xs:\n        return 0\n    return sum(xs) / len(xs)\n\nprint(mean([]))\n";
  RunResult err;
  err.exit_status = 1;
  err.is_error = true;
  err.stderr_text = "Traceback (most recent call last):\nZeroDivisionError: division by zero\n";
  RunResult ok;
  ok.stdout_text = "0\n";
  ScriptedRunner runner({err, ok});

  SessionOptions o;
  o.condition = conditions::suggest_preview();
  o.task_id = "sales_analysis";
  o.participant_id = "P1";
  o.runner_available = true;
  o.initial_code = "def mean(xs):\n    return sum(xs) / len(xs)\n\nprint(mean([]))\n";
  auto sink = std::make_shared<MemorySink>();
  Session session(session_id, o, sink, at_ms(0));
  ScenarioResult out;
  session.set_frame_listener([&](const PushFrame& f) { out.frames.push_back(f); });
  VirtualRuntime rt(session, provider, &runner);

  auto first_visible = [](Session& s) -> SuggestionId {
    auto v = s.visible_suggestions();
    return v.empty() ? SuggestionId{} : v.front()->id;
  };
  SuggestionId picked;
  rt.at(at_ms(2000), [](Session& s, Timestamp t) {
    return s.apply_edit("doc1", s.primary_document().text + "# todo\n", t);
  });
  rt.at(at_ms(3000), [](Session& s, Timestamp t) { return s.post_chat("Why does this crash?", t); });
  // The chat resets the cooldown, so the first proactive batch lands at 25 s.
  rt.at(at_ms(26000), [&](Session& s, Timestamp t) {
    picked = first_visible(s);
    return s.expand(picked, t);
  });
  rt.at(at_ms(27000), [&](Session& s, Timestamp t) { return s.request_preview(picked, t); });
  rt.at(at_ms(30000), [](Session& s, Timestamp t) {
    if (s.previews().empty()) throw Error(ErrorCode::bad_state, "no preview to accept");
    const auto& pid = s.previews().rbegin()->first;
    return s.accept_preview(pid, std::vector<int>{0}, std::nullopt, t);
  });
  rt.at(at_ms(33000), [](Session& s, Timestamp t) { return s.run_code("doc1", t); });
  rt.at(at_ms(40000), [&](Session& s, Timestamp t) {
    auto id = first_visible(s);
    return s.expand(id, t);
  });
  rt.at(at_ms(41000), [&](Session& s, Timestamp t) {
    auto id = first_visible(s);
    for (const auto* v : s.visible_suggestions())
      if (v->state == SuggestionState::expanded) id = v->id;
    return s.accept(id, t);
  });
  rt.at(at_ms(60000), [](Session& s, Timestamp t) {
    return s.apply_edit("doc1", s.primary_document().text + "print('done')\n", t);
  });
  rt.at(at_ms(90000), [](Session& s, Timestamp t) { return s.request_suggestions(t); });
  rt.at(at_ms(95000), [&](Session& s, Timestamp t) {
    auto id = first_visible(s);
    if (id.empty()) return Effects{};
    auto e = s.expand(id, t);
    s.remove(id, t);
    return e;
  });
  rt.at(at_ms(120000), [](Session& s, Timestamp t) { return s.run_code("doc1", t); });
  rt.at(at_ms(150000), [](Session& s, Timestamp t) { return s.post_chat("Thanks", t); });
  rt.at(at_ms(175000), [](Session& s, Timestamp t) { return s.submit_task(t); });
  rt.run_until(at_ms(180000));

  out.lines = sink->lines();
  out.errors = rt.errors();
  out.final_code = session.primary_document().text;
  return out;
}

inline std::string joined(const std::vector<std::string>& lines) {
  std::string s = schema_header_line() + "\n";
  for (const auto& l : lines) s += l + "\n";
  return s;
}

}  // namespace proactive::testing
