#pragma once

// Synthetic telemetry logs and an independent line-grep counter used to
// check compute_metrics.

#include <cmath>
#include <map>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "proactive/telemetry.hpp"

namespace proactive::testing {

struct SyntheticSession {
  std::string id;
  std::string condition;
  std::string participant;
};

// Writes sessions with randomly interleaved events into one log text.
inline std::string synthetic_log(std::uint64_t seed, int sessions) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> conds{"baseline", "suggest", "suggest_preview", "persistent_suggest"};
  const std::vector<EventKind> kinds{
      EventKind::suggestion_expand, EventKind::suggestion_copy, EventKind::suggestion_preview,
      EventKind::suggestion_request, EventKind::suggestion_accept, EventKind::suggestion_delete,
      EventKind::code_update, EventKind::chat_send, EventKind::suggestion_shown,
      EventKind::preview_request, EventKind::task_start};
  const std::vector<std::string> cats{"explain_code", "add_tests", "debug_runtime", "complete_code"};

  std::vector<SyntheticSession> ss;
  std::vector<std::int64_t> seq(static_cast<std::size_t>(sessions), 0);
  std::vector<int> tasks(static_cast<std::size_t>(sessions), 0);
  std::string out = schema_header_line() + "\n";
  for (int i = 0; i < sessions; ++i) {
    ss.push_back({"s" + std::to_string(seed) + "_" + std::to_string(i), conds[rng() % conds.size()],
                  "P" + std::to_string(rng() % 3)});
    TelemetryEvent ev;
    ev.session_id = ss.back().id;
    ev.condition_name = ss.back().condition;
    ev.seq = seq[static_cast<std::size_t>(i)]++;
    ev.kind = EventKind::session_created;
    ev.payload = {{"participant_id", ss.back().participant}};
    out += serialize(ev) + "\n";
  }
  const int n_events = 50 + static_cast<int>(rng() % 150);
  for (int k = 0; k < n_events; ++k) {
    const auto i = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(sessions));
    TelemetryEvent ev;
    ev.session_id = ss[i].id;
    ev.condition_name = ss[i].condition;
    ev.seq = seq[i]++;
    ev.ts = at_ms(k * 100);
    ev.kind = kinds[rng() % kinds.size()];
    if (ev.kind == EventKind::task_start) {
      ev.payload = {{"task_id", "task" + std::to_string(tasks[i]++)}};
    } else if (ev.kind == EventKind::suggestion_accept) {
      ev.payload = {{"category", cats[rng() % cats.size()]}, {"suggestion_id", "x"}};
    } else if (ev.kind == EventKind::suggestion_shown) {
      ev.payload = {{"kind", "suggestion_accept"}};  // decoy: nested kind must not count
    }
    if (tasks[i] > 0) ev.task_id = "task" + std::to_string(tasks[i] - 1);
    out += serialize(ev) + "\n";
  }
  out += "{not json\n";
  return out;
}

// Independent counter: regexes over raw lines, no JSON parsing.
struct GrepCounts {
  // session -> list of tasks, each metric name -> count
  std::map<std::string, std::vector<std::map<std::string, int>>> tasks;
  std::map<std::string, std::string> condition, participant;
  std::map<std::string, std::map<std::string, int>> accepts;  // condition -> category -> n
  int malformed = 0;
};

inline GrepCounts grep_count(const std::vector<std::string>& logs) {
  static const std::regex kind_re(R"re("kind":"([a-z_]+)")re");
  static const std::regex sess_re(R"re("session_id":"([^"]*)")re");
  static const std::regex cond_re(R"re(^\{"condition_name":"([^"]*)")re");
  static const std::regex part_re(R"re("participant_id":"([^"]*)")re");
  static const std::regex cat_re(R"re("category":"([^"]*)")re");
  const std::map<std::string, std::string> metric_of{
      {"suggestion_expand", "expands"},   {"suggestion_copy", "copies"},
      {"suggestion_preview", "previews"}, {"suggestion_request", "manual_requests"},
      {"suggestion_accept", "accepts"},   {"suggestion_delete", "deletes"}};
  GrepCounts g;
  std::map<std::string, bool> started;
  for (const auto& log : logs) {
    std::size_t pos = 0;
    while (pos < log.size()) {
      auto end = log.find('\n', pos);
      if (end == std::string::npos) end = log.size();
      const std::string line = log.substr(pos, end - pos);
      pos = end + 1;
      if (line.empty() || line.rfind("{\"schema_version\"", 0) == 0) continue;
      std::smatch km, cm;
      if (!std::regex_search(line, km, kind_re) || !std::regex_search(line, cm, cond_re)) {
        ++g.malformed;
        continue;
      }
      // session_id is the last top-level key before task_id and ts_ms.
      std::string session;
      for (auto it = std::sregex_iterator(line.begin(), line.end(), sess_re); it != std::sregex_iterator(); ++it)
        session = (*it)[1];
      const std::string kind = km[1];
      auto& tl = g.tasks[session];
      if (tl.empty()) tl.emplace_back();
      g.condition[session] = cm[1];
      if (kind == "session_created") {
        std::smatch pm;
        g.participant[session] = std::regex_search(line, pm, part_re) ? std::string(pm[1]) : session;
      } else if (kind == "task_start") {
        if (started[session]) tl.emplace_back();
        started[session] = true;
      } else if (metric_of.count(kind)) {
        ++tl.back()[metric_of.at(kind)];
        if (kind == "suggestion_accept") {
          std::smatch cat;
          std::regex_search(line, cat, cat_re);
          ++g.accepts[cm[1]][cat[1]];
        }
      }
    }
  }
  return g;
}

inline std::pair<double, double> mean_se(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  if (v.size() < 2) return {m, 0.0};
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return {m, std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()))};
}


}  // namespace proactive::testing
