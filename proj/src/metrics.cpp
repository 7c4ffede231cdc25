#include "proactive/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "proactive/error.hpp"

namespace proactive {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::expands: return "expands";
    case Metric::copies: return "copies";
    case Metric::previews: return "previews";
    case Metric::manual_requests: return "manual_requests";
    case Metric::accepts: return "accepts";
    case Metric::deletes: return "deletes";
  }
  return "?";
}

EventKind counted_kind(Metric m) {
  switch (m) {
    case Metric::expands: return EventKind::suggestion_expand;
    case Metric::copies: return EventKind::suggestion_copy;
    case Metric::previews: return EventKind::suggestion_preview;
    case Metric::manual_requests: return EventKind::suggestion_request;
    case Metric::accepts: return EventKind::suggestion_accept;
    case Metric::deletes: return EventKind::suggestion_delete;
  }
  return EventKind::session_created;
}

MetricSummary summarize(const std::vector<double>& samples) {
  MetricSummary s;
  s.n = static_cast<int>(samples.size());
  if (s.n == 0) return s;
  double sum = 0;
  for (double v : samples) sum += v;
  s.mean = sum / s.n;
  if (s.n < 2) return s;
  double ss = 0;
  for (double v : samples) ss += (v - s.mean) * (v - s.mean);
  s.se = std::sqrt(ss / (s.n - 1)) / std::sqrt(static_cast<double>(s.n));
  return s;
}

namespace {

std::vector<TaskCounts> split_tasks(std::vector<const TelemetryEvent*>& events) {
  std::sort(events.begin(), events.end(),
            [](const TelemetryEvent* a, const TelemetryEvent* b) { return a->seq < b->seq; });
  std::string participant = events.front()->session_id;
  std::string condition = events.front()->condition_name;
  for (const auto* e : events) {
    if (e->kind != EventKind::session_created) continue;
    const auto& p = e->payload;
    if (p.contains("participant_id") && p["participant_id"].is_string())
      participant = p["participant_id"].get<std::string>();
    break;
  }

  std::vector<TaskCounts> tasks;
  auto fresh = [&](std::string task_id) {
    TaskCounts t;
    t.participant = participant;
    t.session_id = events.front()->session_id;
    t.condition = condition;
    t.task_id = std::move(task_id);
    for (auto m : kAllMetrics) t.counts[m] = 0;
    return t;
  };
  std::vector<const TelemetryEvent*> before_first;
  for (const auto* e : events) {
    if (e->kind == EventKind::task_start) {
      std::string id = e->payload.value("task_id", std::string());
      tasks.push_back(fresh(id));
      continue;
    }
    if (tasks.empty()) {
      before_first.push_back(e);
      continue;
    }
    for (auto m : kAllMetrics)
      if (e->kind == counted_kind(m)) ++tasks.back().counts[m];
  }
  if (tasks.empty()) tasks.push_back(fresh(""));
  for (const auto* e : before_first)
    for (auto m : kAllMetrics)
      if (e->kind == counted_kind(m)) ++tasks.front().counts[m];
  return tasks;
}

}  // namespace

InteractionMetrics compute_metrics(const std::vector<LogContents>& logs, Weighting weighting) {
  InteractionMetrics out;
  out.weighting = weighting;
  std::map<SessionId, std::vector<const TelemetryEvent*>> sessions;
  for (const auto& log : logs) {
    out.malformed_lines += log.malformed;
    for (const auto& e : log.events) {
      ++out.events;
      sessions[e.session_id].push_back(&e);
      if (e.kind == EventKind::suggestion_accept) {
        auto cat = e.payload.value("category", std::string("unknown"));
        ++out.acceptance_by_category[e.condition_name][cat];
        ++out.acceptance_total[cat];
      }
    }
  }
  for (auto& [id, events] : sessions) {
    auto tasks = split_tasks(events);
    out.tasks.insert(out.tasks.end(), tasks.begin(), tasks.end());
  }

  std::set<std::string> conditions;
  for (const auto& t : out.tasks) conditions.insert(t.condition);
  for (const auto& cond : conditions) {
    for (auto m : kAllMetrics) {
      std::vector<double> samples;
      if (weighting == Weighting::task) {
        for (const auto& t : out.tasks)
          if (t.condition == cond) samples.push_back(t.counts.at(m));
      } else {
        std::map<std::string, std::pair<double, int>> per;
        for (const auto& t : out.tasks) {
          if (t.condition != cond) continue;
          auto& [sum, n] = per[t.participant];
          sum += t.counts.at(m);
          ++n;
        }
        for (const auto& [p, acc] : per) samples.push_back(acc.first / acc.second);
      }
      out.by_condition[cond][m] = summarize(samples);
    }
  }
  return out;
}

InteractionMetrics compute_metrics(const std::vector<std::filesystem::path>& paths,
                                   Weighting weighting) {
  std::vector<LogContents> logs;
  logs.reserve(paths.size());
  for (const auto& p : paths) logs.push_back(read_log_file(p));
  return compute_metrics(logs, weighting);
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string render(const std::vector<std::vector<std::string>>& rows, TableFormat fmt) {
  std::string out;
  if (fmt == TableFormat::csv) {
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) out += ',';
        const bool quote = r[i].find_first_of(",\"\n") != std::string::npos;
        if (!quote) {
          out += r[i];
          continue;
        }
        out += '"';
        for (char c : r[i]) {
          if (c == '"') out += '"';
          out += c;
        }
        out += '"';
      }
      out += '\n';
    }
    return out;
  }
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) line += "  ";
      line += r[i];
      if (i + 1 < r.size()) line += std::string(width[i] - r[i].size(), ' ');
    }
    out += line + '\n';
    if (k == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out += std::string(total + 2 * (width.size() - 1), '-') + '\n';
    }
  }
  return out;
}

}  // namespace

std::string format_metrics(const InteractionMetrics& m, TableFormat fmt, bool by_condition) {
  std::vector<std::vector<std::string>> rows{{"metric", "condition", "mean", "se", "n"}};
  if (by_condition) {
    for (auto metric : kAllMetrics)
      for (const auto& [cond, per] : m.by_condition) {
        const auto& s = per.at(metric);
        rows.push_back({std::string(to_string(metric)), cond, fixed(s.mean), fixed(s.se),
                        std::to_string(s.n)});
      }
  } else {
    for (auto metric : kAllMetrics) {
      std::vector<double> samples;
      if (m.weighting == Weighting::task) {
        for (const auto& t : m.tasks) samples.push_back(t.counts.at(metric));
      } else {
        std::map<std::string, std::pair<double, int>> per;
        for (const auto& t : m.tasks) {
          auto& [sum, n] = per[t.participant];
          sum += t.counts.at(metric);
          ++n;
        }
        for (const auto& [p, acc] : per) samples.push_back(acc.first / acc.second);
      }
      auto s = summarize(samples);
      rows.push_back({std::string(to_string(metric)), "all", fixed(s.mean), fixed(s.se),
                      std::to_string(s.n)});
    }
  }
  return render(rows, fmt);
}

std::string format_categories(const InteractionMetrics& m, TableFormat fmt, bool by_condition) {
  std::vector<std::vector<std::string>> rows{{"condition", "category", "accepts"}};
  if (by_condition) {
    for (const auto& [cond, cats] : m.acceptance_by_category)
      for (const auto& [cat, n] : cats) rows.push_back({cond, cat, std::to_string(n)});
  } else {
    for (const auto& [cat, n] : m.acceptance_total) rows.push_back({"all", cat, std::to_string(n)});
  }
  return render(rows, fmt);
}

std::string format_tasks(const InteractionMetrics& m, TableFormat fmt) {
  std::vector<std::string> header{"participant", "session_id", "condition", "task_id"};
  for (auto metric : kAllMetrics) header.emplace_back(to_string(metric));
  std::vector<std::vector<std::string>> rows{header};
  for (const auto& t : m.tasks) {
    std::vector<std::string> r{t.participant, t.session_id, t.condition, t.task_id};
    for (auto metric : kAllMetrics) r.push_back(std::to_string(t.counts.at(metric)));
    rows.push_back(std::move(r));
  }
  return render(rows, fmt);
}

}  // namespace proactive
