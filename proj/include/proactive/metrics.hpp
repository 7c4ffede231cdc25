#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/telemetry.hpp"

namespace proactive {

/// The interaction counts reported per task.
enum class Metric { expands, copies, previews, manual_requests, accepts, deletes };

inline constexpr std::array<Metric, 6> kAllMetrics = {
    Metric::expands, Metric::copies,  Metric::previews,
    Metric::manual_requests, Metric::accepts, Metric::deletes};

std::string_view to_string(Metric m);
/// The event kind each metric counts.
EventKind counted_kind(Metric m);

/// How per-task counts are pooled. `task`: every task is one sample.
/// `participant`: each participant's mean over their tasks is one sample.
enum class Weighting { task, participant };

struct MetricSummary {
  double mean = 0;
  /// Sample standard deviation over sqrt(n); 0 when n < 2.
  double se = 0;
  int n = 0;
};

/// One task of one session with its counts.
struct TaskCounts {
  std::string participant;
  SessionId session_id;
  std::string condition;
  std::string task_id;  // empty when the session never started a task
  std::map<Metric, int> counts;
};

struct InteractionMetrics {
  Weighting weighting = Weighting::task;
  /// condition -> metric -> summary.
  std::map<std::string, std::map<Metric, MetricSummary>> by_condition;
  /// condition -> category -> accepts.
  std::map<std::string, std::map<std::string, int>> acceptance_by_category;
  /// category -> accepts, all conditions.
  std::map<std::string, int> acceptance_total;
  std::vector<TaskCounts> tasks;
  int malformed_lines = 0;
  int events = 0;
};

/// Events may come from any mix of files and sessions; they are grouped by
/// session and ordered by seq. Tasks begin at task_start; events before the
/// first task_start belong to the first task, and a session without one is
/// a single task.
InteractionMetrics compute_metrics(const std::vector<LogContents>& logs,
                                   Weighting weighting = Weighting::task);
InteractionMetrics compute_metrics(const std::vector<std::filesystem::path>& paths,
                                   Weighting weighting = Weighting::task);

/// Mean and standard error of raw samples.
MetricSummary summarize(const std::vector<double>& samples);

enum class TableFormat { table, csv };

/// Rows of metric, condition, mean, SE, n. With `by_condition` false the
/// conditions are pooled under "all".
std::string format_metrics(const InteractionMetrics& m, TableFormat fmt, bool by_condition);
/// Rows of condition, category, accepts.
std::string format_categories(const InteractionMetrics& m, TableFormat fmt, bool by_condition);
/// One row per task with every count.
std::string format_tasks(const InteractionMetrics& m, TableFormat fmt);

}  // namespace proactive
