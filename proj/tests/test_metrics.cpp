#include <gtest/gtest.h>

#include <map>

#include "metrics_oracle.hpp"
#include "proactive/metrics.hpp"

using namespace proactive;
using namespace proactive::testing;

TEST(Metrics, TwoTasksFourAndTwo) {
  auto s = summarize({4, 2});
  EXPECT_NEAR(s.mean, 3.0, 1e-12);
  EXPECT_NEAR(s.se, 1.0, 1e-12);
  EXPECT_EQ(s.n, 2);
  EXPECT_EQ(summarize({5}).se, 0.0);
  EXPECT_EQ(summarize({}).n, 0);
}

TEST(Metrics, MatchesLineGrepOracleOnSyntheticLogs) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SCOPED_TRACE(seed);
    const auto text = synthetic_log(seed, 2 + static_cast<int>(seed % 3));
    const auto oracle = grep_count({text});
    const auto m = compute_metrics({read_log_text(text)});
    EXPECT_EQ(m.malformed_lines, oracle.malformed);

    std::size_t oracle_tasks = 0;
    for (const auto& [s, tl] : oracle.tasks) oracle_tasks += tl.size();
    ASSERT_EQ(m.tasks.size(), oracle_tasks);

    for (auto metric : kAllMetrics) {
      std::map<std::string, std::vector<double>> samples;
      for (const auto& [s, tl] : oracle.tasks)
        for (const auto& t : tl) {
          auto it = t.find(std::string(to_string(metric)));
          samples[oracle.condition.at(s)].push_back(it == t.end() ? 0 : it->second);
        }
      for (const auto& [cond, v] : samples) {
        const auto [mean, se] = mean_se(v);
        const auto& got = m.by_condition.at(cond).at(metric);
        EXPECT_NEAR(got.mean, mean, 1e-9) << cond << " " << to_string(metric);
        EXPECT_NEAR(got.se, se, 1e-9) << cond << " " << to_string(metric);
        EXPECT_EQ(got.n, static_cast<int>(v.size()));
      }
    }
    EXPECT_EQ(m.acceptance_by_category, oracle.accepts);
  }
}

TEST(Metrics, ParticipantWeightingAveragesPerParticipant) {
  const auto text = synthetic_log(42, 4);
  const auto oracle = grep_count({text});
  const auto m = compute_metrics({read_log_text(text)}, Weighting::participant);
  for (auto metric : kAllMetrics) {
    // condition -> participant -> (sum, n)
    std::map<std::string, std::map<std::string, std::pair<double, int>>> per;
    for (const auto& [s, tl] : oracle.tasks)
      for (const auto& t : tl) {
        auto it = t.find(std::string(to_string(metric)));
        auto& [sum, n] = per[oracle.condition.at(s)][oracle.participant.at(s)];
        sum += it == t.end() ? 0 : it->second;
        ++n;
      }
    for (const auto& [cond, parts] : per) {
      std::vector<double> v;
      for (const auto& [p, sn] : parts) v.push_back(sn.first / sn.second);
      const auto [mean, se] = mean_se(v);
      EXPECT_NEAR(m.by_condition.at(cond).at(metric).mean, mean, 1e-9);
      EXPECT_NEAR(m.by_condition.at(cond).at(metric).se, se, 1e-9);
    }
  }
}

TEST(Metrics, EventsBeforeFirstTaskJoinFirstTask) {
  auto line = [](std::int64_t seq, EventKind k, nlohmann::json p = nlohmann::json::object()) {
    TelemetryEvent e;
    e.session_id = "a";
    e.condition_name = "suggest";
    e.seq = seq;
    e.kind = k;
    e.payload = std::move(p);
    return serialize(e) + "\n";
  };
  std::string text = line(0, EventKind::session_created) + line(1, EventKind::suggestion_expand) +
                     line(2, EventKind::task_start, {{"task_id", "t1"}}) +
                     line(3, EventKind::suggestion_expand) +
                     line(4, EventKind::task_start, {{"task_id", "t2"}}) +
                     line(5, EventKind::suggestion_expand);
  auto m = compute_metrics({read_log_text(text)});
  ASSERT_EQ(m.tasks.size(), 2u);
  EXPECT_EQ(m.tasks[0].task_id, "t1");
  EXPECT_EQ(m.tasks[0].counts.at(Metric::expands), 2);
  EXPECT_EQ(m.tasks[1].counts.at(Metric::expands), 1);
  const auto& s = m.by_condition.at("suggest").at(Metric::expands);
  EXPECT_NEAR(s.mean, 1.5, 1e-12);
  EXPECT_NEAR(s.se, 0.5, 1e-12);
}

TEST(Metrics, EmptyLogYieldsNothing) {
  auto m = compute_metrics({read_log_text("")});
  EXPECT_TRUE(m.tasks.empty());
  EXPECT_TRUE(m.by_condition.empty());
  EXPECT_NO_THROW(format_metrics(m, TableFormat::table, true));
  EXPECT_NO_THROW(format_metrics(m, TableFormat::csv, false));
}

TEST(Metrics, CsvHasHeaderAndRows) {
  const auto m = compute_metrics({read_log_text(synthetic_log(3, 2))});
  const auto csv = format_metrics(m, TableFormat::csv, true);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "metric,condition,mean,se,n");
  EXPECT_NE(format_categories(m, TableFormat::csv, true).find("condition,category,accepts"), std::string::npos);
  EXPECT_NE(format_tasks(m, TableFormat::table).find("participant"), std::string::npos);
}
