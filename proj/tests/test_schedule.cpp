#include <gtest/gtest.h>

#include <map>

#include "proactive/error.hpp"
#include "proactive/schedule.hpp"

using namespace proactive;

TEST(Schedule, OneBaselineOneVariantBlock) {
  const auto tasks = TaskRegistry::builtin();
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto s = assign_condition(seed, tasks);
    const auto& proactive = s.blocks[s.proactive_first ? 0 : 1];
    const auto& base = s.blocks[s.proactive_first ? 1 : 0];
    EXPECT_EQ(base.condition, "baseline");
    EXPECT_EQ(proactive.condition, s.proactive_variant);
  }
}

TEST(Schedule, TaskTypesMirrorAndTasksDiffer) {
  const auto tasks = TaskRegistry::builtin();
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = assign_condition(seed, tasks);
    EXPECT_EQ(s.blocks[0].task_types, s.blocks[1].task_types) << seed;
    EXPECT_NE(s.blocks[0].task_types[0], s.blocks[0].task_types[1]) << seed;
    std::set<std::string> ids;
    for (const auto& b : s.blocks)
      for (int i = 0; i < 2; ++i) {
        ids.insert(b.task_ids[i]);
        EXPECT_EQ(tasks.get(b.task_ids[i]).type, b.task_types[i]);
      }
    EXPECT_EQ(ids.size(), 4u) << seed;
  }
}

TEST(Schedule, VariantsBalanceOverWindows) {
  const auto tasks = TaskRegistry::builtin();
  for (std::uint64_t start = 0; start < 300; start += 37) {
    std::map<std::string, int> n;
    for (std::uint64_t seed = start; seed < start + 99; ++seed)
      ++n[assign_condition(seed, tasks).proactive_variant];
    for (const auto& v : default_variants()) EXPECT_NEAR(n[v], 33, 1) << v << " from " << start;
  }
}

TEST(Schedule, DeterministicInSeed) {
  const auto tasks = TaskRegistry::builtin();
  EXPECT_EQ(to_json(assign_condition(17, tasks)), to_json(assign_condition(17, tasks)));
}

TEST(Schedule, OrderAndFirstTypeBothVary) {
  const auto tasks = TaskRegistry::builtin();
  int first = 0, sys_first = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto s = assign_condition(seed, tasks);
    first += s.proactive_first;
    sys_first += s.blocks[0].task_types[0] == TaskType::system_building;
  }
  EXPECT_GT(first, 400);
  EXPECT_LT(first, 600);
  EXPECT_GT(sys_first, 400);
  EXPECT_LT(sys_first, 600);
}

TEST(Schedule, RejectsTooFewTasks) {
  TaskRegistry small({TaskFixture{"a", "A", TaskType::system_building, "", ""}});
  EXPECT_THROW(assign_condition(1, small), Error);
  EXPECT_THROW(assign_condition(1, TaskRegistry::builtin(), {}), Error);
}
