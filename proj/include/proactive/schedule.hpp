#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "proactive/tasks.hpp"

namespace proactive {

/// One condition block: a condition and the two tasks done under it.
struct ScheduleBlock {
  std::string condition;
  std::array<std::string, 2> task_ids;
  std::array<TaskType, 2> task_types;
};

/// Within-subjects plan for one participant: baseline plus one proactive
/// variant, in randomized order, with task types mirrored across blocks.
struct Schedule {
  std::uint64_t seed = 0;
  std::string proactive_variant;
  bool proactive_first = false;
  std::array<ScheduleBlock, 2> blocks;
};

inline const std::vector<std::string>& default_variants() {
  static const std::vector<std::string> v{"suggest", "suggest_preview", "persistent_suggest"};
  return v;
}

/// Deterministic in `seed`. Variants rotate round-robin over seeds. Both
/// blocks open with the same task type, using different tasks of it.
/// Throws Error(configuration) unless the registry has two tasks of each
/// type, or when `variants` is empty.
Schedule assign_condition(std::uint64_t seed, const TaskRegistry& tasks,
                          const std::vector<std::string>& variants = default_variants());

nlohmann::json to_json(const Schedule& s);

}  // namespace proactive
