#include "proactive/schedule.hpp"

#include <random>

#include "proactive/error.hpp"

namespace proactive {

Schedule assign_condition(std::uint64_t seed, const TaskRegistry& tasks,
                          const std::vector<std::string>& variants) {
  if (variants.empty()) throw Error(ErrorCode::configuration, "no proactive variants given");
  const std::array<TaskType, 2> types{TaskType::system_building, TaskType::package_usage};
  std::array<std::vector<const TaskFixture*>, 2> pool;
  for (int i = 0; i < 2; ++i) {
    pool[i] = tasks.of_type(types[i]);
    if (pool[i].size() < 2)
      throw Error(ErrorCode::configuration, "schedule needs two " + std::string(to_string(types[i])) +
                                                " tasks, registry has " +
                                                std::to_string(pool[i].size()));
  }

  std::mt19937_64 rng(seed);
  const std::uint64_t bits = rng();

  Schedule s;
  s.seed = seed;
  s.proactive_variant = variants[seed % variants.size()];
  s.proactive_first = bits & 1u;
  const int first_type = (bits >> 1) & 1u;
  const std::array<int, 2> block1_pick{static_cast<int>((bits >> 2) & 1u),
                                       static_cast<int>((bits >> 3) & 1u)};

  const std::array<int, 2> order{first_type, 1 - first_type};
  for (int b = 0; b < 2; ++b) {
    auto& block = s.blocks[b];
    const bool proactive = (b == 0) == s.proactive_first;
    block.condition = proactive ? s.proactive_variant : "baseline";
    for (int slot = 0; slot < 2; ++slot) {
      const int type = order[slot];
      const int pick = b == 0 ? block1_pick[type] : 1 - block1_pick[type];
      block.task_ids[slot] = pool[type][pick]->id;
      block.task_types[slot] = types[type];
    }
  }
  return s;
}

nlohmann::json to_json(const Schedule& s) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : s.blocks) {
    nlohmann::json tasks = nlohmann::json::array();
    for (int i = 0; i < 2; ++i)
      tasks.push_back({{"task_id", b.task_ids[i]}, {"type", std::string(to_string(b.task_types[i]))}});
    blocks.push_back({{"condition", b.condition}, {"tasks", std::move(tasks)}});
  }
  return {{"seed", s.seed},
          {"proactive_variant", s.proactive_variant},
          {"proactive_first", s.proactive_first},
          {"blocks", std::move(blocks)}};
}

}  // namespace proactive
