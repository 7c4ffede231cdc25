#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace proactive {

enum class TaskType { system_building, package_usage };
std::string_view to_string(TaskType t);

/// A study task: instructions plus the code the editor starts with.
struct TaskFixture {
  std::string id;
  std::string title;
  TaskType type = TaskType::system_building;
  std::string description;
  std::string starter_code;
};

class TaskRegistry {
 public:
  /// Registry holding the four study tasks.
  static TaskRegistry builtin();

  TaskRegistry() = default;
  explicit TaskRegistry(std::vector<TaskFixture> tasks) : tasks_(std::move(tasks)) {}

  const std::vector<TaskFixture>& tasks() const { return tasks_; }
  const TaskFixture* find(std::string_view id) const;
  /// Throws Error(configuration) for unknown ids.
  const TaskFixture& get(std::string_view id) const;
  std::vector<const TaskFixture*> of_type(TaskType t) const;

 private:
  std::vector<TaskFixture> tasks_;
};

}  // namespace proactive
