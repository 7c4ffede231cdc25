#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/types.hpp"

namespace proactive {

/// Every tunable proactivity parameter of one experiment arm.
struct ConditionConfig {
  std::string name;
  bool proactive_enabled = false;
  bool preview_enabled = false;
  Millis idle_threshold{5000};
  Millis cooldown{20000};
  int suggestions_per_batch = 3;
  bool guiding_prompts = false;
  /// How long after the last keystroke typing counts as still active.
  /// Defaults to idle_threshold when not set explicitly.
  std::optional<Millis> typing_resume_grace;
  int history_limit = 40;

  Millis typing_grace() const { return typing_resume_grace.value_or(idle_threshold); }

  friend bool operator==(const ConditionConfig&, const ConditionConfig&) = default;
};

/// Throws Error(configuration) when an invariant is broken.
void validate(const ConditionConfig& cfg);

namespace conditions {
ConditionConfig baseline();
ConditionConfig suggest();
ConditionConfig suggest_preview();
ConditionConfig persistent_suggest();
}  // namespace conditions

/// Named condition lookup. Starts with the four built-in study arms.
class ConditionRegistry {
 public:
  ConditionRegistry();

  /// Adds or replaces a config after validating it.
  void add(ConditionConfig cfg);

  /// Throws Error(configuration) for unknown names.
  const ConditionConfig& get(std::string_view name) const;
  bool contains(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Parses `key = value` blocks (blank-line separated, `#` comments) and
  /// registers each. Returns the names loaded.
  std::vector<std::string> load_text(std::string_view text);
  std::vector<std::string> load_file(const std::filesystem::path& path);

 private:
  std::map<std::string, ConditionConfig, std::less<>> configs_;
};

/// Parses the block format used by ConditionRegistry::load_text without
/// registering anything.
std::vector<ConditionConfig> parse_condition_text(std::string_view text);

/// Inverse of parse_condition_text for a single config.
std::string format_condition(const ConditionConfig& cfg);

}  // namespace proactive
