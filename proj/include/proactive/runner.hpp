#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <regex>
#include <string>
#include <vector>

#include "proactive/records.hpp"

namespace proactive {

/// Executes the user's program. Implementations must be safe to call from
/// several threads at once.
class Runner {
 public:
  virtual ~Runner() = default;
  virtual RunResult run(const std::string& code) = 0;
};

struct CommandRunnerConfig {
  /// Shell command; `{file}` expands to the quoted program path and `{dir}`
  /// to the quoted workspace directory.
  std::string command_template = "python3 {file}";
  std::string filename = "main.py";
  Millis timeout{10000};
  std::size_t output_cap = 64 * 1024;
  /// A run whose stderr matches this counts as an error even with exit 0.
  std::string error_pattern = R"(Traceback \(most recent call last\)|[A-Za-z]+Error\b)";
  /// Parent of the per-run temporary workspaces; empty means the system
  /// temp directory.
  std::filesystem::path workspace_root;
};

/// Writes the code into a fresh temporary directory and runs the configured
/// command there with a wall-clock limit. No sandboxing is applied; run it
/// inside a container or jail when the code is untrusted.
class CommandRunner : public Runner {
 public:
  explicit CommandRunner(CommandRunnerConfig cfg);
  RunResult run(const std::string& code) override;
  const CommandRunnerConfig& config() const { return cfg_; }

 private:
  CommandRunnerConfig cfg_;
  std::regex error_re_;
};

/// is_error rule shared by all runners.
bool classify_error(int exit_status, const std::string& stderr_text, const std::regex& pattern);

/// Returns canned results in order; used by tests and replay.
class ScriptedRunner : public Runner {
 public:
  explicit ScriptedRunner(std::vector<RunResult> results) : results_(std::move(results)) {}
  RunResult run(const std::string& code) override;
  std::size_t calls() const;

 private:
  std::vector<RunResult> results_;
  std::size_t next_ = 0;
  mutable std::mutex mu_;
};

}  // namespace proactive
