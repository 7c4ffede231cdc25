#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "proactive/gateway/http_provider.hpp"
#include "proactive/runner.hpp"

namespace proactive::gateway {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;

  /// Per-session log files go here unless `telemetry_file` is set.
  std::filesystem::path telemetry_dir = "telemetry";
  std::optional<std::filesystem::path> telemetry_file;

  /// echo | http | scripted
  std::string provider_kind = "echo";
  HttpProviderConfig http;
  std::filesystem::path scripted_dir;

  bool runner_enabled = false;
  CommandRunnerConfig runner;

  std::optional<std::filesystem::path> conditions_file;
  bool log_provider_io = false;

  std::size_t session_threads = 4;
  std::size_t provider_threads = 8;
  std::size_t http_threads = 32;
  Millis tick{1000};
};

/// Strict: unknown keys and wrong types raise Error(configuration).
/// Relative paths resolve against `base_dir`.
ServerConfig server_config_from_json(const nlohmann::json& j,
                                     const std::filesystem::path& base_dir = {});
ServerConfig load_server_config(const std::filesystem::path& path);
nlohmann::json to_json(const ServerConfig& cfg);

}  // namespace proactive::gateway
