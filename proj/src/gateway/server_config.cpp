#include "proactive/gateway/server_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "proactive/error.hpp"

namespace proactive::gateway {

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw Error(ErrorCode::configuration, where + " must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw Error(ErrorCode::configuration, "unknown key '" + where + "." + k + "'");
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::configuration, "bad value for '" + where + "." + key + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

}  // namespace

ServerConfig server_config_from_json(const json& j, const std::filesystem::path& base) {
  ServerConfig c;
  only_keys(j, "config",
            {"host", "port", "telemetry", "provider", "runner", "conditions_file",
             "log_provider_io", "threads", "tick_ms"});
  read(j, "host", c.host, "config");
  read(j, "port", c.port, "config");
  read(j, "log_provider_io", c.log_provider_io, "config");
  if (j.contains("tick_ms")) {
    std::int64_t ms = 0;
    read(j, "tick_ms", ms, "config");
    if (ms <= 0) throw Error(ErrorCode::configuration, "tick_ms must be positive");
    c.tick = Millis{ms};
  }
  if (j.contains("conditions_file")) {
    std::string p;
    read(j, "conditions_file", p, "config");
    c.conditions_file = resolve(base, p);
  }
  if (auto it = j.find("telemetry"); it != j.end()) {
    only_keys(*it, "telemetry", {"dir", "file"});
    std::string dir, file;
    read(*it, "dir", dir, "telemetry");
    read(*it, "file", file, "telemetry");
    if (!dir.empty()) c.telemetry_dir = resolve(base, dir);
    if (!file.empty()) c.telemetry_file = resolve(base, file);
  } else if (!base.empty()) {
    c.telemetry_dir = base / c.telemetry_dir;
  }
  if (auto it = j.find("provider"); it != j.end()) {
    only_keys(*it, "provider",
              {"kind", "base_url", "path", "model", "temperature", "timeout_ms", "key_env",
               "fixtures_dir"});
    read(*it, "kind", c.provider_kind, "provider");
    read(*it, "base_url", c.http.base_url, "provider");
    read(*it, "path", c.http.path, "provider");
    read(*it, "model", c.http.model, "provider");
    read(*it, "temperature", c.http.temperature, "provider");
    read(*it, "key_env", c.http.key_env, "provider");
    std::int64_t ms = c.http.timeout.count();
    read(*it, "timeout_ms", ms, "provider");
    c.http.timeout = Millis{ms};
    std::string dir;
    read(*it, "fixtures_dir", dir, "provider");
    if (!dir.empty()) c.scripted_dir = resolve(base, dir);
  }
  if (c.provider_kind != "echo" && c.provider_kind != "http" && c.provider_kind != "scripted")
    throw Error(ErrorCode::configuration, "provider.kind must be echo, http or scripted");
  if (c.provider_kind == "scripted" && c.scripted_dir.empty())
    throw Error(ErrorCode::configuration, "provider.fixtures_dir is required for scripted");
  if (auto it = j.find("runner"); it != j.end()) {
    only_keys(*it, "runner",
              {"enabled", "command", "filename", "timeout_ms", "output_cap_bytes", "error_pattern",
               "workspace_root"});
    read(*it, "enabled", c.runner_enabled, "runner");
    read(*it, "command", c.runner.command_template, "runner");
    read(*it, "filename", c.runner.filename, "runner");
    read(*it, "error_pattern", c.runner.error_pattern, "runner");
    std::int64_t ms = c.runner.timeout.count();
    read(*it, "timeout_ms", ms, "runner");
    if (ms <= 0) throw Error(ErrorCode::configuration, "runner.timeout_ms must be positive");
    c.runner.timeout = Millis{ms};
    read(*it, "output_cap_bytes", c.runner.output_cap, "runner");
    std::string root;
    read(*it, "workspace_root", root, "runner");
    if (!root.empty()) c.runner.workspace_root = resolve(base, root);
  }
  if (auto it = j.find("threads"); it != j.end()) {
    only_keys(*it, "threads", {"sessions", "providers", "http"});
    read(*it, "sessions", c.session_threads, "threads");
    read(*it, "providers", c.provider_threads, "threads");
    read(*it, "http", c.http_threads, "threads");
  }
  if (c.port < 0 || c.port > 65535) throw Error(ErrorCode::configuration, "port out of range");
  return c;
}

ServerConfig load_server_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::configuration, "cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false, true);
  if (j.is_discarded()) throw Error(ErrorCode::configuration, path.string() + " is not valid JSON");
  return server_config_from_json(j, path.parent_path());
}

json to_json(const ServerConfig& c) {
  json j{{"host", c.host},
         {"port", c.port},
         {"telemetry", c.telemetry_file ? json{{"file", c.telemetry_file->string()}}
                                        : json{{"dir", c.telemetry_dir.string()}}},
         {"provider",
          {{"kind", c.provider_kind},
           {"base_url", c.http.base_url},
           {"path", c.http.path},
           {"model", c.http.model},
           {"temperature", c.http.temperature},
           {"timeout_ms", c.http.timeout.count()},
           {"key_env", c.http.key_env},
           {"fixtures_dir", c.scripted_dir.string()}}},
         {"runner",
          {{"enabled", c.runner_enabled},
           {"command", c.runner.command_template},
           {"filename", c.runner.filename},
           {"timeout_ms", c.runner.timeout.count()},
           {"output_cap_bytes", c.runner.output_cap},
           {"error_pattern", c.runner.error_pattern}}},
         {"log_provider_io", c.log_provider_io},
         {"threads",
          {{"sessions", c.session_threads}, {"providers", c.provider_threads}, {"http", c.http_threads}}},
         {"tick_ms", c.tick.count()}};
  if (c.conditions_file) j["conditions_file"] = c.conditions_file->string();
  return j;
}

}  // namespace proactive::gateway
