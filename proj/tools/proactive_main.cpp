#include <csignal>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "proactive/audit.hpp"
#include "proactive/error.hpp"
#include "proactive/gateway/server.hpp"
#include "proactive/json_codec.hpp"
#include "proactive/metrics.hpp"
#include "proactive/replay.hpp"
#include "proactive/schedule.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int serve(const std::string& config_path, const std::string& host, int port) {
  using namespace proactive::gateway;
  ServerConfig cfg = config_path.empty() ? ServerConfig{} : load_server_config(config_path);
  if (!host.empty()) cfg.host = host;
  if (port >= 0) cfg.port = port;
  Server server(cfg, build_dependencies(cfg));
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const int bound = server.start();
  std::cerr << "listening on " << cfg.host << ":" << bound << " (provider " << cfg.provider_kind
            << ", runner " << (cfg.runner_enabled ? "on" : "off") << ")\n";
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  std::cerr << "shutting down\n";
  server.stop();
  return 0;
}

int analyze(const std::vector<std::string>& paths, bool by_condition, bool by_category,
            bool per_task, const std::string& format, const std::string& weight) {
  using namespace proactive;
  std::vector<std::filesystem::path> files(paths.begin(), paths.end());
  auto m = compute_metrics(files, weight == "participant" ? Weighting::participant : Weighting::task);
  const auto fmt = format == "csv" ? TableFormat::csv : TableFormat::table;
  std::cout << format_metrics(m, fmt, by_condition);
  if (by_category) std::cout << '\n' << format_categories(m, fmt, by_condition);
  if (per_task) std::cout << '\n' << format_tasks(m, fmt);
  if (m.malformed_lines > 0) std::cerr << "warning: skipped " << m.malformed_lines << " malformed line(s)\n";
  return 0;
}

int replay(const std::string& path, const std::string& provider_spec) {
  using namespace proactive;
  ReplayOptions opts;
  if (provider_spec.rfind("scripted:", 0) == 0) {
    opts.provider = std::shared_ptr<Provider>(ScriptedProvider::from_directory(provider_spec.substr(9)));
  } else if (provider_spec != "log") {
    throw Error(ErrorCode::validation, "--provider must be 'log' or 'scripted:<dir>'");
  }
  auto result = replay_session(read_log_file(path), opts);
  std::cout << result.describe();
  if (result.identical()) std::cout << '\n';
  return result.identical() ? 0 : 1;
}

int audit(const std::string& path) {
  auto report = proactive::audit_log(proactive::read_log_file(path));
  for (const auto& p : report.problems) std::cout << p << '\n';
  std::cout << (report.ok() ? "audit passed\n" : "audit failed\n");
  return report.ok() ? 0 : 1;
}

int schedule(std::uint64_t seed, int count, bool as_json) {
  using namespace proactive;
  const auto tasks = TaskRegistry::builtin();
  for (int i = 0; i < count; ++i) {
    auto s = assign_condition(seed + static_cast<std::uint64_t>(i), tasks);
    if (as_json) {
      std::cout << to_json(s).dump() << '\n';
      continue;
    }
    std::cout << "seed " << s.seed << ": variant " << s.proactive_variant << ", "
              << (s.proactive_first ? "proactive first" : "baseline first") << '\n';
    for (int b = 0; b < 2; ++b) {
      const auto& blk = s.blocks[b];
      std::cout << "  block " << b + 1 << " [" << blk.condition << "]: " << blk.task_ids[0] << " ("
                << to_string(blk.task_types[0]) << "), " << blk.task_ids[1] << " ("
                << to_string(blk.task_types[1]) << ")\n";
    }
  }
  return 0;
}

int conditions(const std::string& file) {
  proactive::ConditionRegistry reg;
  if (!file.empty()) reg.load_file(file);
  for (const auto& n : reg.names()) std::cout << proactive::format_condition(reg.get(n)) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proactive programming-assistant service and analysis tools"};
  app.require_subcommand(1);

  std::string config_path, host;
  int port = -1;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--config", config_path, "Server config (JSON)")->check(CLI::ExistingFile);
  serve_cmd->add_option("--host", host, "Override the bind address");
  serve_cmd->add_option("--port", port, "Override the port (0 picks a free one)");

  std::vector<std::string> logs;
  bool by_condition = false, by_category = false, per_task = false;
  std::string format = "table", weight = "task";
  auto* analyze_cmd = app.add_subcommand("analyze", "Interaction metrics from telemetry logs");
  analyze_cmd->add_option("logs", logs, "Log files")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_flag("--by-condition", by_condition, "One row per condition");
  analyze_cmd->add_flag("--by-category", by_category, "Accepted suggestions per category");
  analyze_cmd->add_flag("--tasks", per_task, "Raw per-task counts");
  analyze_cmd->add_option("--format", format, "table or csv")->check(CLI::IsMember({"table", "csv"}));
  analyze_cmd->add_option("--weight", weight, "Pool samples per task or per participant")
      ->check(CLI::IsMember({"task", "participant"}));

  std::string replay_path, provider_spec = "log";
  auto* replay_cmd = app.add_subcommand("replay", "Replay a session log and compare");
  replay_cmd->add_option("log", replay_path, "Log of one session")->required()->check(CLI::ExistingFile);
  replay_cmd->add_option("--provider", provider_spec, "log (recorded replies) or scripted:<dir>");

  std::string audit_path;
  auto* audit_cmd = app.add_subcommand("audit", "Check a log for internal consistency");
  audit_cmd->add_option("log", audit_path, "Log file")->required()->check(CLI::ExistingFile);

  std::uint64_t seed = 0;
  int count = 1;
  bool as_json = false;
  auto* schedule_cmd = app.add_subcommand("schedule", "Condition and task order for a participant");
  schedule_cmd->add_option("--seed", seed, "Participant seed")->required();
  schedule_cmd->add_option("--count", count, "Consecutive seeds to print")->check(CLI::PositiveNumber);
  schedule_cmd->add_flag("--json", as_json, "One JSON object per line");

  std::string conditions_file;
  auto* conditions_cmd = app.add_subcommand("conditions", "Print the condition registry");
  conditions_cmd->add_option("--file", conditions_file, "Extra condition file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*serve_cmd) return serve(config_path, host, port);
    if (*analyze_cmd) return analyze(logs, by_condition, by_category, per_task, format, weight);
    if (*replay_cmd) return replay(replay_path, provider_spec);
    if (*audit_cmd) return audit(audit_path);
    if (*schedule_cmd) return schedule(seed, count, as_json);
    if (*conditions_cmd) return conditions(conditions_file);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
