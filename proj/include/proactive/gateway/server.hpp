#pragma once

#include <atomic>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "proactive/condition.hpp"
#include "proactive/gateway/server_config.hpp"
#include "proactive/gateway/session_host.hpp"
#include "proactive/tasks.hpp"
#include "proactive/telemetry.hpp"

namespace httplib {
class Server;
}

namespace proactive::gateway {

/// Collaborators of a Server; build_dependencies() derives them from a
/// config, tests construct them directly.
struct ServerDeps {
  std::shared_ptr<Provider> provider;
  /// Null disables /run.
  std::shared_ptr<Runner> runner;
  ConditionRegistry conditions;
  TaskRegistry tasks = TaskRegistry::builtin();
  SinkFactory sinks;
  Clock clock = wall_clock;
};

ServerDeps build_dependencies(const ServerConfig& cfg);

/// The HTTP surface. Routes are documented in the README.
class Server {
 public:
  Server(ServerConfig cfg, ServerDeps deps);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the configured host and port (0 picks a free port) and returns
  /// the bound port. Throws Error(configuration) on failure.
  int bind();
  /// Serves until stop(). bind() must have succeeded.
  void serve();
  /// bind() then serve() on a background thread.
  int start();
  void stop();
  int port() const { return port_; }

  std::shared_ptr<SessionHost> find(const SessionId& id) const;
  std::size_t session_count() const;

 private:
  void routes();
  void ticker();
  std::shared_ptr<SessionHost> host_or_throw(const std::string& id) const;

  ServerConfig cfg_;
  ServerDeps deps_;
  std::unique_ptr<httplib::Server> http_;
  WorkerPool session_pool_;
  WorkerPool io_pool_;
  int port_ = -1;

  mutable std::mutex sessions_mu_;
  std::map<SessionId, std::shared_ptr<SessionHost>> sessions_;

  std::atomic<bool> stopping_{false};
  std::mutex tick_mu_;
  std::condition_variable tick_cv_;
  std::thread tick_thread_;
  std::thread serve_thread_;
};

}  // namespace proactive::gateway
