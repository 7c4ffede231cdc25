#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "proactive/gateway/serial_executor.hpp"
#include "proactive/provider.hpp"
#include "proactive/runner.hpp"
#include "proactive/session.hpp"

namespace proactive::gateway {

using Clock = std::function<Timestamp()>;

/// Epoch milliseconds from the system clock.
Timestamp wall_clock();

/// Frames queued for one push-channel subscriber.
class FrameChannel {
 public:
  explicit FrameChannel(std::size_t capacity = 4096) : capacity_(capacity) {}

  /// Closes the channel instead of growing past capacity; the client
  /// reconnects and gets a fresh state notice.
  void deliver(const PushFrame& f);
  /// Next frame, or nullopt after `timeout` or once closed.
  std::optional<PushFrame> wait(Millis timeout);
  void close();
  bool closed() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<PushFrame> frames_;
  std::size_t capacity_;
  bool closed_ = false;
};

/// One live session behind the HTTP surface. Every input and completion
/// runs on the session's serial executor; provider and runner calls run on
/// the I/O pool so request handling never waits on them.
class SessionHost : public std::enable_shared_from_this<SessionHost> {
 public:
  using Input = std::function<Effects(Session&, Timestamp)>;

  SessionHost(SessionId id, SessionOptions opts, std::shared_ptr<TelemetrySink> sink,
              std::shared_ptr<Provider> provider, std::shared_ptr<Runner> runner,
              WorkerPool& session_pool, WorkerPool& io_pool, Clock clock);

  const SessionId& id() const { return id_; }

  /// Runs a user input; the future carries its effects or its exception.
  std::future<Effects> input(Input fn);
  /// Runs a read-only query against the session state.
  std::future<nlohmann::json> query(std::function<nlohmann::json(const Session&)> fn);
  void tick();

  std::shared_ptr<FrameChannel> subscribe();
  void unsubscribe(const std::shared_ptr<FrameChannel>& ch);
  void close_channels();

  /// Completions that failed inside the session (telemetry errors).
  std::vector<std::string> background_errors() const;

 private:
  Timestamp now();
  void dispatch(const Effects& effects);
  void complete(std::function<Effects(Session&, Timestamp)> fn);
  ProviderOutcome call_provider(const PromptBundle& bundle);

  SessionId id_;
  std::unique_ptr<Session> session_;
  std::shared_ptr<Provider> provider_;
  std::shared_ptr<Runner> runner_;
  SerialExecutor strand_;
  WorkerPool& io_pool_;
  Clock clock_;
  Timestamp last_;

  mutable std::mutex channels_mu_;
  std::vector<std::shared_ptr<FrameChannel>> channels_;
  mutable std::mutex errors_mu_;
  std::vector<std::string> errors_;
};

}  // namespace proactive::gateway
