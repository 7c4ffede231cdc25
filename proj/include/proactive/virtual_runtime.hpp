#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "proactive/provider.hpp"
#include "proactive/runner.hpp"
#include "proactive/session.hpp"

namespace proactive {

/// Drives one Session on a virtual clock. Provider and runner calls are made
/// synchronously when the session asks for them; their completions are
/// delivered at request time plus the reported latency. At equal timestamps
/// completions come first, then scripted inputs, then the clock tick.
class VirtualRuntime {
 public:
  using Input = std::function<Effects(Session&, Timestamp)>;
  /// Overrides when a call (or run) completes; nullopt keeps the latency.
  using CompletionClock = std::function<std::optional<Timestamp>(std::uint64_t id, bool is_run)>;

  struct Options {
    /// 0 disables the periodic tick.
    Millis tick{1000};
    /// Extra tick instants, in addition to the periodic ones.
    std::vector<Timestamp> extra_ticks;
    CompletionClock completion_at;
    /// Latency used for provider failures that do not report one.
    Millis default_failure_latency{1000};
  };

  VirtualRuntime(Session& session, Provider& provider, Runner* runner);
  VirtualRuntime(Session& session, Provider& provider, Runner* runner, Options opts);

  /// Schedules a user input. Inputs at the same instant run in the order
  /// they were scheduled.
  void at(Timestamp ts, Input fn);
  /// Processes everything up to and including `until`.
  void run_until(Timestamp until);

  Timestamp now() const { return now_; }
  /// Messages of inputs that threw. Completions never throw.
  const std::vector<std::string>& errors() const { return errors_; }
  std::size_t provider_calls() const { return provider_calls_; }

 private:
  struct Item {
    Timestamp ts;
    int phase;
    std::uint64_t order;
    std::function<Effects()> fn;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const {
      if (a.ts != b.ts) return a.ts > b.ts;
      if (a.phase != b.phase) return a.phase > b.phase;
      return a.order > b.order;
    }
  };

  void push(Timestamp ts, int phase, std::function<Effects()> fn);
  void dispatch(const Effects& effects, Timestamp ts);
  Timestamp when(std::uint64_t id, bool is_run, Timestamp requested, Millis latency) const;
  ProviderOutcome call(const PromptBundle& bundle);

  Session& session_;
  Provider& provider_;
  Runner* runner_;
  Options opts_;
  std::priority_queue<Item, std::vector<Item>, Later> queue_;
  std::uint64_t order_ = 0;
  Timestamp now_;
  Timestamp next_tick_;
  std::size_t next_extra_ = 0;
  std::vector<std::string> errors_;
  std::size_t provider_calls_ = 0;
};

}  // namespace proactive
