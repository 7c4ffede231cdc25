#include "proactive/virtual_runtime.hpp"

#include <algorithm>

#include "proactive/error.hpp"

namespace proactive {

namespace {
constexpr int kCompletionPhase = 0;
constexpr int kInputPhase = 1;
constexpr int kTickPhase = 2;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

VirtualRuntime::VirtualRuntime(Session& session, Provider& provider, Runner* runner)
    : VirtualRuntime(session, provider, runner, Options{}) {}

VirtualRuntime::VirtualRuntime(Session& session, Provider& provider, Runner* runner, Options opts)
    : session_(session),
      provider_(provider),
      runner_(runner),
      opts_(std::move(opts)),
      now_(session.created_at()),
      next_tick_(session.created_at() + opts_.tick) {
  std::sort(opts_.extra_ticks.begin(), opts_.extra_ticks.end());
}

void VirtualRuntime::push(Timestamp ts, int phase, std::function<Effects()> fn) {
  queue_.push(Item{ts, phase, order_++, std::move(fn)});
}

void VirtualRuntime::at(Timestamp ts, Input fn) {
  if (ts < now_)
    throw Error(ErrorCode::contract_violation, "input scheduled in the past");
  push(ts, kInputPhase, [this, ts, fn = std::move(fn)] { return fn(session_, ts); });
}

ProviderOutcome VirtualRuntime::call(const PromptBundle& bundle) {
  ++provider_calls_;
  try {
    return ProviderOutcome::ok(provider_.complete(bundle));
  } catch (const ProviderError& e) {
    auto latency = e.latency().count() > 0 ? e.latency() : opts_.default_failure_latency;
    return ProviderOutcome::failed(e.what(), latency);
  } catch (const std::exception& e) {
    return ProviderOutcome::failed(e.what(), opts_.default_failure_latency);
  }
}

Timestamp VirtualRuntime::when(std::uint64_t id, bool is_run, Timestamp requested,
                               Millis latency) const {
  if (opts_.completion_at)
    if (auto t = opts_.completion_at(id, is_run)) return std::max(*t, requested);
  return requested + std::max(latency, Millis{0});
}

void VirtualRuntime::dispatch(const Effects& effects, Timestamp ts) {
  for (const auto& effect : effects) {
    std::visit(
        overloaded{
            [&](const GenerateSuggestions& g) {
              auto outcome = call(g.bundle);
              auto latency = outcome.response ? outcome.response->latency : outcome.error_latency;
              push(when(g.call_id, false, ts, latency), kCompletionPhase,
                   [this, g, outcome = std::move(outcome)]() mutable {
                     return session_.on_suggestions(g.token, g.call_id, std::move(outcome), now_);
                   });
            },
            [&](const RequestChatReply& c) {
              auto outcome = call(c.bundle);
              auto latency = outcome.response ? outcome.response->latency : outcome.error_latency;
              push(when(c.call_id, false, ts, latency), kCompletionPhase,
                   [this, id = c.call_id, outcome = std::move(outcome)]() mutable {
                     return session_.on_chat_reply(id, std::move(outcome), now_);
                   });
            },
            [&](const RequestPreview& p) {
              auto outcome = call(p.bundle);
              auto latency = outcome.response ? outcome.response->latency : outcome.error_latency;
              push(when(p.call_id, false, ts, latency), kCompletionPhase,
                   [this, id = p.call_id, outcome = std::move(outcome)]() mutable {
                     return session_.on_preview(id, std::move(outcome), now_);
                   });
            },
            [&](const RunProgram& r) {
              if (!runner_) {
                errors_.push_back("run requested without a runner");
                return;
              }
              RunResult result = runner_->run(r.code);
              push(when(r.run_id, true, ts, result.duration), kCompletionPhase,
                   [this, id = r.run_id, result = std::move(result)]() mutable {
                     return session_.on_run_result(id, std::move(result), now_);
                   });
            },
        },
        effect);
  }
}

void VirtualRuntime::run_until(Timestamp until) {
  for (;;) {
    // Materialize the next tick lazily so the queue stays small.
    std::optional<Timestamp> tick;
    if (opts_.tick.count() > 0) tick = next_tick_;
    if (next_extra_ < opts_.extra_ticks.size() &&
        (!tick || opts_.extra_ticks[next_extra_] < *tick))
      tick = opts_.extra_ticks[next_extra_];

    const bool have_item = !queue_.empty() && queue_.top().ts <= until;
    const bool tick_due = tick && *tick <= until &&
                          (!have_item || *tick < queue_.top().ts ||
                           (*tick == queue_.top().ts && queue_.top().phase > kTickPhase));
    if (tick_due) {
      const Timestamp t = *tick;
      if (next_extra_ < opts_.extra_ticks.size() && opts_.extra_ticks[next_extra_] == t) {
        while (next_extra_ < opts_.extra_ticks.size() && opts_.extra_ticks[next_extra_] == t)
          ++next_extra_;
      }
      if (opts_.tick.count() > 0 && next_tick_ == t) next_tick_ = next_tick_ + opts_.tick;
      now_ = t;
      dispatch(session_.tick(t), t);
      continue;
    }
    if (!have_item) break;

    Item item = queue_.top();
    queue_.pop();
    now_ = item.ts;
    try {
      dispatch(item.fn(), item.ts);
    } catch (const std::exception& e) {
      if (item.phase != kInputPhase) throw;
      errors_.push_back(std::to_string(item.ts.ms) + " ms: " + e.what());
    }
  }
  now_ = std::max(now_, until);
}

}  // namespace proactive
