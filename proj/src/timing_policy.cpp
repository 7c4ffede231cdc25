#include "proactive/timing_policy.hpp"

#include "proactive/error.hpp"

namespace proactive {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::acceleration: return "acceleration";
    case Mode::exploration: return "exploration";
    case Mode::debugging: return "debugging";
  }
  return "?";
}

std::string_view to_string(GenerationKind k) {
  return k == GenerationKind::standard ? "standard" : "debug";
}

std::string_view to_string(GenerationOrigin o) {
  return o == GenerationOrigin::proactive ? "proactive" : "manual";
}

std::string_view to_string(ActivityKind k) {
  switch (k) {
    case ActivityKind::user_typing: return "user_typing";
    case ActivityKind::chat_typing: return "chat_typing";
    case ActivityKind::chat_send: return "chat_send";
    case ActivityKind::chat_response_arrived: return "chat_response_arrived";
    case ActivityKind::suggestion_interaction: return "suggestion_interaction";
    case ActivityKind::run_completed: return "run_completed";
    case ActivityKind::manual_request: return "manual_request";
    case ActivityKind::clock_tick: return "clock_tick";
    case ActivityKind::generation_completed: return "generation_completed";
    case ActivityKind::generation_failed: return "generation_failed";
  }
  return "?";
}

std::string_view to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::none: return "none";
    case DecisionKind::start_generation: return "start_generation";
    case DecisionKind::display_batch: return "display_batch";
    case DecisionKind::discard_batch: return "discard_batch";
  }
  return "?";
}

TimingState TimingState::starting_at(Timestamp t) {
  TimingState s;
  s.last_activity = t;
  s.last_event = t;
  return s;
}

namespace {

bool elapsed_at_least(const std::optional<Timestamp>& since, Timestamp now, Millis d) {
  return !since || (now - *since) >= d;
}

void invalidate(TimingState& s) {
  ++s.generation_token.value;
  s.pending.reset();
}

Decision start(TimingState& s, GenerationKind kind, GenerationOrigin origin, Timestamp ts) {
  ++s.generation_token.value;
  s.pending = PendingGeneration{s.generation_token, kind, origin, ts};
  return Decision{DecisionKind::start_generation, kind, origin, s.generation_token};
}

bool typing_live(const TimingState& s, const ConditionConfig& cfg, Timestamp now) {
  return s.typing_active && !elapsed_at_least(s.last_typing, now, cfg.typing_grace());
}

}  // namespace

Mode classify_mode(const TimingState& s, const ConditionConfig& cfg, Timestamp now) {
  if (s.run_error_unresolved) return Mode::debugging;
  if (typing_live(s, cfg, now) || s.awaiting_chat_reply) return Mode::acceleration;
  if (!elapsed_at_least(s.last_activity, now, cfg.idle_threshold)) return Mode::acceleration;
  return Mode::exploration;
}

TimingStep on_event(const TimingState& state, const ConditionConfig& cfg,
                    const ActivityEvent& ev) {
  if (state.last_event && ev.ts < *state.last_event) {
    throw Error(ErrorCode::contract_violation,
                "activity event at " + std::to_string(ev.ts.ms) +
                    " ms precedes previous event at " +
                    std::to_string(state.last_event->ms) + " ms");
  }

  TimingState s = state;
  s.last_event = ev.ts;
  if (s.typing_active && !typing_live(s, cfg, ev.ts)) s.typing_active = false;

  Decision d;
  const Timestamp t = ev.ts;
  switch (ev.kind) {
    case ActivityKind::user_typing:
      s.typing_active = true;
      s.last_typing = t;
      s.last_activity = t;
      s.run_error_unresolved = false;
      invalidate(s);
      break;

    case ActivityKind::chat_typing:
      s.typing_active = true;
      s.last_typing = t;
      s.last_activity = t;
      invalidate(s);
      break;

    case ActivityKind::chat_send:
      s.typing_active = false;
      s.awaiting_chat_reply = true;
      s.last_activity = t;
      s.last_relevant = t;
      invalidate(s);
      break;

    case ActivityKind::chat_response_arrived:
      s.awaiting_chat_reply = false;
      s.last_activity = t;
      s.last_relevant = t;
      break;

    case ActivityKind::suggestion_interaction:
      s.last_activity = t;
      s.last_relevant = t;
      break;

    case ActivityKind::run_completed:
      s.typing_active = false;
      s.last_activity = t;
      if (ev.is_error) {
        s.run_error_unresolved = true;
        if (cfg.proactive_enabled) {
          d = start(s, GenerationKind::debug, GenerationOrigin::proactive, t);
          // Keeps a standard batch from landing right after the debug one.
          s.last_relevant = t;
        }
      }
      break;

    case ActivityKind::manual_request:
      if (cfg.proactive_enabled) {
        s.typing_active = false;
        d = start(s, GenerationKind::standard, GenerationOrigin::manual, t);
      }
      break;

    case ActivityKind::generation_completed: {
      const bool current = s.pending && s.pending->token == ev.token &&
                           ev.token == s.generation_token;
      if (!current) {
        d = Decision{DecisionKind::discard_batch, GenerationKind::standard,
                     GenerationOrigin::proactive, ev.token};
        break;
      }
      const PendingGeneration p = *s.pending;
      s.pending.reset();
      if (s.typing_active || s.awaiting_chat_reply) {
        d = Decision{DecisionKind::discard_batch, p.kind, p.origin, ev.token};
      } else {
        s.last_relevant = t;
        d = Decision{DecisionKind::display_batch, p.kind, p.origin, ev.token};
      }
      break;
    }

    case ActivityKind::generation_failed:
      if (s.pending && s.pending->token == ev.token) {
        s.pending.reset();
        s.last_relevant = t;
      }
      break;

    case ActivityKind::clock_tick:
      if (cfg.proactive_enabled && !s.typing_active && !s.awaiting_chat_reply &&
          !s.pending && elapsed_at_least(s.last_activity, t, cfg.idle_threshold) &&
          elapsed_at_least(s.last_relevant, t, cfg.cooldown)) {
        d = start(s, GenerationKind::standard, GenerationOrigin::proactive, t);
      }
      break;
  }

  s.mode = classify_mode(s, cfg, t);
  return TimingStep{std::move(s), d};
}

TimingStep on_manual_request(const TimingState& state, const ConditionConfig& cfg,
                             Timestamp ts) {
  if (!cfg.proactive_enabled)
    throw Error(ErrorCode::unsupported_in_condition,
                "suggestion requests are not available in condition '" + cfg.name + "'");
  return on_event(state, cfg, ActivityEvent::manual(ts));
}

}  // namespace proactive
