#pragma once

#include <optional>
#include <string_view>

#include "proactive/condition.hpp"
#include "proactive/types.hpp"

namespace proactive {

/// What the user is doing, as far as suggestion timing is concerned.
enum class Mode { acceleration, exploration, debugging };

enum class GenerationKind { standard, debug };
enum class GenerationOrigin { proactive, manual };

std::string_view to_string(Mode m);
std::string_view to_string(GenerationKind k);
std::string_view to_string(GenerationOrigin o);

struct PendingGeneration {
  GenerationToken token;
  GenerationKind kind = GenerationKind::standard;
  GenerationOrigin origin = GenerationOrigin::proactive;
  Timestamp requested;

  friend bool operator==(const PendingGeneration&, const PendingGeneration&) = default;
};

/// Mutable timing record owned by one session. Absent timestamps mean
/// "never happened" (minus infinity).
struct TimingState {
  Mode mode = Mode::exploration;
  std::optional<Timestamp> last_activity;
  /// Last suggestion display, suggestion interaction, or chat.
  std::optional<Timestamp> last_relevant;
  std::optional<Timestamp> last_typing;
  bool typing_active = false;
  bool awaiting_chat_reply = false;
  /// Set by an erroring run, cleared by the next code edit.
  bool run_error_unresolved = false;
  GenerationToken generation_token;
  std::optional<PendingGeneration> pending;
  std::optional<Timestamp> last_event;

  /// Fresh state for a session that opened at `t`; the idle clock starts there.
  static TimingState starting_at(Timestamp t);

  friend bool operator==(const TimingState&, const TimingState&) = default;
};

enum class ActivityKind {
  user_typing,
  chat_typing,
  chat_send,
  chat_response_arrived,
  suggestion_interaction,
  run_completed,
  manual_request,
  clock_tick,
  generation_completed,
  generation_failed,
};

std::string_view to_string(ActivityKind k);

struct ActivityEvent {
  ActivityKind kind = ActivityKind::clock_tick;
  Timestamp ts;
  /// run_completed only.
  bool is_error = false;
  /// generation_completed / generation_failed only.
  GenerationToken token;

  static ActivityEvent make(ActivityKind k, Timestamp t, bool error = false,
                            GenerationToken tok = {}) {
    ActivityEvent e;
    e.kind = k;
    e.ts = t;
    e.is_error = error;
    e.token = tok;
    return e;
  }
  static ActivityEvent typing(Timestamp t) { return make(ActivityKind::user_typing, t); }
  static ActivityEvent chat_typing(Timestamp t) { return make(ActivityKind::chat_typing, t); }
  static ActivityEvent chat_send(Timestamp t) { return make(ActivityKind::chat_send, t); }
  static ActivityEvent chat_response(Timestamp t) {
    return make(ActivityKind::chat_response_arrived, t);
  }
  static ActivityEvent interaction(Timestamp t) {
    return make(ActivityKind::suggestion_interaction, t);
  }
  static ActivityEvent run(Timestamp t, bool error) {
    return make(ActivityKind::run_completed, t, error);
  }
  static ActivityEvent manual(Timestamp t) { return make(ActivityKind::manual_request, t); }
  static ActivityEvent tick(Timestamp t) { return make(ActivityKind::clock_tick, t); }
  static ActivityEvent completed(Timestamp t, GenerationToken tok) {
    return make(ActivityKind::generation_completed, t, false, tok);
  }
  static ActivityEvent failed(Timestamp t, GenerationToken tok) {
    return make(ActivityKind::generation_failed, t, false, tok);
  }
};

enum class DecisionKind { none, start_generation, display_batch, discard_batch };

std::string_view to_string(DecisionKind k);

struct Decision {
  DecisionKind kind = DecisionKind::none;
  GenerationKind generation = GenerationKind::standard;
  GenerationOrigin origin = GenerationOrigin::proactive;
  GenerationToken token;

  friend bool operator==(const Decision&, const Decision&) = default;
};

struct TimingStep {
  TimingState state;
  Decision decision;
};

/// The proactivity state machine. Pure: the result depends only on the
/// arguments. Throws Error(contract_violation) when `ev.ts` precedes the
/// previous event.
///
/// - typing (code or chat) bumps the token, dropping any pending generation
/// - standard generations start on a clock tick once the user has been idle
///   for idle_threshold and cooldown has passed since the last relevant event
/// - an erroring run starts a debug generation immediately
/// - a completion is displayed only if its token is current and the user is
///   neither typing nor waiting on a chat reply; otherwise it is discarded
TimingStep on_event(const TimingState& state, const ConditionConfig& cfg,
                    const ActivityEvent& ev);

/// Explicit request from the user. Bypasses idle and cooldown, supersedes
/// any pending generation. Throws Error(unsupported_in_condition) when the
/// condition is not proactive.
TimingStep on_manual_request(const TimingState& state, const ConditionConfig& cfg,
                             Timestamp ts);

Mode classify_mode(const TimingState& state, const ConditionConfig& cfg, Timestamp now);

}  // namespace proactive
