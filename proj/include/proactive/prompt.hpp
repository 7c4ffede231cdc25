#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/condition.hpp"
#include "proactive/records.hpp"
#include "proactive/suggestion.hpp"

namespace proactive {

enum class PromptKind { standard, debug, chat, preview };
std::string_view to_string(PromptKind k);

enum class SegmentRole { system, history, instruction };
std::string_view to_string(SegmentRole r);

struct PromptSegment {
  SegmentRole role = SegmentRole::instruction;
  std::string content;
  /// For history segments: who said it.
  ChatRole speaker = ChatRole::user;

  friend bool operator==(const PromptSegment&, const PromptSegment&) = default;
};

struct PromptBundle {
  PromptKind kind = PromptKind::standard;
  std::vector<PromptSegment> messages;
  int max_suggestions = 0;

  std::vector<const PromptSegment*> segments(SegmentRole role) const;
  /// Stable serialization used for request keys and logging.
  std::string canonical() const;
};

/// Inputs every prompt draws from.
struct PromptContext {
  std::span<const ChatMessage> chat;
  std::string_view code;
};

inline constexpr std::size_t kMaxTerminalBytes = 8 * 1024;
inline constexpr std::size_t kMaxStdoutTailBytes = 2 * 1024;

/// History segments for the most recent `limit` chat messages.
std::vector<PromptSegment> history_segments(std::span<const ChatMessage> chat, int limit);

/// History, then the taxonomy scaffold as a system segment when
/// cfg.guiding_prompts, then one instruction with the code and the response
/// format.
PromptBundle build_standard_prompt(const PromptContext& ctx, const ConditionConfig& cfg);

/// History, then one instruction holding the code, an errors-first
/// directive, the terminal output and the response format restricted to
/// the debugging categories. Throws Error(contract_violation) unless
/// run.is_error.
PromptBundle build_debug_prompt(const PromptContext& ctx, const ConditionConfig& cfg,
                                const RunResult& run);

/// Plain chat turn. `include_code` is false in the baseline condition.
PromptBundle build_chat_prompt(const PromptContext& ctx, const ConditionConfig& cfg,
                               bool include_code);

/// Asks for the whole file rewritten with `s` integrated, in one fenced block.
PromptBundle build_preview_prompt(std::string_view code, const SuggestionContent& s);

}  // namespace proactive
