#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/types.hpp"

namespace proactive {

struct CodeDocument {
  DocId id;
  std::string text;
  std::int64_t version = 1;
};

enum class ChatRole { user, assistant, accepted_suggestion };
std::string_view to_string(ChatRole r);

struct ChatMessage {
  ChatRole role = ChatRole::user;
  std::string content;
  std::vector<std::string> code_blocks;
  Timestamp ts;
  /// Set for accepted_suggestion messages.
  std::optional<SuggestionId> suggestion_id;
};

struct RunResult {
  std::string stdout_text;
  std::string stderr_text;
  int exit_status = 0;
  bool is_error = false;
  bool timed_out = false;
  Millis duration{0};
};

}  // namespace proactive
