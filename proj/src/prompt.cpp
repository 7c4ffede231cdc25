#include "proactive/prompt.hpp"

#include <algorithm>

#include "json.hpp"
#include "proactive/error.hpp"
#include "proactive/text.hpp"

namespace proactive {

std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::standard: return "standard";
    case PromptKind::debug: return "debug";
    case PromptKind::chat: return "chat";
    case PromptKind::preview: return "preview";
  }
  return "?";
}

std::string_view to_string(SegmentRole r) {
  switch (r) {
    case SegmentRole::system: return "system";
    case SegmentRole::history: return "history";
    case SegmentRole::instruction: return "instruction";
  }
  return "?";
}

std::string_view to_string(ChatRole r) {
  switch (r) {
    case ChatRole::user: return "user";
    case ChatRole::assistant: return "assistant";
    case ChatRole::accepted_suggestion: return "accepted_suggestion";
  }
  return "?";
}

std::vector<const PromptSegment*> PromptBundle::segments(SegmentRole role) const {
  std::vector<const PromptSegment*> out;
  for (const auto& m : messages)
    if (m.role == role) out.push_back(&m);
  return out;
}

std::string PromptBundle::canonical() const {
  nlohmann::json j;
  j["kind"] = std::string(to_string(kind));
  j["max_suggestions"] = max_suggestions;
  auto& msgs = j["messages"] = nlohmann::json::array();
  for (const auto& m : messages) {
    nlohmann::json seg{{"role", std::string(to_string(m.role))}, {"content", m.content}};
    if (m.role == SegmentRole::history) seg["speaker"] = std::string(to_string(m.speaker));
    msgs.push_back(std::move(seg));
  }
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

namespace {

constexpr std::string_view kTaxonomyIntro =
    "You are a proactive programming assistant embedded next to the user's code "
    "editor. Without being asked, you offer short, useful suggestions about the "
    "code the user is writing. Consider a diverse mix of the following "
    "suggestion types and pick the ones that fit the current code best:\n";

std::string_view category_hint(Category c) {
  switch (c) {
    case Category::explain_code:
      return "clarify what a confusing part of the existing code does";
    case Category::brainstorm_functionality:
      return "propose a new feature or capability that would fit the program";
    case Category::complete_code:
      return "finish a function or block the user has left incomplete";
    case Category::documentation_pointer:
      return "point to the relevant API, syntax, or library documentation";
    case Category::debug_latent:
      return "find a bug that has not surfaced yet and show the fix";
    case Category::debug_runtime:
      return "explain and fix an error raised when the code runs";
    case Category::add_tests:
      return "write unit tests for code that lacks them";
    case Category::improve_efficiency:
      return "make the code faster, simpler, or more modular";
  }
  return "";
}

std::string taxonomy_scaffold() {
  std::string out(kTaxonomyIntro);
  for (auto c : kAllCategories) {
    out += "- ";
    out += display_label(c);
    out += " (type \"";
    out += wire_name(c);
    out += "\"): ";
    out += category_hint(c);
    out += '\n';
  }
  out +=
      "Do not repeat suggestions or questions that already appear in the "
      "conversation.";
  return out;
}

template <typename Range>
std::string format_directions(int max_n, const Range& allowed) {
  std::string types;
  for (auto c : allowed) {
    if (!types.empty()) types += ", ";
    types += '"';
    types += wire_name(c);
    types += '"';
  }
  return "Return at most " + std::to_string(max_n) +
         " suggestions as a single fenced ```json block holding an array. Each "
         "element is an object with the fields:\n"
         "- \"type\": one of " + types + "\n"
         "- \"summary\": one sentence describing the suggestion\n"
         "- \"code\": a code snippet, or omit the field when no code applies\n"
         "- \"explanation\": an array of at most 4 short bullet strings\n"
         "Order the array from most to least useful. Output nothing after the block.";
}

std::string code_section(std::string_view code) {
  std::string out = "Current code:\n```\n";
  out += code;
  if (!code.empty() && code.back() != '\n') out += '\n';
  out += "```\n";
  return out;
}

}  // namespace

std::vector<PromptSegment> history_segments(std::span<const ChatMessage> chat, int limit) {
  std::vector<PromptSegment> out;
  const std::size_t keep = static_cast<std::size_t>(std::max(limit, 0));
  const std::size_t first = chat.size() > keep ? chat.size() - keep : 0;
  for (std::size_t i = first; i < chat.size(); ++i) {
    out.push_back(PromptSegment{SegmentRole::history, chat[i].content, chat[i].role});
  }
  return out;
}

PromptBundle build_standard_prompt(const PromptContext& ctx, const ConditionConfig& cfg) {
  PromptBundle b;
  b.kind = PromptKind::standard;
  b.max_suggestions = cfg.suggestions_per_batch;
  b.messages = history_segments(ctx.chat, cfg.history_limit);
  if (cfg.guiding_prompts) {
    b.messages.push_back(PromptSegment{SegmentRole::system, taxonomy_scaffold()});
  }
  std::string instruction = code_section(ctx.code);
  instruction +=
      "\nLook at the code above and the conversation so far, and suggest what "
      "would help the user most right now.\n";
  instruction += format_directions(cfg.suggestions_per_batch, kAllCategories);
  b.messages.push_back(PromptSegment{SegmentRole::instruction, std::move(instruction)});
  return b;
}

PromptBundle build_debug_prompt(const PromptContext& ctx, const ConditionConfig& cfg,
                                const RunResult& run) {
  if (!run.is_error)
    throw Error(ErrorCode::contract_violation,
                "debug prompt requested for a run that did not error");
  PromptBundle b;
  b.kind = PromptKind::debug;
  b.max_suggestions = cfg.suggestions_per_batch;
  b.messages = history_segments(ctx.chat, cfg.history_limit);

  std::string instruction = code_section(ctx.code);
  instruction +=
      "\nThe user just ran this code and it failed. Focus on the error output "
      "below: explain what went wrong and how to fix it.\n";
  if (run.timed_out) instruction += "The run was stopped because it exceeded the time limit.\n";
  instruction += "Exit status: " + std::to_string(run.exit_status) + "\n";
  instruction += "Terminal errors:\n```\n";
  instruction += text::keep_tail(run.stderr_text, kMaxTerminalBytes);
  instruction += "\n```\n";
  if (!run.stdout_text.empty()) {
    instruction += "Terminal output (tail):\n```\n";
    instruction += text::keep_tail(run.stdout_text, kMaxStdoutTailBytes);
    instruction += "\n```\n";
  }
  instruction += format_directions(cfg.suggestions_per_batch, kDebugCategories);
  b.messages.push_back(PromptSegment{SegmentRole::instruction, std::move(instruction)});
  return b;
}

PromptBundle build_chat_prompt(const PromptContext& ctx, const ConditionConfig& cfg,
                               bool include_code) {
  PromptBundle b;
  b.kind = PromptKind::chat;
  std::string system =
      "You are a helpful programming assistant. Answer in natural language and "
      "include code snippets in fenced blocks where useful.";
  if (include_code) {
    system += "\nThe user is working on the following code.\n";
    system += code_section(ctx.code);
  }
  b.messages.push_back(PromptSegment{SegmentRole::system, std::move(system)});
  auto history = history_segments(ctx.chat, cfg.history_limit);
  b.messages.insert(b.messages.end(), history.begin(), history.end());
  return b;
}

PromptBundle build_preview_prompt(std::string_view code, const SuggestionContent& s) {
  PromptBundle b;
  b.kind = PromptKind::preview;
  std::string instruction = code_section(code);
  instruction += "\nIntegrate the following suggestion into the code above.\n";
  instruction += "Suggestion: " + s.summary + "\n";
  if (s.code) instruction += "Suggested code:\n```\n" + *s.code + "\n```\n";
  for (const auto& e : s.explanation) instruction += "- " + e + "\n";
  instruction +=
      "Return the complete updated file in a single fenced code block. Keep "
      "every unrelated line exactly as it is.";
  b.messages.push_back(PromptSegment{SegmentRole::instruction, std::move(instruction)});
  return b;
}

}  // namespace proactive
