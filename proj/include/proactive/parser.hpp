#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/suggestion.hpp"

namespace proactive {

struct ParseOutcome {
  std::vector<SuggestionContent> suggestions;
  /// Entries that were present but rejected (unknown or disallowed type,
  /// missing summary, not an object, ...).
  int warnings = 0;
  /// "json", "numbered_list" or "none".
  std::string format = "none";

  bool failed() const { return suggestions.empty(); }
};

/// Parses a model response into at most `max_n` suggestions, keeping the
/// response order. Reads a fenced JSON array first and falls back to a
/// numbered list. Never throws; zero valid entries means failure.
ParseOutcome parse_suggestions(std::string_view raw, int max_n,
                               std::span<const Category> allowed = kAllCategories);

/// Summary as displayed: one line, starting with the category label.
std::string normalize_summary(Category c, std::string_view summary);

/// First non-empty fenced code block of a preview response.
std::optional<std::string> extract_code_block(std::string_view raw);

}  // namespace proactive
