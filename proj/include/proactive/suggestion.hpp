#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/types.hpp"

namespace proactive {

/// The closed set of suggestion types a proactive batch may contain.
enum class Category {
  explain_code,
  brainstorm_functionality,
  complete_code,
  documentation_pointer,
  debug_latent,
  debug_runtime,
  add_tests,
  improve_efficiency,
};

inline constexpr std::array<Category, 8> kAllCategories = {
    Category::explain_code,         Category::brainstorm_functionality,
    Category::complete_code,        Category::documentation_pointer,
    Category::debug_latent,         Category::debug_runtime,
    Category::add_tests,            Category::improve_efficiency,
};

/// Categories a debugging batch may contain.
inline constexpr std::array<Category, 3> kDebugCategories = {
    Category::debug_runtime, Category::debug_latent, Category::explain_code};

/// Wire identifier, e.g. "add_tests".
std::string_view wire_name(Category c);
/// Human label shown at the start of a card, e.g. "Adding unit tests".
std::string_view display_label(Category c);

/// Accepts the wire name or the display label, case-insensitively, with
/// '-', ' ' and '_' treated alike. Parentheses in labels are ignored.
std::optional<Category> category_from_string(std::string_view s);

enum class SuggestionState { collapsed, expanded, accepted, deleted };
enum class SuggestionOrigin { proactive_standard, proactive_debug, manual_request };

std::string_view to_string(SuggestionState s);
std::string_view to_string(SuggestionOrigin o);

inline bool is_terminal(SuggestionState s) {
  return s == SuggestionState::accepted || s == SuggestionState::deleted;
}

/// Parsed content of one suggestion, before it is given an identity.
struct SuggestionContent {
  Category category = Category::explain_code;
  std::string summary;
  std::optional<std::string> code;
  std::vector<std::string> explanation;

  friend bool operator==(const SuggestionContent&, const SuggestionContent&) = default;
};

inline constexpr std::size_t kMaxExplanationBullets = 4;

struct Suggestion {
  SuggestionId id;
  BatchId batch_id;
  SuggestionContent content;
  SuggestionOrigin origin = SuggestionOrigin::proactive_standard;
  SuggestionState state = SuggestionState::collapsed;
};

}  // namespace proactive
