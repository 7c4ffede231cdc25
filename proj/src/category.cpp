#include "proactive/suggestion.hpp"

#include <cctype>

#include "proactive/text.hpp"

namespace proactive {

std::string_view wire_name(Category c) {
  switch (c) {
    case Category::explain_code: return "explain_code";
    case Category::brainstorm_functionality: return "brainstorm_functionality";
    case Category::complete_code: return "complete_code";
    case Category::documentation_pointer: return "documentation_pointer";
    case Category::debug_latent: return "debug_latent";
    case Category::debug_runtime: return "debug_runtime";
    case Category::add_tests: return "add_tests";
    case Category::improve_efficiency: return "improve_efficiency";
  }
  return "";
}

std::string_view display_label(Category c) {
  switch (c) {
    case Category::explain_code: return "Explaining existing code";
    case Category::brainstorm_functionality: return "Brainstorming new functionality";
    case Category::complete_code: return "Completing unfinished code";
    case Category::documentation_pointer: return "Pointers to documentation";
    case Category::debug_latent: return "Debugging (Latent errors)";
    case Category::debug_runtime: return "Debugging (Runtime errors)";
    case Category::add_tests: return "Adding unit tests";
    case Category::improve_efficiency: return "Improving efficiency and modularity";
  }
  return "";
}

namespace {

// Lowercase, separators folded to '_', parentheses dropped.
std::string normalize(std::string_view s) {
  std::string out;
  bool pending_sep = false;
  for (char raw : text::trim(s)) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (c == '(' || c == ')') continue;
    if (c == ' ' || c == '-' || c == '_' || c == '\t') {
      pending_sep = !out.empty();
      continue;
    }
    if (pending_sep) out.push_back('_');
    pending_sep = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::optional<Category> category_from_string(std::string_view s) {
  const auto key = normalize(s);
  if (key.empty()) return std::nullopt;
  for (auto c : kAllCategories) {
    if (key == wire_name(c) || key == normalize(display_label(c))) return c;
  }
  return std::nullopt;
}

std::string_view to_string(SuggestionState s) {
  switch (s) {
    case SuggestionState::collapsed: return "collapsed";
    case SuggestionState::expanded: return "expanded";
    case SuggestionState::accepted: return "accepted";
    case SuggestionState::deleted: return "deleted";
  }
  return "?";
}

std::string_view to_string(SuggestionOrigin o) {
  switch (o) {
    case SuggestionOrigin::proactive_standard: return "proactive_standard";
    case SuggestionOrigin::proactive_debug: return "proactive_debug";
    case SuggestionOrigin::manual_request: return "manual_request";
  }
  return "?";
}

}  // namespace proactive
