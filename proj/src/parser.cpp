#include "proactive/parser.hpp"

#include <algorithm>
#include <cctype>

#include "json.hpp"
#include "proactive/text.hpp"

namespace proactive {

namespace {

using nlohmann::json;

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(s[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : text::trim(s)) {
    if (c == '\n' || c == '\r' || c == '\t' || c == ' ') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out.push_back(' ');
    space = false;
    out.push_back(c);
  }
  return out;
}

std::string_view strip_bullet(std::string_view s) {
  s = text::trim(s);
  if (!s.empty() && (s[0] == '-' || s[0] == '*')) s = text::trim(s.substr(1));
  else if (s.rfind("\xE2\x80\xA2", 0) == 0) s = text::trim(s.substr(3));
  return s;
}

std::string strip_fences(std::string_view code) {
  auto blocks = text::fenced_blocks(code);
  if (blocks.size() == 1 && text::trim(code).rfind("```", 0) == 0) return blocks.front().body;
  return std::string(code);
}

std::optional<SuggestionContent> entry_from_json(const json& e,
                                                 std::span<const Category> allowed) {
  if (!e.is_object()) return std::nullopt;
  const json* type = nullptr;
  if (auto it = e.find("type"); it != e.end()) type = &*it;
  else if (auto it2 = e.find("category"); it2 != e.end()) type = &*it2;
  if (!type || !type->is_string()) return std::nullopt;
  auto cat = category_from_string(type->get_ref<const std::string&>());
  if (!cat || std::find(allowed.begin(), allowed.end(), *cat) == allowed.end())
    return std::nullopt;

  auto sit = e.find("summary");
  if (sit == e.end() || !sit->is_string()) return std::nullopt;
  SuggestionContent s;
  s.category = *cat;
  s.summary = normalize_summary(*cat, sit->get_ref<const std::string&>());
  if (s.summary.empty()) return std::nullopt;

  if (auto cit = e.find("code"); cit != e.end() && cit->is_string()) {
    auto code = strip_fences(cit->get_ref<const std::string&>());
    if (!text::trim(code).empty()) s.code = std::move(code);
  }

  auto add_bullet = [&](std::string_view b) {
    auto t = collapse_whitespace(strip_bullet(b));
    if (!t.empty() && s.explanation.size() < kMaxExplanationBullets)
      s.explanation.push_back(std::move(t));
  };
  if (auto xit = e.find("explanation"); xit != e.end()) {
    if (xit->is_array()) {
      for (const auto& b : *xit)
        if (b.is_string()) add_bullet(b.get_ref<const std::string&>());
    } else if (xit->is_string()) {
      for (const auto& line : text::split_lines(xit->get_ref<const std::string&>()))
        add_bullet(line);
    }
  }
  return s;
}

// Returns the entries of the first JSON array found, if any.
std::optional<json> find_json_array(std::string_view raw) {
  std::vector<std::string> candidates;
  for (auto& b : text::fenced_blocks(raw)) candidates.push_back(std::move(b.body));
  candidates.emplace_back(text::trim(raw));
  auto open = raw.find('[');
  auto close = raw.rfind(']');
  if (open != std::string_view::npos && close != std::string_view::npos && close > open)
    candidates.emplace_back(raw.substr(open, close - open + 1));

  for (const auto& c : candidates) {
    auto j = json::parse(c, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) continue;
    if (j.is_array()) return j;
    if (j.is_object()) {
      auto it = j.find("suggestions");
      if (it != j.end() && it->is_array()) return *it;
    }
  }
  return std::nullopt;
}

struct ListEntry {
  std::string header;
  std::vector<std::string> body;
};

bool numbered_header(std::string_view line, std::string& rest) {
  auto t = text::trim(line);
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i == 0 || i > 3 || i >= t.size() || (t[i] != '.' && t[i] != ')')) return false;
  auto r = text::trim(t.substr(i + 1));
  if (r.empty() || i + 1 >= t.size() || !std::isspace(static_cast<unsigned char>(t[i + 1])))
    return false;
  rest = std::string(r);
  return true;
}

std::string strip_emphasis(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '*' && i + 1 < s.size() && s[i + 1] == '*') {
      ++i;
      continue;
    }
    out.push_back(s[i]);
  }
  return std::string(text::trim(out));
}

// Splits "[type] summary", "type: summary", "Label - summary" into parts.
std::optional<std::pair<Category, std::string>> split_header(std::string_view header) {
  auto h = strip_emphasis(header);
  std::string_view hv = h;
  if (!hv.empty() && hv[0] == '[') {
    auto close = hv.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    auto cat = category_from_string(hv.substr(1, close - 1));
    if (!cat) return std::nullopt;
    return std::pair{*cat, std::string(text::trim(hv.substr(close + 1)))};
  }
  // Longest label or wire name that prefixes the header.
  std::optional<Category> best;
  std::size_t best_len = 0;
  for (auto c : kAllCategories) {
    for (auto name : {display_label(c), wire_name(c)}) {
      if (name.size() > best_len && starts_with_ci(hv, name)) {
        best = c;
        best_len = name.size();
      }
    }
  }
  if (best) {
    auto rest = text::trim(hv.substr(best_len));
    if (!rest.empty() && (rest[0] == ':' || rest[0] == '-')) rest = text::trim(rest.substr(1));
    return std::pair{*best, std::string(rest)};
  }
  auto colon = hv.find(':');
  if (colon != std::string_view::npos) {
    auto cat = category_from_string(hv.substr(0, colon));
    if (cat) return std::pair{*cat, std::string(text::trim(hv.substr(colon + 1)))};
  }
  return std::nullopt;
}

ParseOutcome parse_numbered(std::string_view raw, int max_n,
                            std::span<const Category> allowed) {
  ParseOutcome out;
  std::vector<ListEntry> entries;
  bool in_fence = false;
  for (const auto& line : text::split_lines(raw)) {
    const bool fence = text::trim(line).rfind("```", 0) == 0;
    std::string rest;
    if (!in_fence && !fence && numbered_header(line, rest)) {
      entries.push_back(ListEntry{rest, {}});
      continue;
    }
    if (fence) in_fence = !in_fence;
    if (!entries.empty()) entries.back().body.push_back(line);
  }

  for (const auto& e : entries) {
    if (static_cast<int>(out.suggestions.size()) >= max_n) break;
    auto parts = split_header(e.header);
    if (!parts || std::find(allowed.begin(), allowed.end(), parts->first) == allowed.end()) {
      ++out.warnings;
      continue;
    }
    SuggestionContent s;
    s.category = parts->first;
    s.summary = normalize_summary(parts->first, parts->second);
    if (parts->second.empty() || s.summary.empty()) {
      ++out.warnings;
      continue;
    }
    auto body = text::join_lines(e.body);
    auto blocks = text::fenced_blocks(body);
    if (!blocks.empty() && !text::trim(blocks.front().body).empty())
      s.code = blocks.front().body;
    bool fenced = false;
    for (const auto& line : e.body) {
      auto t = text::trim(line);
      if (t.rfind("```", 0) == 0) {
        fenced = !fenced;
        continue;
      }
      if (fenced || t.empty()) continue;
      if (t[0] == '-' || t[0] == '*' || t.rfind("\xE2\x80\xA2", 0) == 0) {
        auto b = collapse_whitespace(strip_bullet(t));
        if (!b.empty() && s.explanation.size() < kMaxExplanationBullets)
          s.explanation.push_back(std::move(b));
      }
    }
    out.suggestions.push_back(std::move(s));
  }
  out.format = "numbered_list";
  return out;
}

}  // namespace

std::string normalize_summary(Category c, std::string_view summary) {
  auto s = collapse_whitespace(strip_bullet(summary));
  if (s.empty()) return s;
  const auto label = display_label(c);
  if (starts_with_ci(s, label)) return s;
  const auto wire = wire_name(c);
  if (starts_with_ci(s, wire)) {
    auto rest = text::trim(std::string_view(s).substr(wire.size()));
    if (!rest.empty() && (rest[0] == ':' || rest[0] == '-')) rest = text::trim(rest.substr(1));
    if (rest.empty()) return {};
    s = std::string(rest);
  }
  return std::string(label) + ": " + s;
}

ParseOutcome parse_suggestions(std::string_view raw, int max_n,
                               std::span<const Category> allowed) {
  ParseOutcome out;
  if (max_n < 1) max_n = 1;
  try {
    if (text::trim(raw).empty()) return out;
    if (auto arr = find_json_array(raw)) {
      out.format = "json";
      for (const auto& e : *arr) {
        if (static_cast<int>(out.suggestions.size()) >= max_n) break;
        if (auto s = entry_from_json(e, allowed)) out.suggestions.push_back(std::move(*s));
        else ++out.warnings;
      }
      return out;
    }
    return parse_numbered(raw, max_n, allowed);
  } catch (...) {
    ParseOutcome failed;
    failed.warnings = out.warnings + 1;
    return failed;
  }
}

std::optional<std::string> extract_code_block(std::string_view raw) {
  for (auto& b : text::fenced_blocks(raw)) {
    if (!text::trim(b.body).empty()) return std::move(b.body);
  }
  return std::nullopt;
}

}  // namespace proactive
