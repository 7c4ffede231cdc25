#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace proactive::text {

/// Splits on '\n'. "" yields no lines; "a\n" yields {"a", ""} so that
/// join_lines(split_lines(s)) == s for every s.
std::vector<std::string> split_lines(std::string_view s);
std::string join_lines(const std::vector<std::string>& lines);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

struct FencedBlock {
  std::string language;
  std::string body;
};

/// Triple-backtick blocks in order of appearance. An unterminated trailing
/// fence is ignored.
std::vector<FencedBlock> fenced_blocks(std::string_view s);

/// Keeps the last `max_bytes` bytes of `s`, cut at a UTF-8 boundary, and
/// prefixes a marker naming how many bytes were dropped.
std::string keep_tail(std::string_view s, std::size_t max_bytes);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

}  // namespace proactive::text
