#include "proactive/text.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <memory>
#include <stdexcept>

namespace proactive::text {

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    auto nl = s.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.emplace_back(s.substr(pos));
      break;
    }
    out.emplace_back(s.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<FencedBlock> fenced_blocks(std::string_view s) {
  std::vector<FencedBlock> out;
  std::size_t pos = 0;
  while (true) {
    auto open = s.find("```", pos);
    if (open == std::string_view::npos) break;
    auto header_end = s.find('\n', open + 3);
    if (header_end == std::string_view::npos) break;
    auto close = s.find("```", header_end + 1);
    // A closing fence must start a line (or directly follow the header).
    while (close != std::string_view::npos && close > header_end + 1 &&
           s[close - 1] != '\n') {
      close = s.find("```", close + 3);
    }
    if (close == std::string_view::npos) break;
    FencedBlock block;
    block.language = std::string(trim(s.substr(open + 3, header_end - open - 3)));
    auto body = s.substr(header_end + 1, close - header_end - 1);
    if (!body.empty() && body.back() == '\n') body.remove_suffix(1);
    block.body = std::string(body);
    out.push_back(std::move(block));
    pos = close + 3;
  }
  return out;
}

std::string keep_tail(std::string_view s, std::size_t max_bytes) {
  if (s.size() <= max_bytes) return std::string(s);
  std::size_t start = s.size() - max_bytes;
  // Skip UTF-8 continuation bytes so the tail starts on a code point.
  while (start < s.size() && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80) ++start;
  return "[... " + std::to_string(start) + " bytes truncated ...]\n" +
         std::string(s.substr(start));
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace proactive::text
