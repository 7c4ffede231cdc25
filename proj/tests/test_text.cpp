#include <gtest/gtest.h>

#include "proactive/text.hpp"

using namespace proactive;

TEST(Text, SplitJoinRoundTrip) {
  for (std::string s : {"", "a", "a\n", "a\nb", "a\n\nb\n", "\n", "\n\n"}) {
    EXPECT_EQ(text::join_lines(text::split_lines(s)), s) << "[" << s << "]";
  }
  EXPECT_TRUE(text::split_lines("").empty());
  EXPECT_EQ(text::split_lines("a\n"), (std::vector<std::string>{"a", ""}));
}

TEST(Text, Trim) {
  EXPECT_EQ(text::trim("  x y \n\t"), "x y");
  EXPECT_EQ(text::trim(" \n "), "");
}

TEST(Text, FencedBlocks) {
  auto blocks = text::fenced_blocks("pre\n```python\nprint(1)\n```\nmid\n```\nraw\n```");
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].language, "python");
  EXPECT_EQ(blocks[0].body, "print(1)");
  EXPECT_EQ(blocks[1].language, "");
  EXPECT_EQ(blocks[1].body, "raw");
}

TEST(Text, FencedBlockIgnoresInlineBackticks) {
  auto blocks = text::fenced_blocks("```\na = '```'\nb\n```");
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_EQ(blocks[0].body, "a = '```'\nb");
}

TEST(Text, UnterminatedFenceYieldsNothing) {
  EXPECT_TRUE(text::fenced_blocks("```python\nprint(1)\n").empty());
}

TEST(Text, KeepTailMarksTruncation) {
  EXPECT_EQ(text::keep_tail("short", 10), "short");
  auto t = text::keep_tail("0123456789abcdef", 6);
  EXPECT_EQ(t, "[... 10 bytes truncated ...]\nabcdef");
}

TEST(Text, KeepTailStartsOnCodePoint) {
  // "é" is two bytes; cutting in the middle must skip the continuation.
  std::string s = "ab\xC3\xA9xyz";
  auto t = text::keep_tail(s, 4);
  EXPECT_EQ(t.substr(t.find('\n') + 1), "xyz");
}

TEST(Text, Sha256KnownVectors) {
  EXPECT_EQ(text::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(text::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
