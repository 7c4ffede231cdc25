#include <gtest/gtest.h>

#include <random>

#include "proactive/diff.hpp"
#include "proactive/error.hpp"
#include "proactive/text.hpp"

using namespace proactive;

namespace {

// Textbook O(n*m) LCS, independent of the Myers implementation.
int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::vector<int>> t(a.size() + 1, std::vector<int>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      t[i][j] = a[i - 1] == b[j - 1] ? t[i - 1][j - 1] + 1 : std::max(t[i - 1][j], t[i][j - 1]);
  return t[a.size()][b.size()];
}

std::string lines_text(const std::vector<int>& syms, bool trailing_newline = true) {
  std::string s;
  for (std::size_t i = 0; i < syms.size(); ++i) {
    s += static_cast<char>('a' + syms[i]);
    if (i + 1 < syms.size() || trailing_newline) s += '\n';
  }
  return s;
}

// Plain split on '\n': k newlines give k + 1 pieces, so a trailing newline
// shows up as an empty last piece.
std::vector<std::string> pieces(const std::string& s) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == '\n') out.emplace_back();
    else out.back().push_back(c);
  }
  return out;
}

int added_count(const std::vector<DiffHunk>& hunks) {
  int n = 0;
  for (const auto& h : hunks) n += static_cast<int>(h.added_lines.size());
  return n;
}

void check_pair(const std::string& a, const std::string& b) {
  const auto hunks = compute_diff(a, b);
  const auto la = pieces(a), lb = pieces(b);
  const int lcs = lcs_length(la, lb);
  ASSERT_EQ(removed_line_count(hunks), static_cast<int>(la.size()) - lcs) << a << "|" << b;
  ASSERT_EQ(added_count(hunks), static_cast<int>(lb.size()) - lcs) << a << "|" << b;
  ASSERT_EQ(apply_hunks(a, hunks), b);
  for (std::size_t i = 1; i < hunks.size(); ++i)
    ASSERT_GT(hunks[i].old_start, hunks[i - 1].old_start + hunks[i - 1].old_len);
}

}  // namespace

TEST(Diff, IdenticalTextsHaveNoHunks) {
  EXPECT_TRUE(compute_diff("a\nb\n", "a\nb\n").empty());
  EXPECT_TRUE(compute_diff("", "").empty());
}

TEST(Diff, SingleReplacement) {
  auto h = compute_diff("a\nb\nc\n", "a\nx\nc\n");
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].old_start, 2);
  EXPECT_EQ(h[0].removed_lines, std::vector<std::string>{"b"});
  EXPECT_EQ(h[0].added_lines, std::vector<std::string>{"x"});
}

TEST(Diff, PureInsertionAndDeletionPositions) {
  auto ins = compute_diff("a\nc\n", "a\nb\nc\n");
  ASSERT_EQ(ins.size(), 1u);
  EXPECT_EQ(ins[0].old_len, 0);
  EXPECT_EQ(ins[0].old_start, 2);
  auto del = compute_diff("a\nb\nc\n", "a\nc\n");
  ASSERT_EQ(del.size(), 1u);
  EXPECT_EQ(del[0].new_len, 0);
  EXPECT_EQ(del[0].new_start, 2);
}

TEST(Diff, ExhaustiveSmallAlphabet) {
  // Every pair of sequences over {a,b,c} with up to 4 lines each, plus
  // lengths up to 6 against a fixed set of partners.
  std::vector<std::vector<int>> seqs;
  for (int len = 0; len <= 6; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<int> s;
      for (int i = 0, c = code; i < len; ++i, c /= 3) s.push_back(c % 3);
      seqs.push_back(s);
    }
  }
  std::vector<std::string> short_texts, all_texts;
  for (const auto& s : seqs) {
    all_texts.push_back(lines_text(s));
    if (s.size() <= 4) short_texts.push_back(lines_text(s));
  }
  for (const auto& a : short_texts)
    for (const auto& b : short_texts) check_pair(a, b);
  std::mt19937 rng(7);
  for (const auto& a : all_texts)
    for (int k = 0; k < 8; ++k) check_pair(a, all_texts[rng() % all_texts.size()]);
}

TEST(Diff, SampledUpToTwelveLines) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 3000; ++i) {
    std::vector<int> a(rng() % 13), b(rng() % 13);
    for (auto& x : a) x = static_cast<int>(rng() % 3);
    for (auto& x : b) x = static_cast<int>(rng() % 3);
    check_pair(lines_text(a), lines_text(b));
  }
}

TEST(Diff, TrailingNewlineDifferenceRoundTrips) {
  check_pair("a\nb", "a\nb\n");
  check_pair("a\nb\n", "a\nb");
  check_pair("", "x");
  check_pair("x", "");
}

TEST(Diff, SubsetsApplyIndependently) {
  const std::string a = "1\n2\n3\n4\n5\n6\n7\n";
  const std::string b = "1\nX\n3\n4\n5\nY\n7\n";
  auto h = compute_diff(a, b);
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(apply_hunks(a, std::span(h).subspan(0, 1)), "1\nX\n3\n4\n5\n6\n7\n");
  EXPECT_EQ(apply_hunks(a, std::span(h).subspan(1, 1)), "1\n2\n3\n4\n5\nY\n7\n");
  std::vector<DiffHunk> reversed{h[1], h[0]};
  EXPECT_EQ(apply_hunks(a, reversed), b);
  EXPECT_EQ(apply_hunks(a, {}), a);
}

TEST(Diff, MismatchedOriginalIsStale) {
  auto h = compute_diff("a\nb\n", "a\nc\n");
  try {
    apply_hunks("a\nz\n", h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stale_preview);
  }
}

TEST(Diff, OverlappingHunksRejected) {
  auto h = compute_diff("a\nb\n", "a\nc\n");
  std::vector<DiffHunk> dup{h[0], h[0]};
  try {
    apply_hunks("a\nb\n", dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::validation);
  }
}

TEST(Diff, ApplySelectedChecksHashAndIndices) {
  PreviewResult p;
  p.original_text = "a\nb\nc\nd\n";
  p.proposed_text = "A\nb\nc\nD\n";
  p.original_hash = text::sha256_hex(p.original_text);
  p.hunks = compute_diff(p.original_text, p.proposed_text);
  ASSERT_EQ(p.hunks.size(), 2u);
  std::vector<int> second{1};
  EXPECT_EQ(apply_selected(p, p.original_text, second), "a\nb\nc\nD\n");
  std::vector<int> bad{2};
  EXPECT_THROW(apply_selected(p, p.original_text, bad), Error);
  try {
    apply_selected(p, "edited\n", second);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::stale_preview);
  }
}

TEST(Diff, RandomRoundTrip) {
  std::mt19937_64 rng(1234);
  const std::vector<std::string> vocab = {"x = 1", "y = 2", "", "    return x", "def f():", "# note"};
  auto random_text = [&] {
    std::string s;
    const auto n = rng() % 15;
    for (std::size_t i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + "\n";
    if (rng() % 4 == 0 && !s.empty()) s.pop_back();
    return s;
  };
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_text(), b = random_text();
    const auto h = compute_diff(a, b);
    ASSERT_EQ(apply_hunks(a, h), b);
    ASSERT_EQ(apply_hunks(a, {}), a);
  }
}
