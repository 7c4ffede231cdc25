#include "proactive/diff.hpp"

#include <algorithm>
#include <unordered_map>

#include "proactive/error.hpp"
#include "proactive/text.hpp"

namespace proactive {

namespace {

enum class Op { equal, remove, insert };

// Shortest edit script over interned line ids (Myers, forward greedy with a
// saved frontier per step). Returns ops in order.
std::vector<Op> edit_script(const std::vector<int>& a, const std::vector<int>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  const int max = n + m;
  const int offset = max + 1;
  std::vector<int> v(2 * max + 3, 0);
  // trace[d] holds v[-d-1 .. d+1] as it stood before step d.
  std::vector<std::vector<int>> trace;

  int final_d = 0;
  bool done = (max == 0);
  for (int d = 0; d <= max && !done; ++d) {
    trace.emplace_back(v.begin() + offset - d - 1, v.begin() + offset + d + 2);
    for (int k = -d; k <= d; k += 2) {
      int x;
      if (k == -d || (k != d && v[offset + k - 1] < v[offset + k + 1])) x = v[offset + k + 1];
      else x = v[offset + k - 1] + 1;
      int y = x - k;
      while (x < n && y < m && a[x] == b[y]) {
        ++x;
        ++y;
      }
      v[offset + k] = x;
      if (x >= n && y >= m) {
        final_d = d;
        done = true;
        break;
      }
    }
  }

  std::vector<Op> ops;
  int x = n;
  int y = m;
  for (int d = final_d; d > 0; --d) {
    const auto& pv = trace[d];
    auto at = [&](int k) { return pv[static_cast<std::size_t>(k + d + 1)]; };
    const int k = x - y;
    int prev_k;
    if (k == -d || (k != d && at(k - 1) < at(k + 1))) prev_k = k + 1;
    else prev_k = k - 1;
    const int prev_x = at(prev_k);
    const int prev_y = prev_x - prev_k;
    while (x > prev_x && y > prev_y) {
      ops.push_back(Op::equal);
      --x;
      --y;
    }
    ops.push_back(x == prev_x ? Op::insert : Op::remove);
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    ops.push_back(Op::equal);
    --x;
    --y;
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

// Every text ends in a final (possibly empty) line, so "" and "a\n" both
// carry the empty tail element and differ only by "a".
std::vector<std::string> diff_lines(std::string_view s) {
  auto v = text::split_lines(s);
  if (v.empty()) v.emplace_back();
  return v;
}

}  // namespace

std::vector<DiffHunk> compute_diff(std::string_view original, std::string_view proposed) {
  const auto a = diff_lines(original);
  const auto b = diff_lines(proposed);

  // Trim the common prefix and suffix; Myers only sees the middle.
  std::size_t prefix = 0;
  while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
         a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
    ++suffix;

  std::unordered_map<std::string_view, int> ids;
  auto intern = [&](const std::string& s) {
    return ids.try_emplace(s, static_cast<int>(ids.size())).first->second;
  };
  std::vector<int> ia, ib;
  for (std::size_t i = prefix; i < a.size() - suffix; ++i) ia.push_back(intern(a[i]));
  for (std::size_t i = prefix; i < b.size() - suffix; ++i) ib.push_back(intern(b[i]));

  std::vector<DiffHunk> hunks;
  int ai = static_cast<int>(prefix);
  int bi = static_cast<int>(prefix);
  DiffHunk* open = nullptr;
  for (Op op : edit_script(ia, ib)) {
    if (op == Op::equal) {
      open = nullptr;
      ++ai;
      ++bi;
      continue;
    }
    if (!open) {
      hunks.push_back(DiffHunk{ai + 1, 0, bi + 1, 0, {}, {}});
      open = &hunks.back();
    }
    if (op == Op::remove) {
      open->removed_lines.push_back(a[ai++]);
      ++open->old_len;
    } else {
      open->added_lines.push_back(b[bi++]);
      ++open->new_len;
    }
  }
  return hunks;
}

std::string apply_hunks(std::string_view original, std::span<const DiffHunk> hunks) {
  const auto a = diff_lines(original);
  std::vector<const DiffHunk*> order;
  for (const auto& h : hunks) order.push_back(&h);
  std::sort(order.begin(), order.end(),
            [](const DiffHunk* x, const DiffHunk* y) { return x->old_start < y->old_start; });

  std::vector<std::string> out;
  std::size_t cursor = 0;  // next original line to copy (0-based)
  for (const DiffHunk* h : order) {
    if (h->old_start < 1 || h->old_len < 0 ||
        h->old_len != static_cast<int>(h->removed_lines.size()) ||
        h->new_len != static_cast<int>(h->added_lines.size()))
      throw Error(ErrorCode::validation, "malformed hunk");
    const std::size_t begin = static_cast<std::size_t>(h->old_start - 1);
    if (begin < cursor) throw Error(ErrorCode::validation, "overlapping hunks");
    if (begin + h->removed_lines.size() > a.size())
      throw Error(ErrorCode::stale_preview, "hunk extends past the end of the document");
    for (std::size_t i = 0; i < h->removed_lines.size(); ++i) {
      if (a[begin + i] != h->removed_lines[i])
        throw Error(ErrorCode::stale_preview, "hunk does not match the document");
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(cursor),
               a.begin() + static_cast<std::ptrdiff_t>(begin));
    out.insert(out.end(), h->added_lines.begin(), h->added_lines.end());
    cursor = begin + h->removed_lines.size();
  }
  out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(cursor), a.end());
  return text::join_lines(out);
}

int removed_line_count(std::span<const DiffHunk> hunks) {
  int n = 0;
  for (const auto& h : hunks) n += h.old_len;
  return n;
}

std::string apply_selected(const PreviewResult& preview, std::string_view current_text,
                           std::span<const int> selected) {
  if (text::sha256_hex(current_text) != preview.original_hash)
    throw Error(ErrorCode::stale_preview,
                "the code changed since preview " + preview.preview_id + "; preview again");
  std::vector<int> idx(selected.begin(), selected.end());
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw Error(ErrorCode::validation, "duplicate hunk index");
  std::vector<DiffHunk> chosen;
  for (int i : idx) {
    if (i < 0 || i >= static_cast<int>(preview.hunks.size()))
      throw Error(ErrorCode::validation, "hunk index " + std::to_string(i) + " out of range");
    chosen.push_back(preview.hunks[static_cast<std::size_t>(i)]);
  }
  return apply_hunks(current_text, chosen);
}

}  // namespace proactive
