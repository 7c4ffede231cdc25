#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "proactive/types.hpp"

namespace proactive {

/// One contiguous change. Starts are 1-based; for a pure insertion
/// old_start - 1 lines of the original precede it (likewise new_start for
/// a pure deletion).
struct DiffHunk {
  int old_start = 1;
  int old_len = 0;
  int new_start = 1;
  int new_len = 0;
  std::vector<std::string> removed_lines;
  std::vector<std::string> added_lines;

  friend bool operator==(const DiffHunk&, const DiffHunk&) = default;
};

/// Minimal line diff (shortest edit script, Myers). Hunks are sorted by
/// old_start and separated by at least one unchanged line.
std::vector<DiffHunk> compute_diff(std::string_view original, std::string_view proposed);

/// Applies a subset of hunks computed against `original`, in any order.
/// Throws Error(stale_preview) when a hunk's removed lines do not match
/// `original`, Error(validation) when hunks overlap.
std::string apply_hunks(std::string_view original, std::span<const DiffHunk> hunks);

/// Lines removed by a hunk set.
int removed_line_count(std::span<const DiffHunk> hunks);

struct PreviewResult {
  PreviewId preview_id;
  SuggestionId suggestion_id;
  DocId doc_id;
  std::string original_text;
  std::string proposed_text;
  /// SHA-256 of original_text; guards against edits made after the preview.
  std::string original_hash;
  std::vector<DiffHunk> hunks;
  Millis provider_latency{0};
};

/// Text produced by accepting `selected` (indices into preview.hunks) when
/// the document currently reads `current_text`. Throws Error(stale_preview)
/// if the document changed since the preview, Error(validation) for bad
/// indices.
std::string apply_selected(const PreviewResult& preview, std::string_view current_text,
                           std::span<const int> selected);

}  // namespace proactive
