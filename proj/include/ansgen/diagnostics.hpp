#pragma once

// Token-level diffing of rule output against corrected output, the four-way
// grammar-error taxonomy (extra / incorrect / misplaced / missing), and
// generation latency measurement.

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ansgen/corpus.hpp"
#include "ansgen/metrics.hpp"

namespace ansgen {

enum class EditKind { Insert, Delete, Substitute, Move };

std::string_view to_string(EditKind k);

/// Positions index the "before" sequence. An insert sits before
/// before[position] (position == size appends). A substitute carries
/// {old, new}. A move deletes before[position] and lands the token at index
/// `destination` of the "after" sequence.
struct EditOp {
  EditKind kind = EditKind::Insert;
  Tokens tokens;
  std::size_t position = 0;
  std::optional<std::size_t> destination;

  bool operator==(const EditOp&) const = default;
};

struct DiffOptions {
  /// Recasing ("phoenix" -> "Phoenix") is not an edit unless this is set.
  bool case_sensitive = false;
  /// Pair a delete and an insert of the same token into one move.
  bool collapse_moves = true;
};

std::vector<EditOp> token_diff(std::span<const std::string> before, std::span<const std::string> after,
                               const DiffOptions& options = {});

/// Replays an edit script produced by token_diff.
Tokens apply_edits(std::span<const std::string> before, std::span<const EditOp> edits);

struct ErrorCategoryCounts {
  std::size_t extra = 0;
  std::size_t incorrect = 0;
  std::size_t misplaced = 0;
  std::size_t missing = 0;

  std::size_t total() const { return extra + incorrect + misplaced + missing; }
  ErrorCategoryCounts& operator+=(const ErrorCategoryCounts& o);
  bool operator==(const ErrorCategoryCounts&) const = default;
};

ErrorCategoryCounts operator+(ErrorCategoryCounts a, const ErrorCategoryCounts& b);

ErrorCategoryCounts categorize(std::span<const EditOp> edits);

/// Case-preserving word tokenization used on both sides of an audit.
Tokens diff_tokenize(std::string_view text);

/// Sum of categorize(token_diff(rule, corrected)) over aligned pairs.
ErrorCategoryCounts audit_corpus(std::span<const std::string> rule_outputs,
                                 std::span<const std::string> corrected_outputs);

struct TimingReport {
  std::size_t sample_count = 0;
  double total_seconds = 0.0;
  double avg_seconds = 0.0;
  std::string scope;
};

using GenerationFn = std::function<void(const Sample&)>;

/// Wall-clock time of `pipeline` per sample, run sequentially.
TimingReport time_pipeline(std::span<const Sample> samples, const GenerationFn& pipeline,
                           std::string scope = "generation call");

}  // namespace ansgen
