#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace autopatch {

struct LexicalScores {
  double line_overlap_pct = 0.0;   // [0, 100]
  double eds = 0.0;                // [0, 1]
  double token_overlap_pct = 0.0;  // [0, 100]
};

/// Lines trimmed, with blank and comment-only lines dropped.
std::vector<std::string> normalized_lines(std::string_view code);

/// LO = matched / ground-truth lines x 100, multiset intersection over
/// normalized_lines. Throws Error(EmptyGroundTruth).
double line_overlap(std::string_view generated, std::string_view ground_truth);

/// Unit-cost Levenshtein distance over code points (Hyyrö's block-based
/// bit-vector algorithm, 64 pattern rows per word).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// EDS = 1 - E / max(Lg, Lt), E the character-level edit distance between the
/// whitespace-normalized texts and L their lengths in code points.
/// Throws Error(BothEmpty).
double edit_distance_similarity(std::string_view generated, std::string_view ground_truth);

/// TO = matched / ground-truth tokens x 100, multiset intersection of
/// tokenize() output. Throws Error(EmptyGroundTruth).
double token_overlap(std::string_view generated, std::string_view ground_truth);

/// All three metrics of a generated patch against its ground truth.
LexicalScores lexical_scores(std::string_view generated, std::string_view ground_truth);

using TextPair = std::pair<std::string, std::string>;  // (generated, ground truth)

/// EDS for many pairs, pairs distributed over OpenMP threads. Throws
/// Error(BothEmpty) before any work if a pair has two empty texts.
std::vector<double> edit_distance_similarity_batch(std::span<const TextPair> pairs);

/// Serial reference for edit_distance_similarity_batch.
std::vector<double> edit_distance_similarity_batch_serial(std::span<const TextPair> pairs);

}  // namespace autopatch
