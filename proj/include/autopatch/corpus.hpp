#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "autopatch/error.hpp"

namespace autopatch {

enum class OptimizationType {
  CodeRefactoring,
  MemoryOptimization,
  PerformanceEnhancement,
  AlgorithmicSimplification,
  LoopOptimization,
};

inline constexpr OptimizationType kAllOptimizationTypes[] = {
    OptimizationType::CodeRefactoring,           OptimizationType::MemoryOptimization,
    OptimizationType::PerformanceEnhancement,    OptimizationType::AlgorithmicSimplification,
    OptimizationType::LoopOptimization,
};

/// snake_case wire name, e.g. "loop_optimization".
std::string_view to_string(OptimizationType type) noexcept;
std::optional<OptimizationType> parse_optimization_type(std::string_view name) noexcept;

struct TestCase {
  std::string input;
  std::string expected_output;

  bool operator==(const TestCase&) const = default;
};

/// True when `actual` matches `expected` after trailing whitespace is removed
/// from each line and trailing newlines from the whole output.
bool outputs_match(std::string_view actual, std::string_view expected);

struct CodePair {
  std::string id;
  std::string problem_id;
  std::string original_code;
  std::string optimized_code;
  std::set<OptimizationType> labels;
  std::vector<TestCase> testcases;
  std::optional<std::string> rationale;

  bool operator==(const CodePair&) const = default;
};

nlohmann::json to_json(const CodePair& pair);

/// Validates every CodePair invariant; throws Error(MalformedRecord) with the
/// reason on violation.
CodePair code_pair_from_json(const nlohmann::json& j);

struct RecordError {
  std::size_t line_no = 0;  // 1-based
  ErrorCode code = ErrorCode::MalformedRecord;
  std::string reason;
};

struct CorpusStats {
  std::size_t count = 0;
  std::map<OptimizationType, std::size_t> label_histogram;
  std::vector<RecordError> errors;

  /// Sum over the histogram; a record with k labels contributes k.
  [[nodiscard]] std::size_t total_labels() const;
};

nlohmann::json to_json(const CorpusStats& stats);

/// An ingested corpus. Immutable after construction, so concurrent readers
/// need no synchronization.
class Corpus {
 public:
  Corpus() = default;

  /// Throws Error(DuplicateId) if two records share an id.
  explicit Corpus(std::vector<CodePair> records);

  [[nodiscard]] const std::vector<CodePair>& records() const noexcept { return records_; }
  [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
  [[nodiscard]] bool contains(std::string_view id) const;

  /// Throws Error(UnknownId).
  [[nodiscard]] const CodePair& load_record(std::string_view id) const;

  /// The exact source line the record was ingested from, when ingested from a file.
  [[nodiscard]] std::optional<std::string_view> raw_record(std::string_view id) const;

 private:
  friend struct CorpusIngest;
  std::vector<CodePair> records_;
  std::vector<std::string> raw_lines_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

struct IngestResult {
  Corpus corpus;
  CorpusStats stats;
};

/// Reads line-delimited JSON. Blank lines are skipped; every other bad line
/// is reported in stats.errors with its 1-based line number and excluded.
/// Throws Error(FileNotFound) if the file does not exist.
IngestResult ingest_pairs(const std::filesystem::path& path);

/// In-memory variant used by tests and by the file reader.
IngestResult ingest_pairs_from_text(std::string_view jsonl);

struct CorpusSplit {
  std::vector<CodePair> database_set;
  std::vector<CodePair> test_set;
};

/// Seeded Fisher-Yates shuffle (mt19937_64, implementation-independent), then
/// the first `database_count` records form the database set.
/// Throws Error(CountOutOfRange).
CorpusSplit split_corpus(const std::vector<CodePair>& pairs, std::size_t database_count, std::uint64_t seed);

}  // namespace autopatch
