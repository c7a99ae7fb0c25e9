#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autopatch/analyzer.hpp"
#include "autopatch/corpus.hpp"
#include "autopatch/harness.hpp"
#include "autopatch/llm_client.hpp"
#include "autopatch/prompt.hpp"
#include "autopatch/report.hpp"

namespace autopatch {

enum class EmbeddingBackend { Local, Remote };

struct RunConfig {
  std::filesystem::path corpus;
  std::filesystem::path out = "autopatch-out";
  std::optional<std::filesystem::path> index_dir;  // default <out>/index
  std::size_t db_count = 1000;
  std::uint64_t seed = 0;
  std::vector<PromptMode> modes{std::begin(kAllPromptModes), std::end(kAllPromptModes)};
  EmbeddingBackend provider = EmbeddingBackend::Local;
  std::optional<std::filesystem::path> cassette;
  CassetteMode cassette_mode = CassetteMode::Replay;
  MeasureOptions measure;
  AnalyzerConfig analyzer = AnalyzerConfig::from_env();
  ToolchainConfig toolchain = ToolchainConfig::from_env();
  GenerationSettings generation;

  [[nodiscard]] std::filesystem::path index_path() const { return index_dir ? *index_dir : out / "index"; }

  /// Replay must not reach live services: fails with Error(Usage) when an
  /// LLM base URL is configured or the remote embedding provider is chosen.
  void validate() const;
};

/// Splits the corpus and writes <out>/manifest.json and <out>/corpus_stats.json.
CorpusStats cmd_ingest(const RunConfig& config);

struct IndexSummary {
  std::size_t indexed = 0;
  std::size_t skipped = 0;
  std::size_t reused = 0;  // taken from the journal of an earlier run
};

/// Builds <index>/context.jsonl and <index>/naive.jsonl from the database
/// split. Per-record progress lives in <index>/journal.jsonl; records already
/// completed there are not recomputed.
IndexSummary cmd_index(const RunConfig& config);

struct OptimizeSummary {
  std::size_t generated = 0;
  std::size_t failed = 0;
};

/// Writes <out>/patches/<mode>/<id>.cpp for every test record, prompt texts
/// under <out>/prompts and failures to <out>/patches/failures.json.
OptimizeSummary cmd_optimize(const RunConfig& config);

/// Scores and times the patches, writes <out>/report.json and report.txt.
EvaluationReport cmd_eval(const RunConfig& config);

/// Pass-through helpers shared with tests.
std::string journal_key(const CodePair& pair);

}  // namespace autopatch
