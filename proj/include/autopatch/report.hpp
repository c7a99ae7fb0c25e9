#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "autopatch/corpus.hpp"
#include "autopatch/error.hpp"
#include "autopatch/harness.hpp"
#include "autopatch/metrics.hpp"
#include "autopatch/prompt.hpp"

namespace autopatch {

/// (baseline - candidate) / baseline x 100, unrounded. Throws
/// Error(NonpositiveBaseline).
double improvement_raw(double baseline_avg_s, double candidate_avg_s);

/// improvement_raw rounded to one decimal.
double improvement(double baseline_avg_s, double candidate_avg_s);

struct EvaluationResult {
  std::string target_id;
  PromptMode mode = PromptMode::ZeroShot;
  std::optional<LexicalScores> lexical;
  RunOutcome outcome;
  std::set<OptimizationType> labels;
};

struct ModeSummary {
  PromptMode mode = PromptMode::ZeroShot;
  std::size_t evaluated = 0;
  std::map<RunStatus, std::size_t> status_counts;  // every status present, zeros included
  std::optional<LexicalScores> mean_lexical;       // over all evaluated programs with scores
  std::optional<double> avg_time_s;                // over the common executable set
  std::optional<double> improvement_pct;           // vs zero-shot, rounded
};

struct TypeSummary {
  OptimizationType type{};
  std::size_t programs = 0;  // common-set programs carrying the label
  std::map<PromptMode, double> avg_time_s;
};

struct EvaluationReport {
  std::vector<ModeSummary> modes;  // in kAllPromptModes order, present modes only
  std::vector<std::string> common_ids;
  std::vector<TypeSummary> per_type;  // all types, in kAllOptimizationTypes order
  std::optional<ErrorCode> timing_guard;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<EvaluationResult> results;  // sorted by (target_id, mode)

  [[nodiscard]] const ModeSummary* find(PromptMode mode) const noexcept;
};

/// Aggregates per-mode and per-type figures. Times average per program (mean
/// of per-testcase medians) and then across the programs every mode executed
/// correctly. When that set is empty, timing_guard is NoCommonExecutableSet
/// and all time figures are absent. Throws Error(Usage) for empty input.
EvaluationReport aggregate_report(std::vector<EvaluationResult> results,
                                  nlohmann::json metadata = nlohmann::json::object());

nlohmann::json to_json(const EvaluationReport& report);
std::string render_text(const EvaluationReport& report);

}  // namespace autopatch
