#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "autopatch/cfg_diff.hpp"
#include "autopatch/corpus.hpp"
#include "autopatch/llm_client.hpp"

namespace autopatch {

enum class PromptMode { ZeroShot, Naive, Context };

inline constexpr PromptMode kAllPromptModes[] = {PromptMode::ZeroShot, PromptMode::Naive, PromptMode::Context};

/// "zero-shot", "naive", "context".
std::string_view to_string(PromptMode mode) noexcept;
std::optional<PromptMode> parse_prompt_mode(std::string_view name) noexcept;

struct ExamplePair {
  std::string id;
  std::string original_code;
  std::string optimized_code;
};

struct PromptParts {
  std::string target_code;
  std::optional<std::string> diff_text;
  std::optional<std::string> rationale;
  std::optional<ExamplePair> example_pair;
};

struct Prompt {
  PromptMode mode = PromptMode::ZeroShot;
  std::string target_id;
  std::string system_text;
  std::string user_text;
  PromptParts parts;
};

/// Every mode renders the same skeleton (task, example, structural insights,
/// rationale, target program) and omits the sections it has no content for.
///   ZeroShot: no example, diff or rationale.
///   Naive:    exactly one example; no diff, no rationale.
///   Context:  exactly one example plus its diff text and rationale.
/// Throws Error(ModeArgumentMismatch) when the arguments do not fit the mode.
Prompt build_prompt(PromptMode mode, const CodePair& target, const std::optional<std::string>& diff_text,
                    const std::optional<std::string>& rationale, const CodePair* example);

struct GeneratedPatch {
  std::string code;
  std::string raw_response;
  PromptMode mode = PromptMode::ZeroShot;
  std::string target_id;
};

struct GenerationSettings {
  std::string model = "gpt-4o";
  double temperature = 0.0;
};

/// Body of the first ``` fenced block (info string ignored). Later blocks are
/// ignored. Throws Error(NoCodeBlockInResponse) if there is none or it is blank.
std::string extract_first_code_block(std::string_view response);

/// Sends the prompt and extracts the patch. Errors from the client propagate
/// (ServiceError, ReplayMiss).
GeneratedPatch generate_patch(const Prompt& prompt, LlmClient& llm, const GenerationSettings& settings = {});

inline constexpr std::string_view kNoStructuralChanges = "no structural changes detected";

/// Request used to explain why the optimized program of `pair` is faster.
ChatRequest rationale_request(std::string_view diff_text, const CodePair& pair, const GenerationSettings& settings);

/// Natural-language rationale grounded in the diff. An empty diff returns
/// kNoStructuralChanges without contacting the service.
std::string generate_rationale(const CfgDiff& diff, std::string_view diff_text, const CodePair& pair, LlmClient& llm,
                               const GenerationSettings& settings = {});

}  // namespace autopatch
