#include "autopatch/prompt.hpp"

#include <spdlog/spdlog.h>

#include "autopatch/error.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

std::string_view to_string(PromptMode mode) noexcept {
  switch (mode) {
    case PromptMode::ZeroShot: return "zero-shot";
    case PromptMode::Naive: return "naive";
    case PromptMode::Context: return "context";
  }
  return "unknown";
}

std::optional<PromptMode> parse_prompt_mode(std::string_view name) noexcept {
  for (PromptMode m : kAllPromptModes) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

namespace {

constexpr std::string_view kSystemText =
    "You are an expert C++ performance engineer. You rewrite programs so that they run faster while producing "
    "exactly the same output for every input.";

constexpr std::string_view kTaskText =
    "Optimize the runtime performance of the target program. Keep its input/output behavior identical. Reply with "
    "the complete optimized program in a single ```cpp fenced code block.";

std::string fenced(std::string_view code) {
  std::string out = "```cpp\n";
  out += code;
  if (out.back() != '\n') out.push_back('\n');
  out += "```\n";
  return out;
}

std::string render_user_text(const PromptParts& parts) {
  std::string out;
  out += "## Task\n";
  out += kTaskText;
  out += "\n\n";
  if (parts.example_pair) {
    out += "## Retrieved example\n";
    out += "An earlier program and the optimized version that replaced it.\n";
    out += "### Original\n" + fenced(parts.example_pair->original_code);
    out += "### Optimized\n" + fenced(parts.example_pair->optimized_code);
    out += "\n";
  }
  if (parts.diff_text) {
    out += "## Structural insights\n";
    out += "Control-flow-graph differences between the example's original and optimized versions:\n";
    out += *parts.diff_text;
    if (out.back() != '\n') out.push_back('\n');
    out += "\n";
  }
  if (parts.rationale) {
    out += "## Optimization rationale\n";
    out += *parts.rationale;
    if (out.back() != '\n') out.push_back('\n');
    out += "\n";
  }
  out += "## Target program\n";
  out += fenced(parts.target_code);
  return out;
}

[[noreturn]] void mismatch(PromptMode mode, const std::string& why) {
  throw Error(ErrorCode::ModeArgumentMismatch, std::string(to_string(mode)) + " mode: " + why);
}

}  // namespace

Prompt build_prompt(PromptMode mode, const CodePair& target, const std::optional<std::string>& diff_text,
                    const std::optional<std::string>& rationale, const CodePair* example) {
  switch (mode) {
    case PromptMode::ZeroShot:
      if (example != nullptr) mismatch(mode, "takes no example pair");
      if (diff_text) mismatch(mode, "takes no diff");
      if (rationale) mismatch(mode, "takes no rationale");
      break;
    case PromptMode::Naive:
      if (example == nullptr) mismatch(mode, "needs exactly one example pair");
      if (diff_text) mismatch(mode, "takes no diff");
      if (rationale) mismatch(mode, "takes no rationale");
      break;
    case PromptMode::Context:
      if (example == nullptr) mismatch(mode, "needs exactly one example pair");
      if (!diff_text) mismatch(mode, "needs the example's diff");
      if (!rationale) mismatch(mode, "needs the example's rationale");
      break;
  }
  Prompt p;
  p.mode = mode;
  p.target_id = target.id;
  p.parts.target_code = target.original_code;
  p.parts.diff_text = diff_text;
  p.parts.rationale = rationale;
  if (example != nullptr) p.parts.example_pair = ExamplePair{example->id, example->original_code, example->optimized_code};
  p.system_text = std::string(kSystemText);
  p.user_text = render_user_text(p.parts);
  return p;
}

std::string extract_first_code_block(std::string_view response) {
  const auto lines = text::split_lines(response);
  std::size_t open = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (text::starts_with(text::trim(lines[i]), "```")) {
      open = i;
      break;
    }
  }
  if (open == lines.size()) throw Error(ErrorCode::NoCodeBlockInResponse, "no fenced block");
  std::size_t close = lines.size();
  for (std::size_t i = open + 1; i < lines.size(); ++i) {
    if (text::starts_with(text::trim(lines[i]), "```")) {
      close = i;
      break;
    }
  }
  if (close == lines.size()) throw Error(ErrorCode::NoCodeBlockInResponse, "unterminated fenced block");
  std::string code;
  for (std::size_t i = open + 1; i < close; ++i) {
    code.append(lines[i]);
    code.push_back('\n');
  }
  if (text::trim(code).empty()) throw Error(ErrorCode::NoCodeBlockInResponse, "fenced block is empty");
  std::size_t extra = 0;
  bool inside = false;
  for (std::size_t i = close + 1; i < lines.size(); ++i) {
    if (!text::starts_with(text::trim(lines[i]), "```")) continue;
    if (!inside) ++extra;
    inside = !inside;
  }
  if (extra > 0) spdlog::debug("ignoring {} additional fenced block(s) in response", extra);
  return code;
}

GeneratedPatch generate_patch(const Prompt& prompt, LlmClient& llm, const GenerationSettings& settings) {
  const ChatRequest request{settings.model, prompt.system_text, prompt.user_text, settings.temperature};
  GeneratedPatch patch;
  patch.raw_response = llm.complete(request);
  patch.code = extract_first_code_block(patch.raw_response);
  patch.mode = prompt.mode;
  patch.target_id = prompt.target_id;
  return patch;
}

ChatRequest rationale_request(std::string_view diff_text, const CodePair& pair, const GenerationSettings& settings) {
  std::string user;
  user += "## Task\n";
  user += "Explain why the optimized program runs faster than the original one. Ground the explanation in the "
          "control-flow-graph differences and cite the affected blocks by id (for example B3). Answer in plain "
          "prose, at most five sentences.\n\n";
  user += "## CFG differences\n";
  user += diff_text;
  if (user.back() != '\n') user.push_back('\n');
  user += "\n## Original program\n" + fenced(pair.original_code);
  user += "\n## Optimized program\n" + fenced(pair.optimized_code);
  return ChatRequest{settings.model,
                     "You are an expert C++ performance engineer who explains program optimizations precisely.", user,
                     settings.temperature};
}

std::string generate_rationale(const CfgDiff& diff, std::string_view diff_text, const CodePair& pair, LlmClient& llm,
                               const GenerationSettings& settings) {
  if (diff.empty()) return std::string(kNoStructuralChanges);
  std::string content = llm.complete(rationale_request(diff_text, pair, settings));
  std::string trimmed(text::trim(content));
  if (trimmed.empty()) throw Error(ErrorCode::ServiceError, "empty rationale for " + pair.id);
  return trimmed;
}

}  // namespace autopatch
