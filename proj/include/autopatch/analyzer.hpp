#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "autopatch/cfg.hpp"

namespace autopatch {

enum class DumpStream { Stderr, Stdout };

struct AnalyzerConfig {
  std::string binary = "clang++";
  std::string function = "main";
  /// Flags added after the CFG-dump options; AUTOPATCH_ANALYZER_FLAGS replaces them.
  std::vector<std::string> extra_flags{"-std=c++17"};
  DumpStream dump_stream = DumpStream::Stderr;
  std::chrono::seconds timeout{60};

  /// Defaults overridden by AUTOPATCH_ANALYZER_PATH and AUTOPATCH_ANALYZER_FLAGS.
  static AnalyzerConfig from_env();
};

/// The analyzer command line for a source file, without running it.
std::vector<std::string> analyzer_command(const AnalyzerConfig& config, const std::string& source_file);

/// Runs the static analyzer with its CFG dump checker on `code` (written to a
/// private temp directory), then parses the section for `function`.
/// A function matches on its unqualified or qualified name.
/// Throws Error(AnalyzerNotFound | AnalyzerFailed | FunctionNotFound | ParseError).
ControlFlowGraph extract_cfg(std::string_view code, std::string_view function, const AnalyzerConfig& config);

/// Selects the named function from a whole-translation-unit dump.
ControlFlowGraph select_function_cfg(std::string_view dump, std::string_view function);

}  // namespace autopatch
