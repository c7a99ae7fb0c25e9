#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "autopatch/corpus.hpp"
#include "autopatch/process.hpp"

namespace autopatch {

struct ToolchainConfig {
  std::string compiler = "g++";
  std::vector<std::string> flags{"-O2", "-std=c++17"};
  std::chrono::seconds compile_timeout{120};

  /// AUTOPATCH_CXX overrides the compiler, AUTOPATCH_CXXFLAGS replaces the flags.
  static ToolchainConfig from_env();
};

/// A compiled executable; the directory holding it lives as long as any copy.
struct CompiledProgram {
  std::filesystem::path binary;
  std::shared_ptr<TempDir> dir;
};

/// Throws Error(CompilerNotFound) or Error(CompileError) carrying the
/// compiler's stderr.
CompiledProgram compile_program(std::string_view code, const ToolchainConfig& toolchain);

enum class RunStatus { Ok, CompileError, WrongOutput, Timeout, Crash };

inline constexpr RunStatus kAllRunStatuses[] = {RunStatus::Ok, RunStatus::CompileError, RunStatus::WrongOutput,
                                                 RunStatus::Timeout, RunStatus::Crash};

std::string_view to_string(RunStatus status) noexcept;

struct RunOutcome {
  RunStatus status = RunStatus::Ok;
  std::vector<double> per_testcase_times_s;     // median of reps; empty unless Ok
  std::vector<std::vector<double>> rep_times_s;  // raw timed runs per testcase; empty unless Ok
  double mean_s = 0.0;
  double median_s = 0.0;
  std::string detail;  // first failure, for humans
};

struct MeasureOptions {
  int reps = 5;
  int warmup = 1;
  double timeout_s = 10.0;
};

/// Runs every testcase warmup + reps times, feeding its input on stdin. The
/// first failing run decides the status: Timeout, then Crash (signal or
/// nonzero exit), then WrongOutput. Throws Error(BinaryNotFound), and
/// Error(Usage) when reps < 1 or there are no testcases.
RunOutcome measure_execution(const std::filesystem::path& binary, const std::vector<TestCase>& testcases,
                             const MeasureOptions& options);

inline RunOutcome measure_execution(const std::filesystem::path& binary, const std::vector<TestCase>& testcases,
                                    int reps, double timeout_s) {
  return measure_execution(binary, testcases, MeasureOptions{reps, 1, timeout_s});
}

/// compile_program + measure_execution with compile failures folded into a
/// CompileError outcome. CompilerNotFound still throws.
RunOutcome evaluate_program(std::string_view code, const std::vector<TestCase>& testcases,
                            const ToolchainConfig& toolchain, const MeasureOptions& options);

double median(std::vector<double> values);

}  // namespace autopatch
