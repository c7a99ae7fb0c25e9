#include "autopatch/harness.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include <spdlog/spdlog.h>

#include "autopatch/error.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

ToolchainConfig ToolchainConfig::from_env() {
  ToolchainConfig c;
  if (const char* cxx = std::getenv("AUTOPATCH_CXX"); cxx != nullptr && *cxx != '\0') c.compiler = cxx;
  if (const char* flags = std::getenv("AUTOPATCH_CXXFLAGS"); flags != nullptr) c.flags = split_flags(flags);
  return c;
}

CompiledProgram compile_program(std::string_view code, const ToolchainConfig& toolchain) {
  const auto compiler = find_executable(toolchain.compiler);
  if (!compiler) throw Error(ErrorCode::CompilerNotFound, toolchain.compiler);

  auto dir = std::make_shared<TempDir>("autopatch-build");
  const auto source = dir->path() / "main.cpp";
  const auto binary = dir->path() / "main";
  text::write_file(source, code);

  std::vector<std::string> argv{compiler->string()};
  argv.insert(argv.end(), toolchain.flags.begin(), toolchain.flags.end());
  argv.insert(argv.end(), {"-o", binary.string(), source.string()});

  ProcessOptions opts;
  opts.timeout = std::chrono::duration<double>(toolchain.compile_timeout);
  opts.working_dir = dir->path();
  const ProcessResult r = run_process(argv, opts);
  if (r.exec_failed) throw Error(ErrorCode::CompilerNotFound, toolchain.compiler);
  if (r.timed_out) throw Error(ErrorCode::CompileError, "compiler timed out");
  if (!r.ok() || !std::filesystem::exists(binary)) {
    throw Error(ErrorCode::CompileError, r.stderr_data.empty() ? "compiler failed" : r.stderr_data);
  }
  return {binary, std::move(dir)};
}

std::string_view to_string(RunStatus status) noexcept {
  switch (status) {
    case RunStatus::Ok: return "Ok";
    case RunStatus::CompileError: return "CompileError";
    case RunStatus::WrongOutput: return "WrongOutput";
    case RunStatus::Timeout: return "Timeout";
    case RunStatus::Crash: return "Crash";
  }
  return "?";
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

namespace {

RunOutcome failed(RunStatus status, std::string detail) {
  RunOutcome o;
  o.status = status;
  o.detail = std::move(detail);
  return o;
}

}  // namespace

RunOutcome measure_execution(const std::filesystem::path& binary, const std::vector<TestCase>& testcases,
                             const MeasureOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(binary, ec)) throw Error(ErrorCode::BinaryNotFound, binary.string());
  if (options.reps < 1) throw Error(ErrorCode::Usage, "reps must be at least 1");
  if (testcases.empty()) throw Error(ErrorCode::Usage, "no testcases");

  const std::vector<std::string> argv{std::filesystem::absolute(binary).string()};
  RunOutcome out;
  for (std::size_t t = 0; t < testcases.size(); ++t) {
    ProcessOptions opts;
    opts.stdin_data = testcases[t].input;
    opts.timeout = std::chrono::duration<double>(options.timeout_s);
    const std::string where = "testcase " + std::to_string(t);

    std::vector<double> reps;
    for (int run = 0; run < options.warmup + options.reps; ++run) {
      const ProcessResult r = run_process(argv, opts);
      if (r.exec_failed) throw Error(ErrorCode::BinaryNotFound, binary.string());
      if (r.timed_out) return failed(RunStatus::Timeout, where + ": exceeded " + std::to_string(options.timeout_s) + " s");
      if (r.signaled) return failed(RunStatus::Crash, where + ": signal " + std::to_string(r.term_signal));
      if (r.exit_code != 0) return failed(RunStatus::Crash, where + ": exit status " + std::to_string(r.exit_code));
      if (!outputs_match(r.stdout_data, testcases[t].expected_output)) {
        return failed(RunStatus::WrongOutput, where + ": output differs");
      }
      if (run >= options.warmup) reps.push_back(r.wall_seconds);
    }
    out.per_testcase_times_s.push_back(median(reps));
    out.rep_times_s.push_back(std::move(reps));
  }
  const auto& times = out.per_testcase_times_s;
  out.mean_s = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  out.median_s = median(times);
  return out;
}

RunOutcome evaluate_program(std::string_view code, const std::vector<TestCase>& testcases,
                            const ToolchainConfig& toolchain, const MeasureOptions& options) {
  CompiledProgram program;
  try {
    program = compile_program(code, toolchain);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::CompileError) throw;
    spdlog::debug("compile failed: {}", e.detail());
    return failed(RunStatus::CompileError, e.detail());
  }
  return measure_execution(program.binary, testcases, options);
}

}  // namespace autopatch
