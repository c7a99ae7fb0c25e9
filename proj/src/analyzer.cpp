#include "autopatch/analyzer.hpp"

#include <cstdlib>
#include <regex>

#include "autopatch/error.hpp"
#include "autopatch/process.hpp"
#include "autopatch/text.hpp"

namespace autopatch {

AnalyzerConfig AnalyzerConfig::from_env() {
  AnalyzerConfig config;
  if (const char* path = std::getenv("AUTOPATCH_ANALYZER_PATH"); path != nullptr && *path != '\0') {
    config.binary = path;
  }
  if (const char* flags = std::getenv("AUTOPATCH_ANALYZER_FLAGS"); flags != nullptr) {
    config.extra_flags = split_flags(flags);
  }
  return config;
}

std::vector<std::string> analyzer_command(const AnalyzerConfig& config, const std::string& source_file) {
  std::vector<std::string> argv{config.binary,
                                "--analyze",
                                "-Xanalyzer",
                                "-analyzer-checker=debug.DumpCFG",
                                "-w",
                                "-fno-caret-diagnostics",
                                "-o",
                                "/dev/null"};
  argv.insert(argv.end(), config.extra_flags.begin(), config.extra_flags.end());
  argv.push_back(source_file);
  return argv;
}

namespace {

const std::regex kDiagnosticLine(R"(^\S+:\d+:\d+: (warning|error|note|remark): .*$)");
const std::regex kSummaryLine(R"(^\d+ (warning|error)s? generated\.$)");

// Compiler diagnostics can share the stream with the dump.
std::string strip_diagnostics(std::string_view dump) {
  std::string out;
  out.reserve(dump.size());
  for (std::string_view line : text::split_lines(dump)) {
    const std::string s(line);
    if (!s.empty() && s.front() != ' ' && (std::regex_match(s, kDiagnosticLine) || std::regex_match(s, kSummaryLine))) {
      continue;
    }
    out += s;
    out += '\n';
  }
  return out;
}

}  // namespace

ControlFlowGraph select_function_cfg(std::string_view dump, std::string_view function) {
  for (const FunctionDump& fd : split_function_dumps(strip_diagnostics(dump))) {
    const std::string_view name = fd.name;
    const std::size_t ns = name.rfind("::");
    const std::string_view unqualified = ns == std::string_view::npos ? name : name.substr(ns + 2);
    if (name == function || unqualified == function) return parse_cfg_dump(fd.text);
  }
  throw Error(ErrorCode::FunctionNotFound, std::string(function));
}

ControlFlowGraph extract_cfg(std::string_view code, std::string_view function, const AnalyzerConfig& config) {
  if (!find_executable(config.binary)) throw Error(ErrorCode::AnalyzerNotFound, config.binary);
  TempDir dir("autopatch-cfg");
  // A fixed file name keeps `(lambda at input.cpp:L:C)` statement text stable.
  const std::string source_name = "input.cpp";
  text::write_file(dir.path() / source_name, code);

  ProcessOptions opts;
  opts.working_dir = dir.path();
  opts.timeout = config.timeout;
  const ProcessResult run = run_process(analyzer_command(config, source_name), opts);
  if (run.exec_failed) throw Error(ErrorCode::AnalyzerNotFound, config.binary + ": " + run.stderr_data);
  if (!run.ok()) {
    const std::string status = run.timed_out ? "timeout"
                               : run.signaled ? "signal " + std::to_string(run.term_signal)
                                              : "exit code " + std::to_string(run.exit_code);
    throw Error(ErrorCode::AnalyzerFailed, status + "\n" + run.stderr_data);
  }
  const std::string& dump = config.dump_stream == DumpStream::Stderr ? run.stderr_data : run.stdout_data;
  return select_function_cfg(dump, function);
}

}  // namespace autopatch
