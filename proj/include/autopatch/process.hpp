#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace autopatch {

/// Owns a freshly created directory under the system temp path and removes it
/// on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view prefix = "autopatch");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  TempDir(TempDir&& other) noexcept;
  TempDir& operator=(TempDir&& other) noexcept;

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

struct ProcessOptions {
  std::string stdin_data;
  std::optional<std::chrono::duration<double>> timeout;
  std::optional<std::filesystem::path> working_dir;
  std::size_t output_limit = 64U << 20U;
};

struct ProcessResult {
  int exit_code = -1;       // valid when !signaled && !timed_out
  int term_signal = 0;      // valid when signaled
  bool signaled = false;
  bool timed_out = false;
  bool exec_failed = false;  // the program could not be started
  std::string stdout_data;
  std::string stderr_data;
  double wall_seconds = 0.0;

  [[nodiscard]] bool ok() const noexcept { return !exec_failed && !timed_out && !signaled && exit_code == 0; }
};

/// Runs argv[0] (PATH-resolved) with the given arguments. The child gets its
/// own process group, which is killed as a whole on timeout. Wall time covers
/// spawn to reap.
ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options = {});

/// Resolves a program name against PATH; absolute and relative paths are
/// checked directly.
std::optional<std::filesystem::path> find_executable(const std::string& name);

/// Splits a flag string on whitespace (no quoting rules).
std::vector<std::string> split_flags(std::string_view flags);

}  // namespace autopatch
