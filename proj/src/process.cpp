#include "autopatch/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <mutex>
#include <random>

#include "autopatch/error.hpp"

namespace autopatch {

namespace fs = std::filesystem;

TempDir::TempDir(std::string_view prefix) {
  std::string templ = (fs::temp_directory_path() / (std::string(prefix) + "-XXXXXX")).string();
  if (::mkdtemp(templ.data()) == nullptr) {
    throw Error(ErrorCode::Io, "mkdtemp failed: " + std::string(std::strerror(errno)));
  }
  path_ = templ;
}

TempDir::~TempDir() {
  if (path_.empty()) return;
  std::error_code ec;
  fs::remove_all(path_, ec);
}

TempDir::TempDir(TempDir&& other) noexcept : path_(std::move(other.path_)) { other.path_.clear(); }

TempDir& TempDir::operator=(TempDir&& other) noexcept {
  if (this != &other) {
    std::error_code ec;
    if (!path_.empty()) fs::remove_all(path_, ec);
    path_ = std::move(other.path_);
    other.path_.clear();
  }
  return *this;
}

namespace {

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

struct Pipe {
  int read = -1;
  int write = -1;
  Pipe() {
    std::array<int, 2> fds{};
    if (::pipe2(fds.data(), O_CLOEXEC) != 0) throw Error(ErrorCode::Io, "pipe failed");
    read = fds[0];
    write = fds[1];
  }
  ~Pipe() {
    close_fd(read);
    close_fd(write);
  }
  Pipe(const Pipe&) = delete;
  Pipe& operator=(const Pipe&) = delete;
};

}  // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const ProcessOptions& options) {
  if (argv.empty()) throw Error(ErrorCode::Usage, "run_process: empty argv");
  ignore_sigpipe_once();

  Pipe in_pipe;
  Pipe out_pipe;
  Pipe err_pipe;
  Pipe exec_status;  // child writes errno here if execvp fails

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  const std::string cwd = options.working_dir ? options.working_dir->string() : std::string();

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorCode::Io, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe.read, STDIN_FILENO);
    ::dup2(out_pipe.write, STDOUT_FILENO);
    ::dup2(err_pipe.write, STDERR_FILENO);
    if (!cwd.empty() && ::chdir(cwd.c_str()) != 0) {
      const int e = errno;
      (void)!::write(exec_status.write, &e, sizeof e);
      ::_exit(127);
    }
    ::execvp(cargv[0], cargv.data());
    const int e = errno;
    (void)!::write(exec_status.write, &e, sizeof e);
    ::_exit(127);
  }
  ::setpgid(pid, pid);

  close_fd(in_pipe.read);
  close_fd(out_pipe.write);
  close_fd(err_pipe.write);
  close_fd(exec_status.write);

  ProcessResult result;
  int child_errno = 0;
  if (::read(exec_status.read, &child_errno, sizeof child_errno) == static_cast<ssize_t>(sizeof child_errno)) {
    result.exec_failed = true;
  }

  ::fcntl(in_pipe.write, F_SETFL, O_NONBLOCK);
  std::size_t written = 0;
  if (options.stdin_data.empty()) close_fd(in_pipe.write);

  std::array<char, 65536> buf{};
  bool killed = false;
  while (out_pipe.read >= 0 || err_pipe.read >= 0) {
    std::array<pollfd, 3> pfds{};
    nfds_t n = 0;
    int out_idx = -1, err_idx = -1, in_idx = -1;
    if (out_pipe.read >= 0) {
      pfds[n] = {out_pipe.read, POLLIN, 0};
      out_idx = static_cast<int>(n++);
    }
    if (err_pipe.read >= 0) {
      pfds[n] = {err_pipe.read, POLLIN, 0};
      err_idx = static_cast<int>(n++);
    }
    if (in_pipe.write >= 0) {
      pfds[n] = {in_pipe.write, POLLOUT, 0};
      in_idx = static_cast<int>(n++);
    }
    int wait_ms = -1;
    if (options.timeout && !killed) {
      const auto elapsed = std::chrono::steady_clock::now() - start;
      const auto remaining = *options.timeout - elapsed;
      wait_ms = std::max(0, static_cast<int>(std::chrono::duration<double, std::milli>(remaining).count()) + 1);
    }
    const int rc = ::poll(pfds.data(), n, wait_ms);
    if (rc < 0 && errno == EINTR) continue;
    if (options.timeout && !killed && std::chrono::steady_clock::now() - start >= *options.timeout) {
      ::kill(-pid, SIGKILL);
      killed = true;
      result.timed_out = true;
      close_fd(in_pipe.write);
    }
    auto drain = [&](int idx, int& fd, std::string& sink) {
      if (idx < 0 || (pfds[idx].revents & (POLLIN | POLLHUP | POLLERR)) == 0) return;
      const ssize_t got = ::read(fd, buf.data(), buf.size());
      if (got <= 0) {
        close_fd(fd);
        return;
      }
      if (sink.size() < options.output_limit) sink.append(buf.data(), static_cast<std::size_t>(got));
    };
    drain(out_idx, out_pipe.read, result.stdout_data);
    drain(err_idx, err_pipe.read, result.stderr_data);
    if (in_idx >= 0 && in_pipe.write >= 0 && (pfds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
      const ssize_t put = ::write(in_pipe.write, options.stdin_data.data() + written, options.stdin_data.size() - written);
      if (put < 0 && errno != EAGAIN) {
        close_fd(in_pipe.write);
      } else if (put > 0) {
        written += static_cast<std::size_t>(put);
        if (written == options.stdin_data.size()) close_fd(in_pipe.write);
      }
    }
  }
  close_fd(in_pipe.write);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!result.timed_out && options.timeout && result.wall_seconds > options.timeout->count()) result.timed_out = true;
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signaled = !result.timed_out;
    result.term_signal = WTERMSIG(status);
  }
  if (result.exec_failed) {
    result.stderr_data = "exec failed: " + std::string(std::strerror(child_errno));
  }
  return result;
}

std::optional<fs::path> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  auto executable = [](const fs::path& p) { return ::access(p.c_str(), X_OK) == 0 && fs::is_regular_file(p); };
  if (name.find('/') != std::string::npos) {
    if (executable(name)) return fs::path(name);
    return std::nullopt;
  }
  const char* path_env = std::getenv("PATH");
  std::string_view dirs = path_env != nullptr ? path_env : "/usr/bin:/bin";
  while (!dirs.empty()) {
    const std::size_t colon = dirs.find(':');
    const std::string_view dir = dirs.substr(0, colon);
    if (!dir.empty()) {
      fs::path candidate = fs::path(dir) / name;
      if (executable(candidate)) return candidate;
    }
    if (colon == std::string_view::npos) break;
    dirs.remove_prefix(colon + 1);
  }
  return std::nullopt;
}

std::vector<std::string> split_flags(std::string_view flags) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : flags) {
    if (c == ' ' || c == '\t' || c == '\n') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace autopatch
