#include "proactive/runner.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <fstream>

#include "proactive/error.hpp"

namespace proactive {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out += "'";
  return out;
}

std::string expand(std::string tmpl, const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = tmpl.find(key, pos)) != std::string::npos) {
    tmpl.replace(pos, key.size(), value);
    pos += value.size();
  }
  return tmpl;
}

struct Fd {
  int fd = -1;
  Fd() = default;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() { reset(); }
  void reset() {
    if (fd >= 0) ::close(fd);
    fd = -1;
  }
};

struct TempDir {
  std::filesystem::path path;
  ~TempDir() {
    std::error_code ec;
    if (!path.empty()) std::filesystem::remove_all(path, ec);
  }
};

// Appends up to the cap; the rest is counted and dropped.
struct CappedBuffer {
  std::string data;
  std::size_t dropped = 0;
  std::size_t cap;
  explicit CappedBuffer(std::size_t c) : cap(c) {}
  void add(const char* p, std::size_t n) {
    const std::size_t room = cap > data.size() ? cap - data.size() : 0;
    const std::size_t take = std::min(room, n);
    data.append(p, take);
    dropped += n - take;
  }
  std::string finish() && {
    if (dropped) data += "\n[output truncated: " + std::to_string(dropped) + " bytes dropped]";
    return std::move(data);
  }
};

}  // namespace

bool classify_error(int exit_status, const std::string& stderr_text, const std::regex& pattern) {
  return exit_status != 0 || std::regex_search(stderr_text, pattern);
}

CommandRunner::CommandRunner(CommandRunnerConfig cfg)
    : cfg_(std::move(cfg)), error_re_(cfg_.error_pattern, std::regex::ECMAScript) {
  if (cfg_.timeout.count() <= 0) throw Error(ErrorCode::configuration, "runner timeout must be > 0");
  if (cfg_.filename.empty() || cfg_.filename.find('/') != std::string::npos)
    throw Error(ErrorCode::configuration, "runner filename must be a plain file name");
}

RunResult CommandRunner::run(const std::string& code) {
  const auto started = std::chrono::steady_clock::now();
  TempDir dir;
  {
    auto root = cfg_.workspace_root.empty() ? std::filesystem::temp_directory_path()
                                            : cfg_.workspace_root;
    std::string templ = (root / "proactive-run-XXXXXX").string();
    if (!::mkdtemp(templ.data()))
      throw Error(ErrorCode::runner_unavailable, "cannot create run workspace");
    dir.path = templ;
  }
  const auto file = dir.path / cfg_.filename;
  {
    std::ofstream out(file, std::ios::binary);
    out << code;
    if (!out) throw Error(ErrorCode::runner_unavailable, "cannot write program file");
  }
  std::string command = expand(cfg_.command_template, "{file}", shell_quote(file.string()));
  command = expand(command, "{dir}", shell_quote(dir.path.string()));

  int out_pipe[2];
  int err_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::runner_unavailable, "pipe failed");
  Fd out_r(out_pipe[0]), out_w(out_pipe[1]);
  if (::pipe2(err_pipe, O_CLOEXEC) != 0) throw Error(ErrorCode::runner_unavailable, "pipe failed");
  Fd err_r(err_pipe[0]), err_w(err_pipe[1]);

  const std::string workdir = dir.path.string();
  const pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorCode::runner_unavailable, "fork failed");
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out_w.fd, STDOUT_FILENO);
    ::dup2(err_w.fd, STDERR_FILENO);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    if (::chdir(workdir.c_str()) != 0) ::_exit(127);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::setpgid(pid, pid);
  out_w.reset();
  err_w.reset();

  CappedBuffer out_buf(cfg_.output_cap);
  CappedBuffer err_buf(cfg_.output_cap);
  const auto deadline = started + cfg_.timeout;
  bool timed_out = false;
  std::array<char, 8192> chunk{};
  while (out_r.fd >= 0 || err_r.fd >= 0) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      ::kill(-pid, SIGKILL);
      break;
    }
    const auto wait_ms = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
    std::array<pollfd, 2> fds{{{out_r.fd, POLLIN, 0}, {err_r.fd, POLLIN, 0}}};
    const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(wait_ms, 100)));
    if (ready < 0 && errno != EINTR) break;
    for (std::size_t i = 0; i < fds.size(); ++i) {
      if (fds[i].fd < 0 || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const ssize_t n = ::read(fds[i].fd, chunk.data(), chunk.size());
      if (n > 0) {
        (i == 0 ? out_buf : err_buf).add(chunk.data(), static_cast<std::size_t>(n));
      } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
        (i == 0 ? out_r : err_r).reset();
      }
    }
  }

  int status = 0;
  ::waitpid(pid, &status, 0);
  // Anything still in the group (background children) goes too.
  ::kill(-pid, SIGKILL);

  RunResult r;
  r.timed_out = timed_out;
  if (WIFEXITED(status)) r.exit_status = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) r.exit_status = 128 + WTERMSIG(status);
  r.stdout_text = std::move(out_buf).finish();
  r.stderr_text = std::move(err_buf).finish();
  if (timed_out) {
    r.exit_status = 124;
    if (!r.stderr_text.empty() && r.stderr_text.back() != '\n') r.stderr_text += '\n';
    r.stderr_text += "[timed out after " + std::to_string(cfg_.timeout.count()) + " ms]";
  }
  r.is_error = timed_out || classify_error(r.exit_status, r.stderr_text, error_re_);
  r.duration = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - started);
  return r;
}

RunResult ScriptedRunner::run(const std::string&) {
  std::lock_guard lock(mu_);
  if (next_ >= results_.size())
    throw Error(ErrorCode::runner_unavailable, "scripted runner exhausted");
  return results_[next_++];
}

std::size_t ScriptedRunner::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

}  // namespace proactive
