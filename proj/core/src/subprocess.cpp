#include "subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "gigazoom/geometry.hpp"

namespace gigazoom {

CommandResult run_command(const std::string& cmd, double timeout_sec) {
  int pipefd[2];
  if (pipe(pipefd) != 0) throw Error("run_command: pipe() failed");

  const pid_t pid = fork();
  if (pid < 0) {
    close(pipefd[0]);
    close(pipefd[1]);
    throw Error("run_command: fork() failed");
  }
  if (pid == 0) {
    setpgid(0, 0);  // own process group so a timeout kill reaps children too
    close(pipefd[0]);
    dup2(pipefd[1], STDERR_FILENO);
    close(pipefd[1]);
    int devnull = ::open("/dev/null", O_WRONLY);
    if (devnull >= 0) {
      dup2(devnull, STDOUT_FILENO);
      close(devnull);
    }
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  close(pipefd[1]);
  CommandResult res;
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_sec);
  constexpr std::size_t kMaxStderr = 64 * 1024;

  bool eof = false;
  bool exited = false;
  bool killed = false;
  int status = 0;
  while (!exited || !eof) {
    if (!exited) {
      const pid_t r = waitpid(pid, &status, WNOHANG);
      if (r == pid) exited = true;
    }
    if (!exited && !killed && std::chrono::steady_clock::now() >= deadline) {
      res.timed_out = true;
      killed = true;
      kill(-pid, SIGKILL);
      kill(pid, SIGKILL);
    }
    if (!eof) {
      pollfd pfd{pipefd[0], POLLIN, 0};
      const int pr = poll(&pfd, 1, exited ? 0 : 50);
      if (pr < 0 && errno != EINTR) {
        eof = true;
      } else if (pr > 0) {
        char buf[4096];
        const ssize_t n = read(pipefd[0], buf, sizeof buf);
        if (n > 0) {
          if (res.stderr_text.size() < kMaxStderr)
            res.stderr_text.append(
                buf, buf + std::min<std::size_t>(std::size_t(n),
                                                 kMaxStderr - res.stderr_text.size()));
        } else {
          eof = true;
        }
      } else if (exited) {
        eof = true;  // no more data after exit
      }
    } else if (!exited) {
      usleep(10 * 1000);
    }
  }
  close(pipefd[0]);

  if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status)) res.exit_code = 128 + WTERMSIG(status);
  return res;
}

}  // namespace gigazoom
