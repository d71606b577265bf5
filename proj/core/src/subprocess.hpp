#pragma once

#include <string>

namespace gigazoom {

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string stderr_text;
};

// Runs cmd through /bin/sh with stdout silenced and stderr captured.
// A timeout kills the process group and reports timed_out.
CommandResult run_command(const std::string& cmd, double timeout_sec);

}  // namespace gigazoom
