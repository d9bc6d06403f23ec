#include "absa/external_simulator.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <sstream>
#include <vector>

#include "absa/errors.hpp"

namespace absa {

namespace {

std::string format_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Expands {seed} and {param:NAME} placeholders. Returns false with a reason
// when the template names a parameter absent from the request.
bool expand_template(const std::string& tmpl, const RunRequest& request,
                     std::string& out, std::string& reason) {
  out.clear();
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t open = tmpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tmpl, pos, std::string::npos);
      break;
    }
    out.append(tmpl, pos, open - pos);
    const std::size_t close = tmpl.find('}', open);
    if (close == std::string::npos) {
      out.append(tmpl, open, std::string::npos);
      break;
    }
    const std::string token = tmpl.substr(open + 1, close - open - 1);
    if (token == "seed") {
      out += std::to_string(request.seed);
    } else if (token.rfind("param:", 0) == 0) {
      const std::string name = token.substr(6);
      auto it = request.parameters.find(name);
      if (it == request.parameters.end()) {
        reason = "template references unknown parameter '" + name + "'";
        return false;
      }
      out += format_decimal(it->second);
    } else {
      // Not a recognized placeholder; pass through verbatim.
      out.append(tmpl, open, close - open + 1);
    }
    pos = close + 1;
  }
  return true;
}

struct ChildResult {
  bool spawned = false;
  bool timed_out = false;
  int exit_code = -1;
  int term_signal = 0;
  std::string stdout_text;
  std::string error;
};

constexpr std::size_t kMaxStdout = 1 << 20;

ChildResult run_child(const std::string& command, const std::string& working_dir,
                      double timeout_s) {
  ChildResult result;

  int fds[2];
  if (pipe(fds) != 0) {
    result.error = std::string("pipe: ") + std::strerror(errno);
    return result;
  }

  const pid_t pid = fork();
  if (pid < 0) {
    result.error = std::string("fork: ") + std::strerror(errno);
    close(fds[0]);
    close(fds[1]);
    return result;
  }

  if (pid == 0) {
    // Child: route stdout into the pipe and hand off to the shell.
    close(fds[0]);
    if (!working_dir.empty() && chdir(working_dir.c_str()) != 0) _exit(126);
    if (dup2(fds[1], STDOUT_FILENO) < 0) _exit(126);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  result.spawned = true;
  close(fds[1]);

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  char buf[4096];
  bool open = true;
  while (open) {
    const auto remaining = deadline - std::chrono::steady_clock::now();
    const long remaining_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(remaining).count();
    if (remaining_ms <= 0) {
      result.timed_out = true;
      kill(pid, SIGKILL);
      break;
    }
    struct pollfd pfd{fds[0], POLLIN, 0};
    const int rc = poll(&pfd, 1, static_cast<int>(std::min(remaining_ms, 1000L)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      result.error = std::string("poll: ") + std::strerror(errno);
      kill(pid, SIGKILL);
      break;
    }
    if (rc == 0) continue;
    const ssize_t got = read(fds[0], buf, sizeof(buf));
    if (got < 0) {
      if (errno == EINTR) continue;
      result.error = std::string("read: ") + std::strerror(errno);
      kill(pid, SIGKILL);
      break;
    }
    if (got == 0) {
      open = false;
    } else if (result.stdout_text.size() + static_cast<std::size_t>(got) > kMaxStdout) {
      result.error = "child produced more than 1 MiB of output";
      kill(pid, SIGKILL);
      break;
    } else {
      result.stdout_text.append(buf, static_cast<std::size_t>(got));
    }
  }
  close(fds[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.term_signal = WTERMSIG(status);
  }
  return result;
}

bool parse_finite_double(const std::string& text, double& value) {
  if (text.empty()) return false;
  char* end = nullptr;
  errno = 0;
  value = std::strtod(text.c_str(), &end);
  if (errno != 0 || end != text.c_str() + text.size()) return false;
  return std::isfinite(value);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    // Trim surrounding spaces; the protocol is plain CSV without quoting.
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

RunRecord run_external(const SimulatorSpec& spec, const RunRequest& request) {
  if (spec.kind != SimulatorSpec::Kind::external)
    throw InvalidSpec("run_external requires an external simulator spec");

  std::string command;
  std::string reason;
  if (!expand_template(spec.command, request, command, reason))
    return RunRecord::failure(request, "protocol: " + reason);

  ChildResult child = run_child(command, spec.working_dir, spec.timeout_s);
  if (!child.spawned) return RunRecord::failure(request, "spawn: " + child.error);
  if (child.timed_out)
    return RunRecord::failure(request,
                              "timeout after " + format_decimal(spec.timeout_s) + " s");
  if (!child.error.empty()) return RunRecord::failure(request, "spawn: " + child.error);
  if (child.term_signal != 0)
    return RunRecord::failure(request, "terminated by signal " + std::to_string(child.term_signal));
  if (child.exit_code != 0)
    return RunRecord::failure(request, "exit code " + std::to_string(child.exit_code));

  // Exactly two non-empty lines: header names, then values of the same arity.
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(child.stdout_text);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.size() != 2)
    return RunRecord::failure(
        request, "protocol: expected 2 output lines, got " + std::to_string(lines.size()));

  const std::vector<std::string> names = split_csv_line(lines[0]);
  const std::vector<std::string> values = split_csv_line(lines[1]);
  if (names.size() != values.size())
    return RunRecord::failure(request, "protocol: header and value arity differ");

  const std::set<std::string> declared(spec.outputs.begin(), spec.outputs.end());
  std::map<std::string, double> outputs;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!declared.count(names[i]))
      return RunRecord::failure(request, "protocol: undeclared output '" + names[i] + "'");
    double v = 0.0;
    if (!parse_finite_double(values[i], v))
      return RunRecord::failure(
          request, "protocol: value '" + values[i] + "' for output '" + names[i] +
                       "' is not a finite decimal");
    if (!outputs.emplace(names[i], v).second)
      return RunRecord::failure(request, "protocol: duplicate output '" + names[i] + "'");
  }
  if (outputs.size() != declared.size())
    return RunRecord::failure(request, "protocol: missing declared outputs");

  return RunRecord::success(request, std::move(outputs));
}

}  // namespace absa
