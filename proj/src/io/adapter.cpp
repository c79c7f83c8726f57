#include "mlspec/io/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <map>

#include "mlspec/error.hpp"
#include "mlspec/io/world_file.hpp"

namespace mlspec::io {

namespace {

[[noreturn]] void crashed(const AdapterSpec& a, const std::string& why) {
  throw Error(ErrorCode::AdapterCrashed, "adapter '" + a.command + "' " + why);
}

struct Pipe {
  int fd[2] = {-1, -1};
  ~Pipe() {
    for (int f : fd) {
      if (f >= 0) ::close(f);
    }
  }
  void close(int end) {
    if (fd[end] >= 0) ::close(fd[end]);
    fd[end] = -1;
  }
};

}  // namespace

std::vector<std::string> exchange_lines(const AdapterSpec& adapter, const std::vector<std::string>& requests) {
  std::string payload;
  for (const auto& r : requests) {
    payload += r;
    payload += '\n';
  }

  Pipe to_child;
  Pipe from_child;
  if (::pipe(to_child.fd) != 0 || ::pipe(from_child.fd) != 0) crashed(adapter, "could not create pipes");

  pid_t pid = ::fork();
  if (pid < 0) crashed(adapter, "could not fork");
  if (pid == 0) {
    ::dup2(to_child.fd[0], STDIN_FILENO);
    ::dup2(from_child.fd[1], STDOUT_FILENO);
    ::close(to_child.fd[0]);
    ::close(to_child.fd[1]);
    ::close(from_child.fd[0]);
    ::close(from_child.fd[1]);
    ::signal(SIGPIPE, SIG_DFL);
    if (!adapter.directory.empty() && ::chdir(adapter.directory.c_str()) != 0) ::_exit(126);
    ::execl("/bin/sh", "sh", "-c", adapter.command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  to_child.close(0);
  from_child.close(1);

  // Writing into a pipe whose reader has exited must not kill us.
  struct sigaction ignore {};
  struct sigaction previous {};
  ignore.sa_handler = SIG_IGN;
  ::sigaction(SIGPIPE, &ignore, &previous);

  ::fcntl(to_child.fd[1], F_SETFL, ::fcntl(to_child.fd[1], F_GETFL) | O_NONBLOCK);
  std::size_t written = 0;
  std::string output;
  if (payload.empty()) to_child.close(1);
  char buf[65536];
  while (from_child.fd[0] >= 0) {
    pollfd fds[2];
    nfds_t n = 0;
    fds[n++] = {from_child.fd[0], POLLIN, 0};
    if (to_child.fd[1] >= 0) fds[n++] = {to_child.fd[1], POLLOUT, 0};
    if (::poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t k = ::write(to_child.fd[1], payload.data() + written, payload.size() - written);
      if (k > 0) written += static_cast<std::size_t>(k);
      if (k < 0 && errno != EAGAIN && errno != EINTR) written = payload.size();  // reader gone
      if (written >= payload.size()) to_child.close(1);
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      ssize_t k = ::read(from_child.fd[0], buf, sizeof buf);
      if (k > 0) {
        output.append(buf, static_cast<std::size_t>(k));
      } else if (k == 0 || (errno != EINTR && errno != EAGAIN)) {
        from_child.close(0);
      }
    }
  }
  to_child.close(1);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  ::sigaction(SIGPIPE, &previous, nullptr);

  if (WIFSIGNALED(status)) crashed(adapter, "killed by signal " + std::to_string(WTERMSIG(status)));
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    crashed(adapter, "exited with status " + std::to_string(WEXITSTATUS(status)));
  }

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < output.size()) {
    std::size_t end = output.find('\n', start);
    if (end == std::string::npos) end = output.size();
    std::string l = output.substr(start, end - start);
    if (!l.empty() && l.back() == '\r') l.pop_back();
    lines.push_back(std::move(l));
    start = end + 1;
  }
  return lines;
}

std::string encode_input(const Value& x) {
  if (x.is_label()) return x.symbol();
  std::string out;
  for (const auto& c : x.components()) {
    if (!out.empty()) out += '\t';
    auto exact = to_finite_decimal(c);
    out += exact ? *exact : to_decimal(c, 20);
  }
  return out;
}

std::vector<Value> run_adapter(const AdapterSpec& adapter, std::span<const Value> inputs,
                               const std::set<std::string>& labels) {
  std::vector<std::string> requests;
  requests.reserve(inputs.size());
  for (const auto& v : inputs) requests.push_back(encode_input(v));
  std::vector<std::string> lines = exchange_lines(adapter, requests);
  if (lines.size() != inputs.size()) {
    std::size_t at = std::min(lines.size(), inputs.size()) + 1;
    throw Error(ErrorCode::ProtocolViolation,
                "adapter '" + adapter.command + "' answered " + std::to_string(lines.size()) +
                    " line(s) for " + std::to_string(inputs.size()) + " input(s) (line " +
                    std::to_string(at) + ")");
  }
  std::vector<Value> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& l = lines[i];
    if (!valid_label(l)) {
      throw Error(ErrorCode::ProtocolViolation, "adapter '" + adapter.command + "' line " +
                                                    std::to_string(i + 1) + ": malformed label '" + l + "'");
    }
    if (!labels.empty() && !labels.count(l)) {
      throw Error(ErrorCode::UnknownLabel, "adapter '" + adapter.command + "' line " +
                                               std::to_string(i + 1) + ": label '" + l +
                                               "' is not declared");
    }
    out.push_back(Value::label(l));
  }
  return out;
}

World label_world(const World& w, const AdapterSpec& adapter, const std::string& variable,
                  const std::set<std::string>& labels) {
  std::map<Value, std::size_t> index;
  std::vector<Value> inputs;
  for (const auto& s : w.states()) {
    const Value& x = s.at("x");
    if (index.try_emplace(x, inputs.size()).second) inputs.push_back(x);
  }
  std::vector<Value> answers = run_adapter(adapter, inputs, labels);
  std::vector<std::pair<State, std::uint64_t>> entries;
  auto states = w.states();
  auto counts = w.counts();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Value& label = answers[index.at(states[i].at("x"))];
    entries.emplace_back(states[i].with(variable, label), counts[i]);
  }
  return World::from_counts(std::move(entries), w.name());
}

}  // namespace mlspec::io
