#include "qbfmap/solve.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace qbfmap {

namespace {

std::string budget_message(std::uint64_t required, std::uint64_t budget) {
  std::ostringstream os;
  os << "expansion budget exceeded: problem needs " << required
     << " node-block copies (one per universal input assignment), budget is " << budget;
  return os.str();
}

} // namespace

ExpansionBudgetError::ExpansionBudgetError(std::uint64_t required, std::uint64_t budget)
    : std::runtime_error(budget_message(required, budget)), required_(required),
      budget_(budget) {}

ExpandedSat expand_to_sat(const QbfProblem& problem, std::uint64_t max_copies) {
  problem.validate();
  const std::size_t input_count = problem.input_vars.size();
  if (input_count >= 63)
    throw ExpansionBudgetError(std::numeric_limits<std::uint64_t>::max(), max_copies);
  const std::uint64_t copies = std::uint64_t{1} << input_count;
  if (copies > max_copies)
    throw ExpansionBudgetError(copies, max_copies);

  ExpandedSat out;
  out.config_count = problem.config_vars.size();
  out.copy_count = copies;
  out.nodes_per_copy = problem.node_vars.size();

  const std::uint64_t total_vars =
      out.config_count + copies * static_cast<std::uint64_t>(out.nodes_per_copy);
  if (total_vars > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max() - 1)) {
    const std::uint64_t fit =
        out.nodes_per_copy == 0
            ? max_copies
            : (static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max() - 1) -
               out.config_count) /
                  out.nodes_per_copy;
    throw ExpansionBudgetError(copies, fit);
  }

  // role per variable: 0 config, 1 input, 2 node; pos = index within its block
  const int nvars = problem.matrix.var_count();
  std::vector<std::uint8_t> role(static_cast<std::size_t>(nvars) + 1, 2);
  std::vector<std::uint32_t> pos(static_cast<std::size_t>(nvars) + 1, 0);
  for (std::size_t i = 0; i < problem.config_vars.size(); ++i) {
    role[static_cast<std::size_t>(problem.config_vars[i])] = 0;
    pos[static_cast<std::size_t>(problem.config_vars[i])] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t i = 0; i < problem.input_vars.size(); ++i) {
    role[static_cast<std::size_t>(problem.input_vars[i])] = 1;
    pos[static_cast<std::size_t>(problem.input_vars[i])] = static_cast<std::uint32_t>(i);
  }
  for (std::size_t i = 0; i < problem.node_vars.size(); ++i) {
    role[static_cast<std::size_t>(problem.node_vars[i])] = 2;
    pos[static_cast<std::size_t>(problem.node_vars[i])] = static_cast<std::uint32_t>(i);
  }

  out.clauses.reserve_vars(static_cast<int>(total_vars));
  std::vector<Lit> scratch;
  for (std::uint64_t a = 0; a < copies; ++a) {
    const std::size_t node_base = out.config_count + a * out.nodes_per_copy;
    for (std::size_t ci = 0; ci < problem.matrix.size(); ++ci) {
      bool satisfied = false;
      scratch.clear();
      for (const Lit l : problem.matrix.clause(ci)) {
        const int v = lit_var(l);
        switch (role[static_cast<std::size_t>(v)]) {
        case 0:
          scratch.push_back(make_lit(static_cast<int>(pos[static_cast<std::size_t>(v)]) + 1,
                                     lit_neg(l)));
          break;
        case 1: {
          const bool value = (a >> pos[static_cast<std::size_t>(v)]) & 1;
          if (value != lit_neg(l))
            satisfied = true;
          break;
        }
        default:
          scratch.push_back(make_lit(
              static_cast<int>(node_base + pos[static_cast<std::size_t>(v)]) + 1,
              lit_neg(l)));
          break;
        }
        if (satisfied)
          break;
      }
      if (satisfied)
        continue;
      if (scratch.empty()) { // clause over inputs only, falsified by this assignment
        out.trivially_unsat = true;
        return out;
      }
      out.clauses.add_clause(scratch);
    }
  }
  return out;
}

Configuration decode_configuration(const QbfProblem& problem,
                                   const std::vector<std::pair<int, bool>>& values) {
  Configuration cfg;
  for (const auto& [var, value] : values) {
    const VarInfo& info = problem.info(var);
    if (info.signal >= 0)
      cfg.bits[info.signal] = value;
  }
  return cfg;
}

Configuration decode_configuration_for_model(const QbfProblem& problem,
                                             const std::vector<std::pair<int, bool>>& values,
                                             const CircuitModel& model,
                                             std::vector<std::string>* warnings) {
  std::map<std::string, int> by_name;
  for (const Signal& s : model.signals)
    if (s.kind == SignalKind::config)
      by_name.emplace(s.name, s.id);

  Configuration cfg;
  for (const auto& [var, value] : values) {
    const VarInfo& info = problem.info(var);
    if (info.signal >= 0 && info.signal < static_cast<int>(model.signals.size()) &&
        model.signal(info.signal).kind == SignalKind::config) {
      cfg.bits[info.signal] = value;
      continue;
    }
    const auto it = info.name.empty() ? by_name.end() : by_name.find(info.name);
    if (it == by_name.end()) {
      if (warnings)
        warnings->push_back("config variable " + std::to_string(var) +
                            (info.name.empty() ? " has no symbol name"
                                               : " name '" + info.name +
                                                     "' matches no model config signal"));
      continue;
    }
    cfg.bits[it->second] = value;
  }
  for (const Signal& s : model.signals) {
    if (s.kind != SignalKind::config || cfg.bits.count(s.id))
      continue;
    cfg.bits[s.id] = false;
    if (warnings)
      warnings->push_back("config bit '" + s.name + "' missing from certificate; using 0");
  }
  return cfg;
}

SolveOutcome solve_embedded(const QbfProblem& problem, std::uint64_t max_copies,
                            std::function<bool()> cancel, bool activity_decisions) {
  SolveOutcome out;
  const ExpandedSat ex = expand_to_sat(problem, max_copies);
  if (ex.trivially_unsat) {
    out.status = SolveStatus::unsat;
    return out;
  }
  SatSolver solver(ex.clauses);
  solver.set_activity_decisions(activity_decisions);
  if (cancel)
    solver.set_cancel_check(std::move(cancel));
  const SatSolver::Result res = solver.solve();
  out.stats = solver.stats();
  switch (res) {
  case SatSolver::Result::unsat:
    out.status = SolveStatus::unsat;
    break;
  case SatSolver::Result::cancelled:
    out.status = SolveStatus::unknown;
    break;
  case SatSolver::Result::sat:
    out.status = SolveStatus::sat;
    out.config_values.reserve(problem.config_vars.size());
    for (std::size_t i = 0; i < problem.config_vars.size(); ++i)
      out.config_values.emplace_back(problem.config_vars[i],
                                     solver.value(ex.config_var(i)));
    out.config = decode_configuration(problem, out.config_values);
    break;
  }
  return out;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += '\'';
  return out;
}

struct TempFile {
  std::string path;
  ~TempFile() {
    if (!path.empty())
      ::unlink(path.c_str());
  }
};

} // namespace

SolveOutcome solve_external(const QbfProblem& problem, const std::string& command,
                            std::chrono::seconds timeout) {
  TempFile tmp;
  {
    char pattern[] = "/tmp/qbfmap-XXXXXX.qdimacs";
    const int fd = ::mkstemps(pattern, 8);
    if (fd < 0)
      throw std::runtime_error(std::string("cannot create temp file: ") +
                               std::strerror(errno));
    ::close(fd);
    tmp.path = pattern;
    std::ofstream os(tmp.path, std::ios::binary);
    write_qdimacs(problem, os);
    if (!os)
      throw std::runtime_error("cannot write temp file " + tmp.path);
  }

  int fds[2];
  if (::pipe(fds) != 0)
    throw std::runtime_error(std::string("pipe failed: ") + std::strerror(errno));
  const std::string cmdline = command + " " + shell_quote(tmp.path);
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw std::runtime_error(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    ::execl("/bin/sh", "sh", "-c", cmdline.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  ::setpgid(pid, pid);
  ::close(fds[1]);

  std::string output;
  bool timed_out = false;
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  char buf[4096];
  for (;;) {
    int wait_ms = -1;
    if (timeout.count() > 0 && !timed_out) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      wait_ms = static_cast<int>(std::max<std::int64_t>(left.count(), 0));
    }
    struct pollfd pfd = {fds[0], POLLIN, 0};
    const int pr = ::poll(&pfd, 1, wait_ms);
    if (pr < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    if (pr == 0) { // deadline passed with the solver still running
      timed_out = true;
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      continue;
    }
    const ssize_t n = ::read(fds[0], buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR)
        continue;
      break;
    }
    if (n == 0)
      break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(fds[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  SolveOutcome out;
  if (timed_out) {
    out.status = SolveStatus::unknown;
    return out;
  }
  if (WIFEXITED(status) && WEXITSTATUS(status) == 127)
    throw std::runtime_error("cannot run solver command: " + command);

  std::istringstream is(output);
  const SolverCertificate cert = parse_solver_output(is, problem);
  out.status = cert.status;
  if (WIFEXITED(status)) {
    const int code = WEXITSTATUS(status);
    if (code == 10)
      out.status = SolveStatus::sat;
    else if (code == 20)
      out.status = SolveStatus::unsat;
  }
  if (out.status == SolveStatus::sat) {
    out.config_values.reserve(problem.config_vars.size());
    for (const int v : problem.config_vars) {
      const auto it = cert.values.find(v);
      if (it == cert.values.end()) {
        out.missing.push_back(v);
        out.config_values.emplace_back(v, false);
      } else {
        out.config_values.emplace_back(v, it->second);
      }
    }
    out.config = decode_configuration(problem, out.config_values);
  }
  return out;
}

} // namespace qbfmap
