#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qbfmap/cnf.hpp"
#include "qbfmap/model.hpp"
#include "qbfmap/qdimacs.hpp"
#include "qbfmap/sat.hpp"

namespace qbfmap {

// Expansion is exponential in the number of universal inputs; the budget is a
// copy-count cap so callers fail fast instead of exhausting memory.
class ExpansionBudgetError : public std::runtime_error {
public:
  ExpansionBudgetError(std::uint64_t required, std::uint64_t budget);

  std::uint64_t required_copies() const { return required_; }
  std::uint64_t budget() const { return budget_; }

private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

// Propositional image of a config/input/node problem: configuration variables
// are shared, the node block is copied once per input assignment, and input
// literals are evaluated away.
struct ExpandedSat {
  ClauseSet clauses;
  std::size_t config_count = 0;
  std::uint64_t copy_count = 0;
  std::size_t nodes_per_copy = 0;
  bool trivially_unsat = false; // a clause over inputs only evaluated to empty

  // Sat variable holding config_vars[index] of the source problem.
  int config_var(std::size_t index) const { return static_cast<int>(index) + 1; }

  // Sat variable holding node_vars[index] in the copy for one input assignment.
  int node_var(std::uint64_t copy, std::size_t index) const {
    return static_cast<int>(config_count + copy * nodes_per_copy + index) + 1;
  }
};

// Input assignments are enumerated in binary counting order with
// input_vars[0] as the least significant bit.
ExpandedSat expand_to_sat(const QbfProblem& problem,
                          std::uint64_t max_copies = std::uint64_t{1} << 20);

struct SolveOutcome {
  SolveStatus status = SolveStatus::unknown;
  // One entry per config variable of the problem, in prefix order. Only
  // meaningful when status == sat.
  std::vector<std::pair<int, bool>> config_values;
  // Config variables the solver left unassigned (external path); their
  // entries in config_values default to false.
  std::vector<int> missing;
  Configuration config; // signal-keyed view of config_values
  SatSolver::Stats stats; // embedded path only
};

SolveOutcome solve_embedded(const QbfProblem& problem,
                            std::uint64_t max_copies = std::uint64_t{1} << 20,
                            std::function<bool()> cancel = {},
                            bool activity_decisions = false);

// Runs `command <file.qdimacs>` through the shell on a temp file. Exit codes
// 10/20 are taken as SAT/UNSAT; otherwise the output result line decides.
// Returns unknown on timeout (timeout <= 0 disables the limit).
SolveOutcome solve_external(const QbfProblem& problem, const std::string& command,
                            std::chrono::seconds timeout = std::chrono::seconds{0});

// Maps config variable values back to model signals via the symbol table.
// Variables without a signal link are ignored.
Configuration decode_configuration(const QbfProblem& problem,
                                   const std::vector<std::pair<int, bool>>& values);

// Same, but for problems parsed from QDIMACS, where symbols carry names but
// no signal ids: variables are matched to the model's config signals by name.
// Unmatched values and config bits absent from `values` (defaulted to false)
// are reported through `warnings` when given.
Configuration decode_configuration_for_model(const QbfProblem& problem,
                                             const std::vector<std::pair<int, bool>>& values,
                                             const CircuitModel& model,
                                             std::vector<std::string>* warnings = nullptr);

} // namespace qbfmap
