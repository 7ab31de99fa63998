#pragma once

#include "qbfmap/cnf.hpp"

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qbfmap {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

private:
  int line_;
};

class CertificateError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Serializes the problem as QDIMACS: named variables as `c var <v> <role>
/// <name>` comments, the `p cnf` header, one quantifier line per non-empty
/// block (e / a / e), then the clauses.  Output bytes depend only on the
/// problem contents.
void write_qdimacs(const QbfProblem& problem, std::ostream& out);

std::string to_qdimacs_string(const QbfProblem& problem);

/// Reads QDIMACS back into a problem.  Quantifier blocks are mapped
/// positionally onto the exists/forall/exists pattern; `c var` comments, when
/// present, supply names and must agree with the block roles.  Variables the
/// prefix does not mention default to the outermost existential block.
/// Throws ParseError on malformed input or a prefix that does not fit the
/// pattern.
QbfProblem parse_qdimacs(std::istream& in);

enum class SolveStatus { sat, unsat, unknown };

const char* to_string(SolveStatus s);

/// Outer-block certificate recovered from solver output.
struct SolverCertificate {
  SolveStatus status = SolveStatus::unknown;
  std::map<int, bool> values; ///< assignments to outer (config) variables
  std::vector<int> missing;   ///< outer variables the certificate left open
};

/// Parses solver stdout: an `s cnf <answer> ...` or `s SATISFIABLE`-style
/// result line plus `V <lit> 0` / `v <lits> 0` certificate lines.  Certificate
/// literals must refer to outer-block variables and must not contradict each
/// other; violations raise CertificateError.
SolverCertificate parse_solver_output(std::istream& in, const QbfProblem& problem);

} // namespace qbfmap
