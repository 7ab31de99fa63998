#include "qbfmap/qdimacs.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace qbfmap {

namespace {

class LineWriter {
public:
  explicit LineWriter(std::ostream& out) : out_(out) { buf_.reserve(flush_at * 2); }
  ~LineWriter() { flush(); }

  void text(const char* s) { buf_.append(s); }
  void text(const std::string& s) { buf_.append(s); }
  void number(long long v) {
    char tmp[24];
    const auto res = std::to_chars(tmp, tmp + sizeof tmp, v);
    buf_.append(tmp, res.ptr);
  }
  void end_line() {
    buf_.push_back('\n');
    if (buf_.size() >= flush_at)
      flush();
  }
  void flush() {
    if (!buf_.empty()) {
      out_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
      buf_.clear();
    }
  }

private:
  static constexpr std::size_t flush_at = 1 << 20;
  std::ostream& out_;
  std::string buf_;
};

void write_block(LineWriter& w, char quant, const std::vector<int>& vars) {
  if (vars.empty())
    return;
  w.text(quant == 'e' ? "e" : "a");
  for (const int v : vars) {
    w.text(" ");
    w.number(v);
  }
  w.text(" 0");
  w.end_line();
}

} // namespace

void write_qdimacs(const QbfProblem& problem, std::ostream& out) {
  LineWriter w(out);
  for (int v = 1; v <= problem.var_count(); ++v) {
    const VarInfo& s = problem.info(v);
    if (s.name.empty())
      continue;
    w.text("c var ");
    w.number(v);
    w.text(" ");
    w.text(to_string(s.role));
    w.text(" ");
    w.text(s.name);
    w.end_line();
  }
  w.text("p cnf ");
  w.number(problem.var_count());
  w.text(" ");
  w.number(static_cast<long long>(problem.matrix.size()));
  w.end_line();
  write_block(w, 'e', problem.config_vars);
  write_block(w, 'a', problem.input_vars);
  write_block(w, 'e', problem.node_vars);
  for (std::size_t i = 0; i < problem.matrix.size(); ++i) {
    bool first = true;
    for (const Lit l : problem.matrix.clause(i)) {
      if (!first)
        w.text(" ");
      w.number(l);
      first = false;
    }
    w.text(" 0");
    w.end_line();
  }
  w.flush();
  if (!out)
    throw std::runtime_error("write_qdimacs: stream write failed");
}

std::string to_qdimacs_string(const QbfProblem& problem) {
  std::ostringstream os;
  write_qdimacs(problem, os);
  return os.str();
}

namespace {

struct CommentSymbol {
  VarRole role;
  std::string name;
};

bool parse_int(const std::string& tok, long long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

} // namespace

QbfProblem parse_qdimacs(std::istream& in) {
  QbfProblem p;
  std::map<int, CommentSymbol> comment_symbols;
  std::vector<std::pair<char, std::vector<int>>> blocks;
  std::vector<Lit> pending; // clause literals carried across lines
  long long header_vars = -1, header_clauses = -1;
  bool in_matrix = false;
  int line_no = 0;
  int pending_line = 0;

  std::string line, tok;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    if (!(ls >> tok))
      continue; // blank line

    if (tok == "c") {
      std::string kw;
      if (ls >> kw && kw == "var") {
        long long v;
        std::string role_tok, name;
        if (!(ls >> role_tok) || !parse_int(role_tok, v)) {
          continue; // not our symbol format; plain comment
        }
        if (!(ls >> role_tok) || role_tok.size() != 1 ||
            (role_tok[0] != 'c' && role_tok[0] != 'x' && role_tok[0] != 'n'))
          throw ParseError(line_no, "bad role in symbol comment");
        std::getline(ls, name);
        const auto start = name.find_first_not_of(" \t");
        name = start == std::string::npos ? std::string() : name.substr(start);
        if (name.empty())
          throw ParseError(line_no, "symbol comment without a name");
        const VarRole role = role_tok[0] == 'c'   ? VarRole::config
                             : role_tok[0] == 'x' ? VarRole::input
                                                  : VarRole::node;
        comment_symbols[static_cast<int>(v)] = CommentSymbol{role, std::move(name)};
      }
      continue;
    }

    if (tok == "p") {
      if (header_vars >= 0)
        throw ParseError(line_no, "duplicate header");
      std::string fmt, vtok, ctok;
      if (!(ls >> fmt >> vtok >> ctok) || fmt != "cnf" ||
          !parse_int(vtok, header_vars) || !parse_int(ctok, header_clauses) ||
          header_vars < 0 || header_clauses < 0)
        throw ParseError(line_no, "malformed header, expected 'p cnf <vars> <clauses>'");
      continue;
    }

    if (header_vars < 0)
      throw ParseError(line_no, "clause or quantifier before 'p cnf' header");

    if (tok == "e" || tok == "a") {
      if (in_matrix || !pending.empty())
        throw ParseError(line_no, "quantifier line after the first clause");
      std::vector<int> vars;
      std::string t;
      bool terminated = false;
      while (ls >> t) {
        long long v;
        if (!parse_int(t, v))
          throw ParseError(line_no, "bad token in quantifier line: " + t);
        if (v == 0) {
          terminated = true;
          break;
        }
        if (v < 1 || v > header_vars)
          throw ParseError(line_no, "quantified variable out of range");
        vars.push_back(static_cast<int>(v));
      }
      if (!terminated)
        throw ParseError(line_no, "quantifier line not terminated by 0");
      if (!blocks.empty() && blocks.back().first == tok[0]) {
        auto& prev = blocks.back().second;
        prev.insert(prev.end(), vars.begin(), vars.end());
      } else {
        blocks.emplace_back(tok[0], std::move(vars));
      }
      continue;
    }

    // Clause data; clauses may span lines, each ends at a 0.
    ls.clear();
    ls.seekg(0);
    std::string t;
    while (ls >> t) {
      long long v;
      if (!parse_int(t, v))
        throw ParseError(line_no, "bad token in clause: " + t);
      if (v == 0) {
        if (pending.empty())
          throw ParseError(line_no, "empty clause");
        in_matrix = true;
        p.matrix.add_clause(pending);
        pending.clear();
      } else {
        if (v < -header_vars || v > header_vars)
          throw ParseError(line_no, "literal out of range: " + t);
        if (pending.empty())
          pending_line = line_no;
        pending.push_back(static_cast<Lit>(v));
        in_matrix = true;
      }
    }
  }

  if (!pending.empty())
    throw ParseError(pending_line, "clause not terminated by 0");
  if (header_vars < 0)
    throw ParseError(line_no, "missing 'p cnf' header");
  if (static_cast<long long>(p.matrix.size()) != header_clauses)
    throw ParseError(line_no, "header announces " + std::to_string(header_clauses) +
                                  " clauses but file has " +
                                  std::to_string(p.matrix.size()));
  p.matrix.reserve_vars(static_cast<int>(header_vars));

  // Map the blocks positionally onto the exists/forall/exists pattern.
  std::string shape;
  for (const auto& b : blocks)
    shape.push_back(b.first);
  std::size_t ci = std::string::npos, xi = std::string::npos, ni = std::string::npos;
  if (shape.empty()) {
    // propositional file: everything lands in the outer existential block
  } else if (shape == "e") {
    ci = 0;
  } else if (shape == "a") {
    xi = 0;
  } else if (shape == "ea") {
    ci = 0;
    xi = 1;
  } else if (shape == "ae") {
    xi = 0;
    ni = 1;
  } else if (shape == "eae") {
    ci = 0;
    xi = 1;
    ni = 2;
  } else {
    throw ParseError(line_no, "prefix '" + shape +
                                  "' does not fit the exists/forall/exists pattern");
  }
  if (ci != std::string::npos)
    p.config_vars = std::move(blocks[ci].second);
  if (xi != std::string::npos)
    p.input_vars = std::move(blocks[xi].second);
  if (ni != std::string::npos)
    p.node_vars = std::move(blocks[ni].second);

  // Variables never quantified default to the outermost existential block.
  {
    std::vector<std::uint8_t> bound(static_cast<std::size_t>(header_vars) + 1, 0);
    for (const int v : p.config_vars)
      bound[static_cast<std::size_t>(v)] = 1;
    for (const int v : p.input_vars)
      bound[static_cast<std::size_t>(v)] = 1;
    for (const int v : p.node_vars)
      bound[static_cast<std::size_t>(v)] = 1;
    std::vector<std::uint8_t> used(static_cast<std::size_t>(header_vars) + 1, 0);
    for (std::size_t i = 0; i < p.matrix.size(); ++i)
      for (const Lit l : p.matrix.clause(i))
        used[static_cast<std::size_t>(lit_var(l))] = 1;
    for (long long v = 1; v <= header_vars; ++v)
      if (used[static_cast<std::size_t>(v)] && !bound[static_cast<std::size_t>(v)])
        p.config_vars.push_back(static_cast<int>(v));
  }

  p.symbols.assign(static_cast<std::size_t>(p.var_count()), VarInfo{});
  const auto apply_roles = [&](const std::vector<int>& block, VarRole role) {
    for (const int v : block) {
      auto& s = p.symbols[static_cast<std::size_t>(v - 1)];
      s.role = role;
      const auto it = comment_symbols.find(v);
      if (it != comment_symbols.end()) {
        if (it->second.role != role)
          throw ParseError(0, "symbol comment role for variable " + std::to_string(v) +
                                  " disagrees with the quantifier prefix");
        s.name = it->second.name;
      }
    }
  };
  apply_roles(p.config_vars, VarRole::config);
  apply_roles(p.input_vars, VarRole::input);
  apply_roles(p.node_vars, VarRole::node);

  p.validate();
  return p;
}

const char* to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::sat: return "SAT";
  case SolveStatus::unsat: return "UNSAT";
  case SolveStatus::unknown: return "UNKNOWN";
  }
  return "?";
}

SolverCertificate parse_solver_output(std::istream& in, const QbfProblem& problem) {
  SolverCertificate cert;
  std::vector<std::uint8_t> outer(static_cast<std::size_t>(problem.var_count()) + 1, 0);
  for (const int v : problem.config_vars)
    outer[static_cast<std::size_t>(v)] = 1;

  bool saw_result = false;
  std::string line, tok;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (!(ls >> tok))
      continue;
    if (tok == "s") {
      std::string what;
      if (!(ls >> what))
        continue;
      if (what == "cnf") {
        long long answer;
        std::string atok;
        if (ls >> atok && parse_int(atok, answer)) {
          cert.status = answer == 1   ? SolveStatus::sat
                        : answer == 0 ? SolveStatus::unsat
                                      : SolveStatus::unknown;
          saw_result = true;
        }
      } else if (what == "SATISFIABLE" || what == "SAT") {
        cert.status = SolveStatus::sat;
        saw_result = true;
      } else if (what == "UNSATISFIABLE" || what == "UNSAT") {
        cert.status = SolveStatus::unsat;
        saw_result = true;
      } else if (what == "UNKNOWN") {
        cert.status = SolveStatus::unknown;
        saw_result = true;
      }
    } else if (tok == "V" || tok == "v") {
      std::string t;
      while (ls >> t) {
        long long l;
        if (!parse_int(t, l))
          throw CertificateError("bad certificate token: " + t);
        if (l == 0)
          continue;
        const long long v = l < 0 ? -l : l;
        if (v > problem.var_count() || !outer[static_cast<std::size_t>(v)])
          throw CertificateError("certificate assigns non-outer variable " +
                                 std::to_string(v));
        const bool value = l > 0;
        const auto it = cert.values.find(static_cast<int>(v));
        if (it != cert.values.end() && it->second != value)
          throw CertificateError("contradictory certificate literals for variable " +
                                 std::to_string(v));
        cert.values[static_cast<int>(v)] = value;
      }
    }
  }
  if (!saw_result)
    cert.status = SolveStatus::unknown;
  if (cert.status == SolveStatus::sat)
    for (const int v : problem.config_vars)
      if (!cert.values.count(v))
        cert.missing.push_back(v);
  return cert;
}

} // namespace qbfmap
