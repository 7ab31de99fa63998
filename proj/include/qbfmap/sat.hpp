#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qbfmap/cnf.hpp"

namespace qbfmap {

// Conflict-driven clause learning SAT solver over a fixed ClauseSet.
//
// Decisions default to the lowest-numbered unassigned variable, set to false.
// That order is fully deterministic and tends to work well on the expanded
// mapping instances, where low variable numbers are configuration bits whose
// natural rest state is zero. set_activity_decisions(true) switches to a
// conflict-driven activity order (still deterministic: ties break on index).
//
// A sat result is checked against every input clause before being returned.
class SatSolver {
public:
  enum class Result { sat, unsat, cancelled };

  struct Stats {
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
    std::uint64_t learned = 0;
    std::uint64_t reductions = 0;
  };

  explicit SatSolver(const ClauseSet& cs);

  // Polled every few thousand conflicts; return true to abort the search.
  void set_cancel_check(std::function<bool()> fn) { cancel_ = std::move(fn); }
  void set_activity_decisions(bool on) { use_activity_ = on; }

  Result solve();

  // Valid after solve() returned sat.
  bool value(int var) const { return assigns_[static_cast<std::size_t>(var)] == 1; }

  const Stats& stats() const { return stats_; }
  int var_count() const { return nvars_; }

private:
  using ClauseRef = std::int32_t; // offset into mem_
  static constexpr ClauseRef no_reason = -1;

  struct Watch {
    ClauseRef cref;
    Lit blocker;
  };

  // Clause layout in mem_: [size][lbd][lit 0]...[lit size-1].
  int clause_size(ClauseRef c) const { return mem_[static_cast<std::size_t>(c)]; }
  int clause_lbd(ClauseRef c) const { return mem_[static_cast<std::size_t>(c) + 1]; }
  void set_clause_lbd(ClauseRef c, int lbd) { mem_[static_cast<std::size_t>(c) + 1] = lbd; }
  Lit* clause_lits(ClauseRef c) { return mem_.data() + c + 2; }
  const Lit* clause_lits(ClauseRef c) const { return mem_.data() + c + 2; }

  static std::size_t watch_index(Lit l) {
    return (static_cast<std::size_t>(lit_var(l)) << 1) | (l < 0 ? 1u : 0u);
  }

  // 1 true, 0 false, -1 unassigned.
  int lit_value(Lit l) const {
    const int a = assigns_[static_cast<std::size_t>(lit_var(l))];
    if (a < 0)
      return -1;
    return l > 0 ? a : 1 - a;
  }

  ClauseRef alloc_clause(const Lit* lits, int size, bool learnt);
  void attach_clause(ClauseRef c);
  void enqueue(Lit l, ClauseRef reason);
  ClauseRef propagate();
  void analyze(ClauseRef conflict, std::vector<Lit>& out, int& backtrack_level, int& lbd);
  void backtrack_to(int level);
  Lit pick_decision();
  void reduce_learnts();
  void garbage_collect();
  void bump_var(int v);
  bool verify_model() const;

  bool heap_less(int a, int b) const;
  void heap_sift_up(int pos);
  void heap_sift_down(int pos);
  void heap_insert(int v);
  int heap_pop();

  const ClauseSet& input_;
  int nvars_ = 0;
  bool ok_ = true;

  std::vector<Lit> mem_;
  std::vector<ClauseRef> originals_;
  std::vector<ClauseRef> learnts_;
  std::vector<std::vector<Watch>> watches_;

  std::vector<std::int8_t> assigns_;
  std::vector<int> levels_;
  std::vector<ClauseRef> reasons_;
  std::vector<Lit> trail_;
  std::vector<int> trail_lim_;
  std::size_t qhead_ = 0;
  int next_var_ = 1;

  bool use_activity_ = false;
  std::vector<double> activity_;
  double activity_inc_ = 1.0;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;

  std::vector<std::uint8_t> seen_;
  std::vector<Lit> to_clear_;
  std::vector<std::uint64_t> level_stamp_;
  std::uint64_t stamp_gen_ = 0;

  std::function<bool()> cancel_;
  Stats stats_;
};

} // namespace qbfmap
