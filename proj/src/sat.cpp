#include "qbfmap/sat.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace qbfmap {

namespace {

// Luby restart sequence: 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t k = 1;
  while ((std::uint64_t{1} << k) - 1 < i + 1)
    ++k;
  while ((std::uint64_t{1} << k) - 1 != i + 1) {
    --k;
    i %= (std::uint64_t{1} << k) - 1;
  }
  return std::uint64_t{1} << (k - 1);
}

constexpr std::uint64_t restart_base = 512;
constexpr std::uint64_t cancel_poll_interval = 1024;

} // namespace

SatSolver::SatSolver(const ClauseSet& cs) : input_(cs), nvars_(cs.var_count()) {
  const std::size_t n = static_cast<std::size_t>(nvars_) + 1;
  watches_.resize(n * 2);
  assigns_.assign(n, -1);
  levels_.assign(n, 0);
  reasons_.assign(n, no_reason);
  seen_.assign(n, 0);
  level_stamp_.assign(n, 0);
  activity_.assign(n, 0.0);
  heap_pos_.assign(n, -1);
  mem_.reserve(cs.literal_count() + 2 * cs.size());

  for (std::size_t i = 0; i < cs.size() && ok_; ++i) {
    const auto c = cs.clause(i);
    if (c.size() == 1) {
      const int val = lit_value(c[0]);
      if (val == 0)
        ok_ = false;
      else if (val < 0)
        enqueue(c[0], no_reason);
    } else {
      const ClauseRef cr = alloc_clause(c.data(), static_cast<int>(c.size()), false);
      originals_.push_back(cr);
      attach_clause(cr);
    }
  }
}

SatSolver::ClauseRef SatSolver::alloc_clause(const Lit* lits, int size, bool learnt) {
  const ClauseRef cr = static_cast<ClauseRef>(mem_.size());
  mem_.push_back(size);
  mem_.push_back(learnt ? 1 : 0);
  mem_.insert(mem_.end(), lits, lits + size);
  return cr;
}

void SatSolver::attach_clause(ClauseRef c) {
  const Lit* lits = clause_lits(c);
  watches_[watch_index(lits[0])].push_back(Watch{c, lits[1]});
  watches_[watch_index(lits[1])].push_back(Watch{c, lits[0]});
}

void SatSolver::enqueue(Lit l, ClauseRef reason) {
  const int v = lit_var(l);
  assigns_[static_cast<std::size_t>(v)] = l > 0 ? 1 : 0;
  levels_[static_cast<std::size_t>(v)] = static_cast<int>(trail_lim_.size());
  reasons_[static_cast<std::size_t>(v)] = reason;
  trail_.push_back(l);
}

SatSolver::ClauseRef SatSolver::propagate() {
  ClauseRef confl = no_reason;
  while (qhead_ < trail_.size()) {
    const Lit p = trail_[qhead_++]; // p just became true
    ++stats_.propagations;
    auto& ws = watches_[watch_index(-p)];
    std::size_t i = 0, j = 0;
    const Lit false_lit = -p;
    while (i < ws.size()) {
      const Watch w = ws[i++];
      if (lit_value(w.blocker) == 1) {
        ws[j++] = w;
        continue;
      }
      const ClauseRef cr = w.cref;
      Lit* lits = clause_lits(cr);
      const int size = clause_size(cr);
      if (lits[0] == false_lit)
        std::swap(lits[0], lits[1]);
      const Lit first = lits[0];
      if (first != w.blocker && lit_value(first) == 1) {
        ws[j++] = Watch{cr, first};
        continue;
      }
      bool moved = false;
      for (int k = 2; k < size; ++k) {
        if (lit_value(lits[k]) != 0) {
          std::swap(lits[1], lits[k]);
          watches_[watch_index(lits[1])].push_back(Watch{cr, first});
          moved = true;
          break;
        }
      }
      if (moved)
        continue;
      ws[j++] = Watch{cr, first};
      if (lit_value(first) == 0) { // every literal false: conflict
        confl = cr;
        qhead_ = trail_.size();
        while (i < ws.size())
          ws[j++] = ws[i++];
      } else {
        enqueue(first, cr);
      }
    }
    ws.resize(j);
    if (confl != no_reason)
      break;
  }
  return confl;
}

void SatSolver::bump_var(int v) {
  if (!use_activity_)
    return;
  auto& a = activity_[static_cast<std::size_t>(v)];
  a += activity_inc_;
  if (a > 1e100) {
    for (auto& x : activity_)
      x *= 1e-100;
    activity_inc_ *= 1e-100;
  }
  if (heap_pos_[static_cast<std::size_t>(v)] >= 0)
    heap_sift_up(heap_pos_[static_cast<std::size_t>(v)]);
}

void SatSolver::analyze(ClauseRef conflict, std::vector<Lit>& out, int& backtrack_level,
                        int& lbd) {
  out.clear();
  out.push_back(0); // slot for the asserting literal
  const int current_level = static_cast<int>(trail_lim_.size());
  int path_count = 0;
  Lit p = 0;
  std::size_t index = trail_.size();
  ClauseRef reason = conflict;

  do {
    const Lit* lits = clause_lits(reason);
    const int size = clause_size(reason);
    for (int k = (p == 0 ? 0 : 1); k < size; ++k) {
      const Lit q = lits[k];
      const int v = lit_var(q);
      if (seen_[static_cast<std::size_t>(v)] || levels_[static_cast<std::size_t>(v)] == 0)
        continue;
      seen_[static_cast<std::size_t>(v)] = 1;
      bump_var(v);
      if (levels_[static_cast<std::size_t>(v)] >= current_level)
        ++path_count;
      else
        out.push_back(q);
    }
    while (!seen_[static_cast<std::size_t>(lit_var(trail_[index - 1]))])
      --index;
    --index;
    p = trail_[index];
    reason = reasons_[static_cast<std::size_t>(lit_var(p))];
    seen_[static_cast<std::size_t>(lit_var(p))] = 0;
    --path_count;
  } while (path_count > 0);
  out[0] = -p;

  // Drop literals implied by the rest of the clause (single-step check).
  // Sound because reasons only reference literals assigned earlier.
  to_clear_.assign(out.begin(), out.end());
  std::size_t kept = 1;
  for (std::size_t k = 1; k < out.size(); ++k) {
    const int v = lit_var(out[k]);
    const ClauseRef r = reasons_[static_cast<std::size_t>(v)];
    bool redundant = false;
    if (r != no_reason) {
      redundant = true;
      const Lit* rl = clause_lits(r);
      const int rs = clause_size(r);
      for (int t = 1; t < rs; ++t) {
        const int rv = lit_var(rl[t]);
        if (!seen_[static_cast<std::size_t>(rv)] &&
            levels_[static_cast<std::size_t>(rv)] != 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant)
      out[kept++] = out[k];
  }
  out.resize(kept);

  // Backtrack destination: highest level below the asserting literal's.
  backtrack_level = 0;
  if (out.size() > 1) {
    std::size_t max_at = 1;
    for (std::size_t k = 2; k < out.size(); ++k)
      if (levels_[static_cast<std::size_t>(lit_var(out[k]))] >
          levels_[static_cast<std::size_t>(lit_var(out[max_at]))])
        max_at = k;
    std::swap(out[1], out[max_at]);
    backtrack_level = levels_[static_cast<std::size_t>(lit_var(out[1]))];
  }

  ++stamp_gen_;
  lbd = 0;
  for (const Lit q : out) {
    const int lvl = levels_[static_cast<std::size_t>(lit_var(q))];
    if (level_stamp_[static_cast<std::size_t>(lvl)] != stamp_gen_) {
      level_stamp_[static_cast<std::size_t>(lvl)] = stamp_gen_;
      ++lbd;
    }
  }

  for (const Lit q : to_clear_)
    seen_[static_cast<std::size_t>(lit_var(q))] = 0;
}

void SatSolver::backtrack_to(int level) {
  if (static_cast<int>(trail_lim_.size()) <= level)
    return;
  const std::size_t new_size = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
  for (std::size_t i = trail_.size(); i-- > new_size;) {
    const int v = lit_var(trail_[i]);
    assigns_[static_cast<std::size_t>(v)] = -1;
    reasons_[static_cast<std::size_t>(v)] = no_reason;
    if (use_activity_ && heap_pos_[static_cast<std::size_t>(v)] < 0)
      heap_insert(v);
  }
  trail_.resize(new_size);
  trail_lim_.resize(static_cast<std::size_t>(level));
  qhead_ = trail_.size();
  next_var_ = 1;
}

// ---- decision heap (activity mode) ----

bool SatSolver::heap_less(int a, int b) const {
  const double aa = activity_[static_cast<std::size_t>(a)];
  const double ab = activity_[static_cast<std::size_t>(b)];
  if (aa != ab)
    return aa > ab; // higher activity first
  return a < b;
}

void SatSolver::heap_sift_up(int pos) {
  const int v = heap_[static_cast<std::size_t>(pos)];
  while (pos > 0) {
    const int parent = (pos - 1) / 2;
    if (!heap_less(v, heap_[static_cast<std::size_t>(parent)]))
      break;
    heap_[static_cast<std::size_t>(pos)] = heap_[static_cast<std::size_t>(parent)];
    heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(pos)])] = pos;
    pos = parent;
  }
  heap_[static_cast<std::size_t>(pos)] = v;
  heap_pos_[static_cast<std::size_t>(v)] = pos;
}

void SatSolver::heap_sift_down(int pos) {
  const int v = heap_[static_cast<std::size_t>(pos)];
  const int size = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * pos + 1;
    if (child >= size)
      break;
    if (child + 1 < size &&
        heap_less(heap_[static_cast<std::size_t>(child + 1)], heap_[static_cast<std::size_t>(child)]))
      ++child;
    if (!heap_less(heap_[static_cast<std::size_t>(child)], v))
      break;
    heap_[static_cast<std::size_t>(pos)] = heap_[static_cast<std::size_t>(child)];
    heap_pos_[static_cast<std::size_t>(heap_[static_cast<std::size_t>(pos)])] = pos;
    pos = child;
  }
  heap_[static_cast<std::size_t>(pos)] = v;
  heap_pos_[static_cast<std::size_t>(v)] = pos;
}

void SatSolver::heap_insert(int v) {
  heap_.push_back(v);
  heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(heap_.size()) - 1;
  heap_sift_up(static_cast<int>(heap_.size()) - 1);
}

int SatSolver::heap_pop() {
  const int v = heap_[0];
  heap_pos_[static_cast<std::size_t>(v)] = -1;
  const int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[static_cast<std::size_t>(last)] = 0;
    heap_sift_down(0);
  }
  return v;
}

Lit SatSolver::pick_decision() {
  if (use_activity_) {
    while (!heap_.empty()) {
      const int v = heap_pop();
      if (assigns_[static_cast<std::size_t>(v)] < 0)
        return make_lit(v, true);
    }
    return 0;
  }
  while (next_var_ <= nvars_ && assigns_[static_cast<std::size_t>(next_var_)] >= 0)
    ++next_var_;
  if (next_var_ > nvars_)
    return 0;
  return make_lit(next_var_, true); // false first
}

void SatSolver::reduce_learnts() {
  ++stats_.reductions;
  std::stable_sort(learnts_.begin(), learnts_.end(), [&](ClauseRef a, ClauseRef b) {
    if (clause_lbd(a) != clause_lbd(b))
      return clause_lbd(a) < clause_lbd(b);
    return clause_size(a) < clause_size(b);
  });
  const std::size_t keep_target = learnts_.size() / 2;
  std::vector<ClauseRef> kept;
  kept.reserve(learnts_.size());
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    const ClauseRef c = learnts_[i];
    const Lit* lits = clause_lits(c);
    const bool locked = reasons_[static_cast<std::size_t>(lit_var(lits[0]))] == c &&
                        assigns_[static_cast<std::size_t>(lit_var(lits[0]))] >= 0;
    if (locked || clause_lbd(c) <= 3 || clause_size(c) <= 2 || kept.size() < keep_target)
      kept.push_back(c);
  }
  learnts_ = std::move(kept);
  garbage_collect();
}

void SatSolver::garbage_collect() {
  std::vector<Lit> fresh;
  fresh.reserve(mem_.size());
  const auto move_clause = [&](ClauseRef c) {
    const ClauseRef nc = static_cast<ClauseRef>(fresh.size());
    const int size = clause_size(c);
    fresh.insert(fresh.end(), mem_.begin() + c, mem_.begin() + c + 2 + size);
    return nc;
  };
  std::vector<std::pair<ClauseRef, ClauseRef>> remap;
  remap.reserve(originals_.size() + learnts_.size());
  for (auto& c : originals_) {
    const ClauseRef nc = move_clause(c);
    remap.emplace_back(c, nc);
    c = nc;
  }
  for (auto& c : learnts_) {
    const ClauseRef nc = move_clause(c);
    remap.emplace_back(c, nc);
    c = nc;
  }
  mem_ = std::move(fresh);
  std::sort(remap.begin(), remap.end());
  const auto relocate = [&](ClauseRef c) {
    const auto it = std::lower_bound(remap.begin(), remap.end(),
                                     std::make_pair(c, ClauseRef{0}),
                                     [](const auto& a, const auto& b) { return a.first < b.first; });
    assert(it != remap.end() && it->first == c);
    return it->second;
  };
  for (int v = 1; v <= nvars_; ++v)
    if (reasons_[static_cast<std::size_t>(v)] != no_reason)
      reasons_[static_cast<std::size_t>(v)] = relocate(reasons_[static_cast<std::size_t>(v)]);
  for (auto& ws : watches_)
    ws.clear();
  for (const ClauseRef c : originals_)
    attach_clause(c);
  for (const ClauseRef c : learnts_)
    attach_clause(c);
}

bool SatSolver::verify_model() const {
  std::vector<std::uint8_t> values(static_cast<std::size_t>(nvars_) + 1, 0);
  for (int v = 1; v <= nvars_; ++v)
    values[static_cast<std::size_t>(v)] = assigns_[static_cast<std::size_t>(v)] == 1;
  return input_.satisfied_by(values);
}

SatSolver::Result SatSolver::solve() {
  if (!ok_)
    return Result::unsat;
  if (use_activity_) {
    heap_.clear();
    for (int v = 1; v <= nvars_; ++v)
      if (assigns_[static_cast<std::size_t>(v)] < 0)
        heap_insert(v);
      else
        heap_pos_[static_cast<std::size_t>(v)] = -1;
  }

  std::vector<Lit> learnt;
  std::uint64_t conflicts_since_restart = 0;
  std::uint64_t restart_budget = luby(0) * restart_base;
  std::uint64_t next_reduce = 2000;
  std::uint64_t ticks = 0; // conflicts + decisions, drives cancellation polling

  for (;;) {
    const ClauseRef confl = propagate();
    if (confl != no_reason) {
      ++stats_.conflicts;
      ++conflicts_since_restart;
      if (trail_lim_.empty())
        return Result::unsat;
      int btlevel = 0, lbd = 0;
      analyze(confl, learnt, btlevel, lbd);
      backtrack_to(btlevel);
      if (learnt.size() == 1) {
        enqueue(learnt[0], no_reason);
      } else {
        const ClauseRef cr =
            alloc_clause(learnt.data(), static_cast<int>(learnt.size()), true);
        set_clause_lbd(cr, lbd);
        attach_clause(cr);
        learnts_.push_back(cr);
        enqueue(learnt[0], cr);
      }
      ++stats_.learned;
      activity_inc_ /= 0.95;

      if (cancel_ && ++ticks % cancel_poll_interval == 0 && cancel_())
        return Result::cancelled;
      if (stats_.learned >= next_reduce) {
        reduce_learnts();
        next_reduce = stats_.learned + 2000 + 300 * stats_.reductions;
      }
    } else {
      if (conflicts_since_restart >= restart_budget) {
        ++stats_.restarts;
        conflicts_since_restart = 0;
        restart_budget = luby(stats_.restarts) * restart_base;
        backtrack_to(0);
        continue;
      }
      if (static_cast<int>(trail_.size()) == nvars_) {
        if (!verify_model())
          throw std::logic_error("internal error: model fails clause check");
        return Result::sat;
      }
      const Lit d = pick_decision();
      if (d == 0) {
        // only unreferenced variables left unassigned; default them to false
        bool progressed = false;
        for (int v = 1; v <= nvars_; ++v)
          if (assigns_[static_cast<std::size_t>(v)] < 0) {
            trail_lim_.push_back(static_cast<int>(trail_.size()));
            enqueue(make_lit(v, true), no_reason);
            progressed = true;
            break;
          }
        if (!progressed)
          throw std::logic_error("internal error: no decision but vars unassigned");
        continue;
      }
      ++stats_.decisions;
      if (cancel_ && ++ticks % cancel_poll_interval == 0 && cancel_())
        return Result::cancelled;
      trail_lim_.push_back(static_cast<int>(trail_.size()));
      enqueue(d, no_reason);
    }
  }
}

} // namespace qbfmap
