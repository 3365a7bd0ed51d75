#include "gml/sat.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <utility>

namespace gml {

namespace {

struct Clause {
  double activity = 0.0;
  bool learnt = false;
  bool deleted = false;
  std::vector<Lit> lits;
};

/// Indexed max-heap over variable activities.
struct VarHeap {
  std::vector<int> heap;
  std::vector<int> pos;  // var -> heap index, -1 when absent
  const std::vector<double>* act = nullptr;

  bool less(int a, int b) const { return (*act)[a] > (*act)[b]; }

  void up(int i) {
    int v = heap[i];
    while (i > 0) {
      int p = (i - 1) >> 1;
      if (!less(v, heap[p])) break;
      heap[i] = heap[p];
      pos[heap[i]] = i;
      i = p;
    }
    heap[i] = v;
    pos[v] = i;
  }
  void down(int i) {
    int v = heap[i];
    int n = static_cast<int>(heap.size());
    for (;;) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n && less(heap[c + 1], heap[c])) ++c;
      if (!less(heap[c], v)) break;
      heap[i] = heap[c];
      pos[heap[i]] = i;
      i = c;
    }
    heap[i] = v;
    pos[v] = i;
  }

  bool contains(int v) const { return v < static_cast<int>(pos.size()) && pos[v] >= 0; }
  void insert(int v) {
    if (contains(v)) return;
    if (v >= static_cast<int>(pos.size())) pos.resize(v + 1, -1);
    heap.push_back(v);
    up(static_cast<int>(heap.size()) - 1);
  }
  void update(int v) {
    if (contains(v)) up(pos[v]);
  }
  bool empty() const { return heap.empty(); }
  int pop() {
    int v = heap[0];
    pos[v] = -1;
    heap[0] = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      pos[heap[0]] = 0;
      down(0);
    }
    return v;
  }
};

/// Luby restart sequence: 1 1 2 1 1 2 4 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t k = 1;
  while ((std::uint64_t{1} << k) - 1 < i + 1) ++k;
  while ((std::uint64_t{1} << k) - 1 != i + 1) {
    --k;
    i -= (std::uint64_t{1} << k) - 1;
  }
  return std::uint64_t{1} << (k - 1);
}

}  // namespace

struct SatSolver::Impl {
  bool ok = true;
  std::vector<Clause*> clauses;
  std::vector<std::vector<Clause*>> watches;  // per literal

  std::vector<signed char> value;  // per var: 0 undef, 1 true, -1 false
  std::vector<int> level;
  std::vector<Clause*> reason;
  std::vector<bool> polarity;  // saved phase
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;

  std::vector<double> activity;
  double var_inc = 1.0;
  double cla_inc = 1.0;
  VarHeap order;

  std::vector<bool> seen;
  std::vector<bool> model;

  Lit const_true = -1;
  std::map<std::pair<Lit, Lit>, Lit> and_cache;

  std::uint64_t num_learnts = 0;
  double max_learnts = 0.0;

  Impl() { order.act = &activity; }
  ~Impl() {
    for (Clause* c : clauses) delete c;
  }

  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  signed char lit_value(Lit l) const {
    signed char v = value[lit_var(l)];
    return lit_sign(l) ? static_cast<signed char>(-v) : v;
  }

  int new_var() {
    int v = static_cast<int>(value.size());
    value.push_back(0);
    level.push_back(0);
    reason.push_back(nullptr);
    polarity.push_back(false);
    activity.push_back(0.0);
    seen.push_back(false);
    watches.emplace_back();
    watches.emplace_back();
    order.insert(v);
    return v;
  }

  void enqueue(Lit l, Clause* from) {
    int v = lit_var(l);
    value[v] = lit_sign(l) ? -1 : 1;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(l);
  }

  void attach(Clause* c) {
    watches[c->lits[0]].push_back(c);
    watches[c->lits[1]].push_back(c);
  }

  void add_clause(std::vector<Lit> lits) {
    if (!ok) return;
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      Lit l = lits[i];
      if (i > 0 && l == lits[i - 1]) continue;
      if (i > 0 && l == lit_neg(lits[i - 1])) return;  // tautology
      if (lit_value(l) == 1 && level[lit_var(l)] == 0) return;
      if (lit_value(l) == -1 && level[lit_var(l)] == 0) continue;
      out.push_back(l);
    }
    if (out.empty()) {
      ok = false;
      return;
    }
    if (out.size() == 1) {
      if (lit_value(out[0]) == -1) {
        ok = false;
      } else if (lit_value(out[0]) == 0) {
        enqueue(out[0], nullptr);
      }
      return;
    }
    Clause* c = new Clause;
    c->lits = std::move(out);
    clauses.push_back(c);
    attach(c);
  }

  Clause* propagate() {
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];      // p is now true
      Lit false_lit = lit_neg(p);  // clauses watching ~p must be checked
      std::vector<Clause*>& ws = watches[false_lit];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        Clause* c = ws[i];
        if (c->deleted) continue;
        if (c->lits[0] == false_lit) std::swap(c->lits[0], c->lits[1]);
        if (lit_value(c->lits[0]) == 1) {
          ws[keep++] = c;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c->lits.size(); ++k) {
          if (lit_value(c->lits[k]) != -1) {
            std::swap(c->lits[1], c->lits[k]);
            watches[c->lits[1]].push_back(c);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = c;
        if (lit_value(c->lits[0]) == -1) {
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          qhead = trail.size();
          return c;
        }
        enqueue(c->lits[0], c);
      }
      ws.resize(keep);
    }
    return nullptr;
  }

  void bump_var(int v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (double& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    order.update(v);
  }
  void bump_clause(Clause* c) {
    c->activity += cla_inc;
    if (c->activity > 1e20) {
      for (Clause* d : clauses)
        if (d->learnt) d->activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  /// First-UIP conflict analysis; fills `learnt` (asserting literal first) and
  /// returns the backtrack level.
  int analyze(Clause* conflict, std::vector<Lit>& learnt) {
    learnt.assign(1, 0);
    std::vector<int> to_clear;
    int counter = 0;
    Lit p = -1;
    int index = static_cast<int>(trail.size()) - 1;
    Clause* c = conflict;
    do {
      bump_clause(c);
      for (Lit q : c->lits) {
        if (q == p) continue;
        int v = lit_var(q);
        if (!seen[v] && level[v] > 0) {
          seen[v] = true;
          to_clear.push_back(v);
          bump_var(v);
          if (level[v] >= decision_level()) {
            ++counter;
          } else {
            learnt.push_back(q);
          }
        }
      }
      while (!seen[lit_var(trail[index])]) --index;
      p = trail[index--];
      seen[lit_var(p)] = true;  // stays set for minimization
      c = reason[lit_var(p)];
      --counter;
    } while (counter > 0);
    learnt[0] = lit_neg(p);

    // Local minimization: drop a literal whose whole reason is already seen.
    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
      int v = lit_var(learnt[i]);
      Clause* r = reason[v];
      bool redundant = r != nullptr;
      if (r) {
        for (Lit q : r->lits) {
          int u = lit_var(q);
          if (u != v && level[u] > 0 && !seen[u]) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[keep++] = learnt[i];
    }
    learnt.resize(keep);

    int bt = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < learnt.size(); ++i)
        if (level[lit_var(learnt[i])] > level[lit_var(learnt[max_i])]) max_i = i;
      std::swap(learnt[1], learnt[max_i]);
      bt = level[lit_var(learnt[1])];
    }
    for (int v : to_clear) seen[v] = false;
    seen[lit_var(p)] = false;
    return bt;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    int bound = trail_lim[lvl];
    for (int i = static_cast<int>(trail.size()) - 1; i >= bound; --i) {
      int v = lit_var(trail[i]);
      polarity[v] = value[v] > 0;
      value[v] = 0;
      reason[v] = nullptr;
      order.insert(v);
    }
    trail.resize(bound);
    trail_lim.resize(lvl);
    qhead = trail.size();
  }

  bool locked(const Clause* c) const {
    return lit_value(c->lits[0]) == 1 && reason[lit_var(c->lits[0])] == c;
  }

  void reduce_learnts() {
    std::vector<Clause*> learnt;
    for (Clause* c : clauses)
      if (c->learnt && !c->deleted) learnt.push_back(c);
    std::sort(learnt.begin(), learnt.end(),
              [](const Clause* a, const Clause* b) { return a->activity < b->activity; });
    std::size_t limit = learnt.size() / 2;
    for (std::size_t i = 0; i < limit; ++i) {
      Clause* c = learnt[i];
      if (c->lits.size() > 2 && !locked(c)) {
        c->deleted = true;
        --num_learnts;
      }
    }
    // Deleted clauses are skipped lazily in propagate; drop them from the
    // clause list here so memory does not accumulate across reductions.
    for (auto& ws : watches) {
      std::size_t keep = 0;
      for (Clause* c : ws)
        if (!c->deleted) ws[keep++] = c;
      ws.resize(keep);
    }
    std::size_t keep = 0;
    for (Clause* c : clauses) {
      if (c->deleted) {
        delete c;
      } else {
        clauses[keep++] = c;
      }
    }
    clauses.resize(keep);
  }

  bool solve() {
    if (!ok) return false;
    max_learnts = std::max<double>(1000.0, static_cast<double>(clauses.size()) / 3.0);
    std::uint64_t restart_index = 0;
    std::uint64_t conflicts_left = luby(restart_index) * 128;
    std::vector<Lit> learnt;
    for (;;) {
      Clause* confl = propagate();
      if (confl != nullptr) {
        if (decision_level() == 0) {
          ok = false;
          return false;
        }
        int bt = analyze(confl, learnt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], nullptr);
        } else {
          Clause* c = new Clause;
          c->learnt = true;
          c->lits = learnt;
          clauses.push_back(c);
          attach(c);
          bump_clause(c);
          ++num_learnts;
          enqueue(learnt[0], c);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;
        if (conflicts_left > 0) --conflicts_left;
      } else {
        if (conflicts_left == 0) {
          cancel_until(0);
          ++restart_index;
          conflicts_left = luby(restart_index) * 128;
          continue;
        }
        if (static_cast<double>(num_learnts) >= max_learnts + trail.size()) {
          reduce_learnts();
          max_learnts *= 1.2;
        }
        int next = -1;
        while (!order.empty()) {
          int v = order.pop();
          if (value[v] == 0) {
            next = v;
            break;
          }
        }
        if (next < 0) {
          model.assign(value.size(), false);
          for (std::size_t v = 0; v < value.size(); ++v) model[v] = value[v] > 0;
          cancel_until(0);
          return true;
        }
        trail_lim.push_back(static_cast<int>(trail.size()));
        enqueue(mk_lit(next, !polarity[next]), nullptr);
      }
    }
  }
};

SatSolver::SatSolver() : impl_(new Impl) {}
SatSolver::~SatSolver() { delete impl_; }

int SatSolver::new_var() { return impl_->new_var(); }
int SatSolver::num_vars() const { return static_cast<int>(impl_->value.size()); }

void SatSolver::add_clause(std::vector<Lit> clause) { impl_->add_clause(std::move(clause)); }

Lit SatSolver::constant(bool v) {
  if (impl_->const_true < 0) {
    int cv = new_var();
    impl_->const_true = mk_lit(cv);
    add_clause({impl_->const_true});
  }
  return v ? impl_->const_true : lit_neg(impl_->const_true);
}

Lit SatSolver::make_and(Lit a, Lit b) {
  Lit t = constant(true);
  Lit f = constant(false);
  if (a == f || b == f || a == lit_neg(b)) return f;
  if (a == t) return b;
  if (b == t) return a;
  if (a == b) return a;
  auto key = std::make_pair(std::min(a, b), std::max(a, b));
  auto it = impl_->and_cache.find(key);
  if (it != impl_->and_cache.end()) return it->second;
  Lit g = mk_lit(new_var());
  add_clause({lit_neg(g), a});
  add_clause({lit_neg(g), b});
  add_clause({g, lit_neg(a), lit_neg(b)});
  impl_->and_cache.emplace(key, g);
  return g;
}

Lit SatSolver::make_or(Lit a, Lit b) { return lit_neg(make_and(lit_neg(a), lit_neg(b))); }

Lit SatSolver::make_and(const std::vector<Lit>& ls) {
  Lit g = constant(true);
  for (Lit l : ls) g = make_and(g, l);
  return g;
}

Lit SatSolver::make_or(const std::vector<Lit>& ls) {
  Lit g = constant(false);
  for (Lit l : ls) g = make_or(g, l);
  return g;
}

Lit SatSolver::make_iff(Lit a, Lit b) {
  return make_or(make_and(a, b), make_and(lit_neg(a), lit_neg(b)));
}

Lit SatSolver::at_least(const std::vector<Lit>& lits, std::uint64_t k) {
  if (k == 0) return constant(true);
  if (k > lits.size()) return constant(false);
  // s[j] after processing i literals: "at least j of the first i are true".
  std::vector<Lit> s(k + 1, constant(false));
  s[0] = constant(true);
  std::uint64_t processed = 0;
  for (Lit x : lits) {
    ++processed;
    std::uint64_t top = std::min<std::uint64_t>(k, processed);
    for (std::uint64_t j = top; j >= 1; --j) s[j] = make_or(s[j], make_and(x, s[j - 1]));
  }
  return s[k];
}

bool SatSolver::solve() { return impl_->solve(); }

bool SatSolver::model_value(int var) const {
  return var < static_cast<int>(impl_->model.size()) && impl_->model[var];
}

}  // namespace gml
