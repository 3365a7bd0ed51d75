#include "gml/kripke.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gml {

AxiomSet canonical_axioms(AxiomSet axioms) {
  for (;;) {
    AxiomSet before = axioms;
    if (axioms & AX_T) axioms |= AX_D;
    if ((axioms & AX_B) && (axioms & AX_4)) axioms |= AX_5;
    if ((axioms & AX_B) && (axioms & AX_5)) axioms |= AX_4;
    if ((axioms & AX_T) && (axioms & AX_5)) axioms |= AX_B;
    if (axioms == before) return axioms;
  }
}

FrameClass parse_frame_class(const std::string& name) {
  static const std::map<std::string, AxiomSet> table = {
      {"K", 0},
      {"D", AX_D},
      {"T", AX_T},
      {"B", AX_B},
      {"DB", AX_D | AX_B},
      {"TB", AX_T | AX_B},
      {"K4", AX_4},
      {"D4", AX_D | AX_4},
      {"S4", AX_T | AX_4},
      {"K5", AX_5},
      {"D5", AX_D | AX_5},
      {"K45", AX_4 | AX_5},
      {"D45", AX_D | AX_4 | AX_5},
      {"KB4", AX_B | AX_4},
      {"KB45", AX_B | AX_4 | AX_5},
      {"S5", AX_T | AX_5},
  };
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown frame class '" + name + "'");
  return FrameClass{canonical_axioms(it->second), name};
}

std::string axioms_to_string(AxiomSet axioms) {
  std::string out;
  auto add = [&](const char* s) {
    if (!out.empty()) out += ' ';
    out += s;
  };
  if (axioms & AX_D) add("D");
  if (axioms & AX_T) add("T");
  if (axioms & AX_B) add("B");
  if (axioms & AX_4) add("4");
  if (axioms & AX_5) add("5");
  return out.empty() ? "-" : out;
}

bool same_structure(const KripkeStructure& a, const KripkeStructure& b) {
  return a.n == b.n && a.succ == b.succ && a.val == b.val;
}

std::vector<Bitset> predecessor_rows(const KripkeStructure& a) {
  std::vector<Bitset> pred(a.n, Bitset(a.n));
  for (int w = 0; w < a.n; ++w)
    a.succ[w].for_each([&](int v) { pred[v].set(w); });
  return pred;
}

AxiomSet frame_axioms(const KripkeStructure& a) {
  AxiomSet out = AX_D | AX_T | AX_B | AX_4 | AX_5;
  for (int w = 0; w < a.n && out; ++w) {
    if (a.succ[w].none()) out &= ~AX_D;
    if (!a.succ[w].test(w)) out &= ~AX_T;
    for (int v = a.succ[w].first(); v >= 0; v = a.succ[w].next(v)) {
      if (!a.succ[v].test(w)) out &= ~AX_B;
      if (!a.succ[v].subset_of(a.succ[w])) out &= ~AX_4;
      if (!a.succ[w].subset_of(a.succ[v])) out &= ~AX_5;
    }
  }
  return out;
}

bool in_class(const KripkeStructure& a, const FrameClass& f) {
  return (frame_axioms(a) & f.axioms) == f.axioms;
}

Bitset lanterns(const KripkeStructure& a) {
  Bitset has_pred(a.n);
  for (int w = 0; w < a.n; ++w)
    a.succ[w].for_each([&](int v) { has_pred.set(v); });
  Bitset out(a.n);
  for (int w = 0; w < a.n; ++w)
    if (!has_pred.test(w)) out.set(w);
  return out;
}

Bitset inner_worlds(const KripkeStructure& a) {
  Bitset l = lanterns(a);
  Bitset out(a.n);
  for (int w = 0; w < a.n; ++w)
    if (!l.test(w)) out.set(w);
  return out;
}

Bitset clique_of(const KripkeStructure& a, int w) {
  Bitset out(a.n);
  out.set(w);
  a.succ[w].for_each([&](int v) {
    if (a.succ[v].test(w)) out.set(v);
  });
  return out;
}

std::vector<CliqueInfo> cliques(const KripkeStructure& a) {
  std::vector<int> comp(a.n, -1);
  int groups = 0;
  for (int w = 0; w < a.n; ++w) {
    if (comp[w] >= 0) continue;
    int id = groups++;
    std::vector<int> stack{w};
    comp[w] = id;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < a.n; ++v) {
        if (comp[v] < 0 && v != u && a.succ[u].test(v) && a.succ[v].test(u)) {
          comp[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  std::vector<CliqueInfo> out(groups, CliqueInfo{Bitset(a.n), true});
  for (int w = 0; w < a.n; ++w) out[comp[w]].members.set(w);
  for (auto& c : out) {
    if (c.members.count() < 2) continue;
    c.members.for_each([&](int u) {
      if (!c.members.subset_of(a.succ[u])) c.proper = false;
    });
  }
  return out;
}

bool is_connected(const KripkeStructure& a) {
  return a.n <= 1 || static_cast<int>(connected_components(a).size()) == 1;
}

std::vector<Bitset> connected_components(const KripkeStructure& a) {
  std::vector<Bitset> pred = predecessor_rows(a);
  std::vector<int> comp(a.n, -1);
  std::vector<Bitset> out;
  for (int w = 0; w < a.n; ++w) {
    if (comp[w] >= 0) continue;
    Bitset members(a.n);
    std::vector<int> stack{w};
    comp[w] = static_cast<int>(out.size());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      members.set(u);
      auto visit = [&](int v) {
        if (comp[v] < 0) {
          comp[v] = comp[w];
          stack.push_back(v);
        }
      };
      a.succ[u].for_each(visit);
      pred[u].for_each(visit);
    }
    out.push_back(members);
  }
  return out;
}

namespace {

bool strict_edge(const KripkeStructure& a, int w, int v) {
  return w != v && a.succ[w].test(v) && !a.succ[v].test(w);
}

// Longest strict-successor path from w, counted in edges. -1 marks a cycle.
std::int64_t depth_from(const KripkeStructure& a, int w, std::vector<std::int64_t>& memo,
                        std::vector<int>& state) {
  if (state[w] == 1) return -1;
  if (state[w] == 2) return memo[w];
  state[w] = 1;
  std::int64_t best = 0;
  for (int v = 0; v < a.n; ++v) {
    if (!strict_edge(a, w, v)) continue;
    std::int64_t d = depth_from(a, v, memo, state);
    if (d < 0) return -1;
    best = std::max(best, d + 1);
  }
  state[w] = 2;
  memo[w] = best;
  return best;
}

}  // namespace

DepthResult world_depth(const KripkeStructure& a, int w) {
  std::vector<std::int64_t> memo(a.n, 0);
  std::vector<int> state(a.n, 0);
  std::int64_t d = depth_from(a, w, memo, state);
  if (d < 0) return DepthResult{true, 0};
  return DepthResult{false, static_cast<std::uint64_t>(d)};
}

DepthResult depth(const KripkeStructure& a) {
  std::vector<std::int64_t> memo(a.n, 0);
  std::vector<int> state(a.n, 0);
  std::uint64_t best = 0;
  for (int w = 0; w < a.n; ++w) {
    std::int64_t d = depth_from(a, w, memo, state);
    if (d < 0) return DepthResult{true, 0};
    best = std::max<std::uint64_t>(best, static_cast<std::uint64_t>(d));
  }
  return DepthResult{false, best};
}

int width(const KripkeStructure& a) {
  int best = 0;
  for (int w = 0; w < a.n; ++w) best = std::max(best, clique_of(a, w).count());
  return best;
}

namespace {

int max_disjoint_family(const std::vector<Bitset>& sets, std::size_t i, const Bitset& used) {
  if (i >= sets.size()) return 0;
  int best = max_disjoint_family(sets, i + 1, used);  // skip sets[i]
  if (!sets[i].intersects(used)) {
    Bitset next = used;
    next |= sets[i];
    best = std::max(best, 1 + max_disjoint_family(sets, i + 1, next));
  }
  return best;
}

}  // namespace

int breadth(const KripkeStructure& a) {
  int best = 0;
  for (int w = 0; w < a.n; ++w) {
    Bitset qw = clique_of(a, w);
    std::vector<Bitset> cliq;
    for (int v = 0; v < a.n; ++v) {
      if (!strict_edge(a, w, v)) continue;
      Bitset qv = clique_of(a, v);
      bool direct = true;
      for (int u = a.succ[w].first(); u >= 0 && direct; u = a.succ[w].next(u)) {
        if (a.succ[u].test(v) && !qw.test(u) && !qv.test(u)) direct = false;
      }
      if (!direct) continue;
      if (std::find(cliq.begin(), cliq.end(), qv) == cliq.end()) cliq.push_back(qv);
    }
    best = std::max(best, max_disjoint_family(cliq, 0, Bitset(a.n)));
  }
  return best;
}

KripkeStructure transitive_closure(KripkeStructure a) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int w = 0; w < a.n; ++w) {
      Bitset merged = a.succ[w];
      a.succ[w].for_each([&](int v) { merged |= a.succ[v]; });
      if (merged != a.succ[w]) {
        a.succ[w] = merged;
        changed = true;
      }
    }
  }
  return a;
}

KripkeStructure reflexive_closure(KripkeStructure a) {
  for (int w = 0; w < a.n; ++w) a.succ[w].set(w);
  return a;
}

KripkeStructure euclidean_closure(KripkeStructure a) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int w = 0; w < a.n; ++w) {
      Bitset s = a.succ[w];
      for (int v = s.first(); v >= 0; v = s.next(v)) {
        Bitset merged = a.succ[v];
        merged |= s;
        if (merged != a.succ[v]) {
          a.succ[v] = merged;
          changed = true;
        }
      }
    }
  }
  return a;
}

KripkeStructure serial_completion(KripkeStructure a) {
  for (int w = 0; w < a.n; ++w)
    if (a.succ[w].none()) a.succ[w].set(w);
  return a;
}

KripkeStructure induced_substructure(const KripkeStructure& a, const Bitset& keep,
                                     std::vector<int>* old_to_new) {
  std::vector<int> map(a.n, -1);
  int m = 0;
  for (int w = 0; w < a.n; ++w)
    if (keep.test(w)) map[w] = m++;
  KripkeStructure out(m);
  for (int w = 0; w < a.n; ++w) {
    if (map[w] < 0) continue;
    a.succ[w].for_each([&](int v) {
      if (map[v] >= 0) out.add_edge(map[w], map[v]);
    });
  }
  for (const auto& [var, set] : a.val) {
    out.declare(var);
    set.for_each([&](int w) {
      if (map[w] >= 0) out.set_val(var, map[w]);
    });
  }
  if (old_to_new) *old_to_new = map;
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

namespace {

// Axiom instances that become checkable once rows 0..k are fixed. Rows are
// complete n-bit vectors, so violations found here are definitive.
bool rows_consistent(const KripkeStructure& a, int k, AxiomSet ax) {
  if ((ax & AX_D) && a.succ[k].none()) return false;
  if ((ax & AX_T) && !a.succ[k].test(k)) return false;
  if (ax & AX_B) {
    for (int j = 0; j < k; ++j) {
      if (a.succ[j].test(k) != a.succ[k].test(j)) return false;
    }
  }
  if (ax & AX_4) {
    for (int v = a.succ[k].first(); v >= 0; v = a.succ[k].next(v))
      if (v <= k && !a.succ[v].subset_of(a.succ[k])) return false;
    for (int u = 0; u < k; ++u)
      if (a.succ[u].test(k) && !a.succ[k].subset_of(a.succ[u])) return false;
  }
  if (ax & AX_5) {
    for (int v = a.succ[k].first(); v >= 0; v = a.succ[k].next(v))
      if (v <= k && !a.succ[k].subset_of(a.succ[v])) return false;
    for (int u = 0; u < k; ++u)
      if (a.succ[u].test(k) && !a.succ[u].subset_of(a.succ[k])) return false;
  }
  return true;
}

struct Enumerator {
  int n;
  std::vector<std::string> vars;
  AxiomSet ax;
  const std::function<bool(const KripkeStructure&)>* cb;
  KripkeStructure a;
  bool stopped = false;

  // One axiom may still fail after the last row when edges point forward to
  // rows whose own constraints were checked earlier; rows_consistent covers
  // every pair by the time k = n-1, so the full structure needs no re-check.
  void world(int w) {
    if (stopped) return;
    if (w == n) {
      if (!(*cb)(a)) stopped = true;
      return;
    }
    value_block(w, 0);
  }

  void value_block(int w, std::size_t vi) {
    if (stopped) return;
    if (vi == vars.size()) {
      row_block(w);
      return;
    }
    a.val.at(vars[vi]).reset(w);
    value_block(w, vi + 1);
    if (stopped) return;
    a.val.at(vars[vi]).set(w);
    value_block(w, vi + 1);
    a.val.at(vars[vi]).reset(w);
  }

  void row_block(int w) {
    // Lexicographic over bits 0..n-1 with bit 0 most significant.
    row_bit(w, 0);
  }

  void row_bit(int w, int j) {
    if (stopped) return;
    if (j == n) {
      if (rows_consistent(a, w, ax)) world(w + 1);
      return;
    }
    a.succ[w].reset(j);
    row_bit(w, j + 1);
    if (stopped) return;
    a.succ[w].set(j);
    row_bit(w, j + 1);
    a.succ[w].reset(j);
  }
};

}  // namespace

void enumerate_models(int n, const std::vector<std::string>& vars, const FrameClass& f,
                      std::uint64_t bit_budget,
                      const std::function<bool(const KripkeStructure&)>& cb) {
  std::uint64_t bits = static_cast<std::uint64_t>(n) * n +
                       static_cast<std::uint64_t>(n) * vars.size();
  if (bits > bit_budget)
    throw std::invalid_argument("enumeration needs " + std::to_string(bits) +
                                " bits, budget is " + std::to_string(bit_budget));
  Enumerator e;
  e.n = n;
  e.vars = vars;
  std::sort(e.vars.begin(), e.vars.end());
  e.ax = f.axioms;
  e.cb = &cb;
  e.a = KripkeStructure(n);
  for (const auto& v : e.vars) e.a.declare(v);
  e.world(0);
}

// ---------------------------------------------------------------------------
// Text formats
// ---------------------------------------------------------------------------

KripkeStructure parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_worlds = false;
  KripkeStructure a;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("model parse error at line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "worlds") {
      if (have_worlds) fail("duplicate worlds line");
      long long n;
      if (!(ls >> n) || n < 0) fail("expected nonnegative world count");
      a = KripkeStructure(static_cast<int>(n));
      have_worlds = true;
    } else if (head == "edge") {
      if (!have_worlds) fail("edge before worlds line");
      long long i, j;
      if (!(ls >> i >> j)) fail("expected 'edge i j'");
      if (i < 0 || i >= a.n || j < 0 || j >= a.n) fail("edge endpoint out of range");
      a.add_edge(static_cast<int>(i), static_cast<int>(j));
    } else if (head == "val") {
      if (!have_worlds) fail("val before worlds line");
      std::string name;
      if (!(ls >> name)) fail("expected variable name");
      if (!name.empty() && name.back() == ':') {
        name.pop_back();
      } else {
        std::string colon;
        if (!(ls >> colon) || colon != ":") fail("expected ':' after variable name");
      }
      if (name.empty()) fail("empty variable name");
      a.declare(name);
      long long w;
      while (ls >> w) {
        if (w < 0 || w >= a.n) fail("world index out of range in val line");
        a.set_val(name, static_cast<int>(w));
      }
      if (!ls.eof()) fail("expected world indices after ':'");
    } else {
      fail("unknown directive '" + head + "'");
    }
    std::string trailing;
    if (ls.clear(), ls >> trailing) fail("trailing content '" + trailing + "'");
  }
  if (!have_worlds) {
    lineno = 1;
    fail("missing worlds line");
  }
  return a;
}

std::string render_model(const KripkeStructure& a) {
  std::ostringstream out;
  out << "worlds " << a.n << "\n";
  for (int w = 0; w < a.n; ++w)
    a.succ[w].for_each([&](int v) { out << "edge " << w << " " << v << "\n"; });
  for (const auto& [var, set] : a.val) {
    out << "val " << var << ":";
    set.for_each([&](int w) { out << " " << w; });
    out << "\n";
  }
  return out.str();
}

std::string to_dot(const KripkeStructure& a) {
  std::ostringstream out;
  out << "digraph model {\n";
  for (int w = 0; w < a.n; ++w) {
    std::string label = std::to_string(w);
    std::string held;
    for (const auto& [var, set] : a.val)
      if (set.test(w)) held += (held.empty() ? "" : " ") + var;
    if (!held.empty()) label += "\\n" + held;
    out << "  w" << w << " [label=\"" << label << "\"];\n";
  }
  for (int w = 0; w < a.n; ++w)
    a.succ[w].for_each([&](int v) { out << "  w" << w << " -> w" << v << ";\n"; });
  out << "}\n";
  return out.str();
}

}  // namespace gml
