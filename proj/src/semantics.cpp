#include "gml/semantics.hpp"

#include <stdexcept>

#include "gml/table.hpp"

namespace gml {

namespace {

int count_in(const Bitset& worlds, const Bitset& truth) {
  return (worlds & truth).count();
}

}  // namespace

Bitset extension(const KripkeStructure& a, const Formula& f) {
  FormulaTable t = build_table(f);
  std::vector<Bitset> pred = predecessor_rows(a);
  Bitset all = Bitset::full(a.n);
  std::vector<Bitset> truth(t.entries.size(), Bitset(a.n));
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    const TableEntry& e = t.entries[i];
    Bitset& out = truth[i];
    switch (e.kind) {
      case Conn::Atom: {
        auto it = a.val.find(e.name);
        if (it != a.val.end()) out = it->second;
        break;
      }
      case Conn::True:
        out = all;
        break;
      case Conn::False:
        break;
      case Conn::Not:
        out = all;
        out.subtract(truth[e.lhs]);
        break;
      case Conn::And:
        out = truth[e.lhs] & truth[e.rhs];
        break;
      case Conn::Or:
        out = truth[e.lhs] | truth[e.rhs];
        break;
      case Conn::Implies:
        out = all;
        out.subtract(truth[e.lhs]);
        out |= truth[e.rhs];
        break;
      case Conn::Iff:
        for (int w = 0; w < a.n; ++w)
          if (truth[e.lhs].test(w) == truth[e.rhs].test(w)) out.set(w);
        break;
      case Conn::Dia:
        for (int w = 0; w < a.n; ++w)
          if (a.succ[w].intersects(truth[e.lhs])) out.set(w);
        break;
      case Conn::Box:
        for (int w = 0; w < a.n; ++w)
          if (a.succ[w].subset_of(truth[e.lhs])) out.set(w);
        break;
      case Conn::InvDia:
        for (int w = 0; w < a.n; ++w)
          if (pred[w].intersects(truth[e.lhs])) out.set(w);
        break;
      case Conn::InvBox:
        for (int w = 0; w < a.n; ++w)
          if (pred[w].subset_of(truth[e.lhs])) out.set(w);
        break;
      case Conn::DiaGeq:
        for (int w = 0; w < a.n; ++w)
          if (static_cast<std::uint64_t>(count_in(a.succ[w], truth[e.lhs])) >= e.grade)
            out.set(w);
        break;
      case Conn::DiaLeq:
        for (int w = 0; w < a.n; ++w)
          if (static_cast<std::uint64_t>(count_in(a.succ[w], truth[e.lhs])) <= e.grade)
            out.set(w);
        break;
      case Conn::InvDiaGeq:
        for (int w = 0; w < a.n; ++w)
          if (static_cast<std::uint64_t>(count_in(pred[w], truth[e.lhs])) >= e.grade)
            out.set(w);
        break;
      case Conn::InvDiaLeq:
        for (int w = 0; w < a.n; ++w)
          if (static_cast<std::uint64_t>(count_in(pred[w], truth[e.lhs])) <= e.grade)
            out.set(w);
        break;
    }
  }
  return truth[t.root];
}

bool satisfies(const KripkeStructure& a, int w, const Formula& f) {
  if (w < 0 || w >= a.n) throw std::out_of_range("satisfies: world index out of range");
  return extension(a, f).test(w);
}

bool globally_satisfies(const KripkeStructure& a, const Formula& f) {
  return extension(a, f) == Bitset::full(a.n);
}

std::optional<int> locally_satisfied(const KripkeStructure& a, const Formula& f) {
  int w = extension(a, f).first();
  if (w < 0) return std::nullopt;
  return w;
}

std::optional<int> combined_satisfies(const KripkeStructure& a, const Formula& f_global,
                                      const Formula& f_local) {
  if (!globally_satisfies(a, f_global)) return std::nullopt;
  return locally_satisfied(a, f_local);
}

}  // namespace gml
