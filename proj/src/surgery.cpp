#include "gml/surgery.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "gml/semantics.hpp"

namespace gml {

namespace {

std::vector<std::string> declared_names(const KripkeStructure& a) {
  std::vector<std::string> names;
  names.reserve(a.val.size());
  for (const auto& [name, bits] : a.val) names.push_back(name);
  return names;  // map order is sorted
}

OneType type_from(const std::vector<const Bitset*>& columns, int w) {
  OneType t;
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i]->test(w)) t.bits |= std::uint64_t{1} << i;
  return t;
}

std::vector<const Bitset*> type_columns(const KripkeStructure& a) {
  if (a.val.size() > 64)
    throw std::invalid_argument("1-types support at most 64 declared variables");
  std::vector<const Bitset*> columns;
  columns.reserve(a.val.size());
  for (const auto& [name, bits] : a.val) columns.push_back(&bits);
  return columns;
}

void cap_counts(std::map<OneType, std::uint64_t>& counts, std::uint64_t cap) {
  for (auto& [t, c] : counts) c = std::min(c, cap);
}

// H and B of a clique, shared by profile and clique_type.
void here_and_below(const KripkeStructure& a, const Bitset& clique, std::uint64_t k,
                    std::map<OneType, std::uint64_t>& here, std::set<OneType>& below) {
  auto columns = type_columns(a);
  clique.for_each([&](int w) { ++here[type_from(columns, w)]; });
  cap_counts(here, k + 1);
  for (int w = 0; w < a.n; ++w) {
    if (clique.test(w)) continue;
    if (a.succ[w].intersects(clique)) below.insert(type_from(columns, w));
  }
}

Formula require_transitive_model(const KripkeStructure& a, const NormalForm& nf,
                                 const char* who) {
  if (!(frame_axioms(a) & AX_4))
    throw std::invalid_argument(std::string(who) + ": input relation is not transitive");
  Formula psi = nf_to_formula(nf);
  if (!globally_satisfies(a, psi))
    throw std::invalid_argument(std::string(who) +
                                ": input does not globally satisfy the normal form");
  return psi;
}

std::vector<Bitset> body_extensions(const KripkeStructure& a,
                                    const std::vector<LeqConjunct>& leq) {
  std::vector<Bitset> out;
  out.reserve(leq.size());
  for (const auto& c : leq) out.push_back(extension(a, c.body));
  return out;
}

std::uint64_t count_reach(const KripkeStructure& a, int w, const Bitset& ext) {
  Bitset reach = a.succ[w];
  reach.set(w);
  reach &= ext;
  return static_cast<std::uint64_t>(reach.count());
}

// Per-world counting data for the depth reduction. The merge criterion needs
// the capped counts both through the reflexive closure (the documented
// d-values and s-sets) and through the bare relation: requiring only the
// closure-based ones can reverse an edge into an irreflexive world whose own
// body truth hides at-most violations it is about to cause.
struct CountState {
  std::vector<std::vector<std::uint64_t>> d;        // closure-based, [w][i]
  std::vector<std::vector<std::uint64_t>> d_plain;  // successors only
  std::vector<std::set<int>> s;                     // closure-based
  std::vector<std::set<int>> s_plain;               // predecessors only

  bool same_at(int w1, int w2) const {
    return d[w1] == d[w2] && d_plain[w1] == d_plain[w2] && s[w1] == s[w2] &&
           s_plain[w1] == s_plain[w2];
  }
};

CountState count_state(const KripkeStructure& a, const NormalForm& nf) {
  CountState st;
  st.d.assign(a.n, std::vector<std::uint64_t>(nf.leq.size(), 0));
  st.d_plain = st.d;
  st.s.assign(a.n, {});
  st.s_plain = st.s;
  auto leq_ext = body_extensions(a, nf.leq);
  for (int w = 0; w < a.n; ++w)
    for (std::size_t i = 0; i < nf.leq.size(); ++i) {
      std::uint64_t cap = nf.leq[i].bound + 1;
      st.d[w][i] = std::min(cap, count_reach(a, w, leq_ext[i]));
      Bitset direct = a.succ[w];
      direct &= leq_ext[i];
      st.d_plain[w][i] = std::min(cap, static_cast<std::uint64_t>(direct.count()));
    }
  auto preds = predecessor_rows(a);
  for (std::size_t i = 0; i < nf.inv_box.size(); ++i) {
    Bitset ext = extension(a, nf.inv_box[i].body);
    for (int w = 0; w < a.n; ++w) {
      if (preds[w].intersects(ext)) st.s_plain[w].insert(static_cast<int>(i));
      Bitset sources = preds[w];
      sources.set(w);
      if (sources.intersects(ext)) st.s[w].insert(static_cast<int>(i));
    }
  }
  return st;
}

}  // namespace

OneType one_type(const KripkeStructure& a, int w) {
  return type_from(type_columns(a), w);
}

Profile profile(const KripkeStructure& a, const Bitset& clique, std::uint64_t k) {
  Profile pr;
  pr.k = k;
  here_and_below(a, clique, k, pr.here, pr.below);
  auto columns = type_columns(a);
  Bitset above(a.n);
  clique.for_each([&](int w) { above |= a.succ[w]; });
  above.subtract(clique);
  above.for_each([&](int w) { ++pr.above[type_from(columns, w)]; });
  cap_counts(pr.above, k);
  int head = clique.first();
  pr.irref = clique.count() == 1 && !a.has_edge(head, head);
  return pr;
}

CliqueType clique_type(const KripkeStructure& a, const Bitset& clique,
                       const std::vector<Bitset>& fixed_lower, std::uint64_t k) {
  CliqueType t;
  here_and_below(a, clique, k, t.here, t.below);
  Bitset sent(a.n);
  clique.for_each([&](int w) { sent |= a.succ[w]; });
  for (std::size_t j = 0; j < fixed_lower.size(); ++j)
    if (sent.intersects(fixed_lower[j])) t.lower.insert(static_cast<int>(j));
  return t;
}

std::uint64_t d_value(const KripkeStructure& a, int w, int i, const NormalForm& nf) {
  const auto& c = nf.leq.at(static_cast<std::size_t>(i));
  return std::min(c.bound + 1, count_reach(a, w, extension(a, c.body)));
}

std::set<int> s_set(const KripkeStructure& a, int w, const NormalForm& nf) {
  std::set<int> out;
  auto preds = predecessor_rows(a);
  for (std::size_t i = 0; i < nf.inv_box.size(); ++i) {
    Bitset sources = preds[w];
    sources.set(w);
    if (sources.intersects(extension(a, nf.inv_box[i].body)))
      out.insert(static_cast<int>(i));
  }
  return out;
}

KripkeStructure reduce_depth(const KripkeStructure& a, const NormalForm& nf) {
  Formula psi = require_transitive_model(a, nf, "reduce_depth");
  CountState st = count_state(a, nf);

  // Reverse every edge whose endpoints carry the same counting data, close
  // transitively, and repeat: merged cliques can make further pairs agree.
  // Edge sets only grow, so the loop reaches a fixpoint.
  KripkeStructure b = a;
  CountState cur = st;
  for (;;) {
    bool grew = false;
    KripkeStructure next = b;
    for (int w1 = 0; w1 < b.n; ++w1)
      b.succ[w1].for_each([&](int w2) {
        if (cur.same_at(w1, w2) && !next.has_edge(w2, w1)) {
          next.add_edge(w2, w1);
          grew = true;
        }
      });
    if (!grew) break;
    b = transitive_closure(std::move(next));
    cur = count_state(b, nf);
  }

  for (int w = 0; w < b.n; ++w)
    if (cur.d[w] != st.d[w] || cur.d_plain[w] != st.d_plain[w] ||
        cur.s[w] != st.s[w] || cur.s_plain[w] != st.s_plain[w])
      throw std::logic_error("reduce_depth: counting values changed");
  if (!globally_satisfies(b, psi))
    throw std::logic_error("reduce_depth: result is not a model");
  DepthResult dep = depth(b);
  if (dep.infinite || dep.value > nf_bounds(nf).depth)
    throw std::logic_error("reduce_depth: depth bound exceeded");
  return b;
}

KripkeStructure reduce_width(const KripkeStructure& a, const NormalForm& nf) {
  Formula psi = require_transitive_model(a, nf, "reduce_width");

  std::vector<Bitset> geq_ext;
  geq_ext.reserve(nf.geq.size());
  for (const auto& c : nf.geq) geq_ext.push_back(extension(a, c.body));
  std::vector<Bitset> inv_ext;
  inv_ext.reserve(nf.inv_dia.size());
  for (const auto& c : nf.inv_dia) inv_ext.push_back(extension(a, c.body));

  Bitset keep(a.n);
  for (const CliqueInfo& q : cliques(a)) {
    keep.set(q.members.first());
    for (std::size_t i = 0; i < nf.geq.size(); ++i) {
      std::uint64_t taken = 0;
      for (int w = q.members.first(); w >= 0 && taken < nf.geq[i].count;
           w = q.members.next(w))
        if (geq_ext[i].test(w)) {
          keep.set(w);
          ++taken;
        }
    }
    for (std::size_t i = 0; i < nf.inv_dia.size(); ++i)
      for (int w = q.members.first(); w >= 0; w = q.members.next(w))
        if (inv_ext[i].test(w)) {
          keep.set(w);
          break;
        }
  }

  KripkeStructure out = induced_substructure(a, keep);
  if (!(frame_axioms(out) & AX_4))
    throw std::logic_error("reduce_width: result is not transitive");
  if (!globally_satisfies(out, psi))
    throw std::logic_error("reduce_width: result is not a model");
  if (static_cast<std::uint64_t>(width(out)) > nf_bounds(nf).width)
    throw std::logic_error("reduce_width: width bound exceeded");
  return out;
}

std::vector<std::vector<int>> layers(const KripkeStructure& a) {
  if (!(frame_axioms(a) & AX_4))
    throw std::invalid_argument("layers: structure must be transitive");
  std::vector<std::vector<int>> out;
  for (int w = 0; w < a.n; ++w) {
    DepthResult r = world_depth(a, w);
    if (r.infinite) throw std::invalid_argument("layers: depth is not finite");
    if (out.size() <= r.value) out.resize(r.value + 1);
    out[r.value].push_back(w);
  }
  return out;
}

KripkeStructure finitize(const KripkeStructure& a, const NormalForm& nf) {
  Formula psi = require_transitive_model(a, nf, "finitize");
  NFBounds bounds = nf_bounds(nf);
  DepthResult dep = depth(a);
  if (dep.infinite || dep.value > bounds.depth)
    throw std::invalid_argument("finitize: depth exceeds the normal-form bound");
  if (static_cast<std::uint64_t>(width(a)) > bounds.width)
    throw std::invalid_argument("finitize: width exceeds the normal-form bound");

  const std::uint64_t cap = m_constant(nf);
  auto qs = cliques(a);
  const int nq = static_cast<int>(qs.size());
  std::vector<int> clique_of_world(a.n, -1);
  for (int qi = 0; qi < nq; ++qi)
    qs[qi].members.for_each([&](int w) { clique_of_world[w] = qi; });

  // clique-level adjacency (between distinct cliques; inside a clique the
  // original world edges are kept verbatim until the end)
  std::vector<std::vector<char>> cadj(nq, std::vector<char>(nq, 0));
  for (int w1 = 0; w1 < a.n; ++w1)
    a.succ[w1].for_each([&](int w2) {
      if (clique_of_world[w1] != clique_of_world[w2])
        cadj[clique_of_world[w1]][clique_of_world[w2]] = 1;
    });

  std::vector<std::uint64_t> clique_depth(nq, 0);
  for (int qi = 0; qi < nq; ++qi) {
    DepthResult r = world_depth(a, qs[qi].members.first());
    clique_depth[qi] = r.value;
  }
  std::vector<std::vector<int>> layer(dep.value + 1);
  for (int qi = 0; qi < nq; ++qi) layer[clique_depth[qi]].push_back(qi);

  auto columns = type_columns(a);
  std::vector<char> alive(nq, 1);
  std::vector<char> is_marked(nq, 0);
  std::vector<int> marked;  // fixed numbering across layers

  for (std::size_t li = 0; li < layer.size(); ++li) {
    std::map<CliqueType, std::vector<int>> groups;
    for (int qi : layer[li]) {
      CliqueType t;
      qs[qi].members.for_each([&](int w) { ++t.here[type_from(columns, w)]; });
      cap_counts(t.here, cap + 1);
      for (int q2 = 0; q2 < nq; ++q2)
        if (alive[q2] && q2 != qi && cadj[q2][qi])
          qs[q2].members.for_each(
              [&](int w) { t.below.insert(type_from(columns, w)); });
      for (std::size_t j = 0; j < marked.size(); ++j)
        if (cadj[qi][marked[j]]) t.lower.insert(static_cast<int>(j));
      groups[t].push_back(qi);
    }

    for (auto& [t, list] : groups) {
      std::size_t take = std::min<std::size_t>(cap, list.size());
      for (std::size_t j = 0; j < take; ++j) {
        is_marked[list[j]] = 1;
        marked.push_back(list[j]);
      }
    }

    // relink higher layers so per-type edge counts capped at `cap` survive
    for (auto& [t, list] : groups) {
      std::vector<int> kept(list.begin(),
                            list.begin() + std::min<std::size_t>(cap, list.size()));
      for (int q2 = 0; q2 < nq; ++q2) {
        if (!alive[q2] || clique_depth[q2] <= li) continue;
        std::uint64_t total = 0;
        for (int qi : list) total += cadj[q2][qi] ? 1 : 0;
        std::uint64_t want = std::min(cap, total);
        for (int qi : kept) want -= cadj[q2][qi] ? 1 : 0;
        for (int qi : kept) {
          if (!want) break;
          if (!cadj[q2][qi]) {
            cadj[q2][qi] = 1;
            --want;
          }
        }
        if (want) throw std::logic_error("finitize: ran out of relink targets");
      }
    }

    for (int qi : layer[li])
      if (!is_marked[qi]) alive[qi] = 0;
  }

  Bitset keep(a.n);
  for (int qi = 0; qi < nq; ++qi)
    if (alive[qi]) keep |= qs[qi].members;
  std::vector<int> old_to_new(a.n, -1);
  int nn = 0;
  for (int w = 0; w < a.n; ++w)
    if (keep.test(w)) old_to_new[w] = nn++;

  KripkeStructure out(nn);
  for (const auto& [name, bits] : a.val) {
    out.declare(name);
    bits.for_each([&](int w) {
      if (old_to_new[w] >= 0) out.set_val(name, old_to_new[w]);
    });
  }
  for (int u = 0; u < a.n; ++u) {
    if (old_to_new[u] < 0) continue;
    for (int v = 0; v < a.n; ++v) {
      if (old_to_new[v] < 0) continue;
      int qu = clique_of_world[u], qv = clique_of_world[v];
      bool edge = qu == qv ? a.has_edge(u, v) : cadj[qu][qv] != 0;
      if (edge) out.add_edge(old_to_new[u], old_to_new[v]);
    }
  }

  if (!(frame_axioms(out) & AX_4))
    throw std::logic_error("finitize: result is not transitive");
  for (int qi = 0; qi < nq; ++qi) {
    if (!alive[qi]) continue;
    Bitset image(nn);
    qs[qi].members.for_each([&](int w) { image.set(old_to_new[w]); });
    if (!(profile(a, qs[qi].members, cap) == profile(out, image, cap)))
      throw std::logic_error("finitize: a surviving clique changed profile");
  }
  if (!globally_satisfies(out, psi))
    throw std::logic_error("finitize: result is not a model");
  return out;
}

}  // namespace gml
