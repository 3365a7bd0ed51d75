#include "gml/reductions.hpp"

#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "gml/solvers.hpp"

namespace gml {

namespace {

// vocabulary the encoding owns; tiles must stay clear of it
const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "inn", "lan", "wht", "bl",  "vbw",  "hbw", "vwb",
      "hwb", "true", "false", "dia", "box", "idia", "ibox"};
  return words;
}

bool identifier_like(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char ch : s)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  return true;
}

bool position_bit_name(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'v' && s[0] != 'h')) return false;
  for (std::size_t i = 1; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

void validate_instance(const TilingInstance& inst) {
  if (inst.n < 1) throw std::invalid_argument("tiling instance: n must be at least 1");
  if (inst.n > 31)
    throw std::invalid_argument("tiling instance: 2^(2n) does not fit a grade literal for n > 31");
  if (inst.problem.tiles.empty())
    throw std::invalid_argument("tiling instance: no tiles declared");
  std::set<std::string> declared;
  for (const auto& t : inst.problem.tiles) {
    if (!identifier_like(t))
      throw std::invalid_argument("tiling instance: tile name '" + t + "' is not an identifier");
    if (reserved_words().count(t) || position_bit_name(t))
      throw std::invalid_argument("tiling instance: tile name '" + t +
                                  "' collides with the encoding vocabulary");
    if (!declared.insert(t).second)
      throw std::invalid_argument("tiling instance: duplicate tile '" + t + "'");
  }
  auto check_ref = [&](const std::string& t, const char* where) {
    if (!declared.count(t))
      throw std::invalid_argument(std::string("tiling instance: ") + where +
                                  " references undeclared tile '" + t + "'");
  };
  for (const auto& [a, b] : inst.problem.horiz) {
    check_ref(a, "horizontal rule");
    check_ref(b, "horizontal rule");
  }
  for (const auto& [a, b] : inst.problem.vert) {
    check_ref(a, "vertical rule");
    check_ref(b, "vertical rule");
  }
  if (static_cast<int>(inst.initial.size()) != inst.n)
    throw std::invalid_argument("tiling instance: initial column must list exactly n tiles");
  for (const auto& t : inst.initial) check_ref(t, "initial condition");
}

}  // namespace

bool check_tiling(const TilingInstance& inst, const TilingSolution& tau) {
  validate_instance(inst);
  const long long side_wanted = 1LL << inst.n;
  if (tau.side != side_wanted) return false;
  const int side = tau.side;
  if (tau.cells.size() != static_cast<std::size_t>(side) * side) return false;
  const std::set<std::string> declared(inst.problem.tiles.begin(), inst.problem.tiles.end());
  for (const auto& t : tau.cells)
    if (!declared.count(t)) return false;
  for (int i = 0; i < inst.n; ++i)
    if (tau.at(0, i) != inst.initial[i]) return false;
  using Pair = std::pair<std::string, std::string>;
  const std::set<Pair> hset(inst.problem.horiz.begin(), inst.problem.horiz.end());
  const std::set<Pair> vset(inst.problem.vert.begin(), inst.problem.vert.end());
  const int mask = side - 1;
  for (int h = 0; h < side; ++h)
    for (int v = 0; v < side; ++v) {
      if (!hset.count({tau.at(h, v), tau.at((h + 1) & mask, v)})) return false;
      if (!vset.count({tau.at(h, v), tau.at(h, (v + 1) & mask)})) return false;
    }
  return true;
}

TorusEncoding encode_torus_parts(const TilingInstance& inst) {
  validate_instance(inst);
  const int n = inst.n;
  const std::uint64_t cells = std::uint64_t{1} << (2 * n);

  const Formula inn = atom("inn"), lan = atom("lan");
  const Formula wht = atom("wht"), bl = atom("bl");
  std::vector<Formula> v(n), h(n);
  for (int i = 0; i < n; ++i) {
    v[i] = atom("v" + std::to_string(i));
    h[i] = atom("h" + std::to_string(i));
  }

  TorusEncoding e;

  {  // the evaluation world: an inner white cell at position (0,0)
    std::vector<Formula> zeros;
    for (int i = 0; i < n; ++i) zeros.push_back(land(lnot(v[i]), lnot(h[i])));
    e.first_cell = land(land(inn, wht), conj(zeros));
  }

  e.partition = land(iff(lan, lnot(inn)), iff(lan, lnot(inv_dia(truth()))));
  e.chessboard = land(iff(wht, lnot(bl)), iff(wht, iff(v[0], h[0])));
  e.torus_size = implies(inn, land(dia_geq(cells, truth()), dia_leq(cells, truth())));

  {  // both cells of one color that a lantern shows agree on every bit
    std::vector<Formula> parts;
    for (const Formula& c : {wht, bl})
      for (const auto* axis : {&v, &h})
        for (int i = 0; i < n; ++i)
          parts.push_back(implies(dia(land(c, (*axis)[i])), box(implies(c, (*axis)[i]))));
    e.pseudo_uniqueness = conj(parts);
  }

  auto equal_on = [&](const std::vector<Formula>& axis) {
    std::vector<Formula> parts;
    for (int i = 0; i < n; ++i)
      parts.push_back(iff(dia(land(bl, axis[i])), dia(land(wht, axis[i]))));
    return conj(parts);
  };
  e.equal_h = equal_on(h);
  e.equal_v = equal_on(v);

  // binary incrementer between the two shown cells: either the source reads
  // all ones and the target all zeros, or bit i flips from 0 to 1, the bits
  // below it flip from 1 to 0 and the bits above agree
  auto add_one = [&](const std::vector<Formula>& axis, const Formula& src, const Formula& tgt) {
    std::vector<Formula> cases;
    {
      std::vector<Formula> ones, zeros;
      for (int i = 0; i < n; ++i) {
        ones.push_back(axis[i]);
        zeros.push_back(lnot(axis[i]));
      }
      cases.push_back(land(dia(land(src, conj(ones))), dia(land(tgt, conj(zeros)))));
    }
    for (int i = 0; i < n; ++i) {
      std::vector<Formula> sbody = {src, lnot(axis[i])};
      std::vector<Formula> tbody = {tgt, axis[i]};
      for (int j = 0; j < i; ++j) {
        sbody.push_back(axis[j]);
        tbody.push_back(lnot(axis[j]));
      }
      std::vector<Formula> parts = {dia(conj(sbody)), dia(conj(tbody))};
      for (int j = i + 1; j < n; ++j)
        parts.push_back(iff(dia(land(src, axis[j])), dia(land(tgt, axis[j]))));
      cases.push_back(conj(parts));
    }
    return disj(cases);
  };
  e.add_one_vbw = add_one(v, bl, wht);
  e.add_one_hbw = add_one(h, bl, wht);
  e.add_one_vwb = add_one(v, wht, bl);
  e.add_one_hwb = add_one(h, wht, bl);

  // a vertical step keeps the h bits fixed, a horizontal one the v bits
  e.succ_vbw = conj({e.pseudo_uniqueness, e.equal_h, e.add_one_vbw});
  e.succ_hbw = conj({e.pseudo_uniqueness, e.equal_v, e.add_one_hbw});
  e.succ_vwb = conj({e.pseudo_uniqueness, e.equal_h, e.add_one_vwb});
  e.succ_hwb = conj({e.pseudo_uniqueness, e.equal_v, e.add_one_hwb});

  {
    const Formula kinds[4] = {atom("vbw"), atom("hbw"), atom("vwb"), atom("hwb")};
    const Formula duty[4] = {e.succ_vbw, e.succ_hbw, e.succ_vwb, e.succ_hwb};
    std::vector<Formula> pick, want;
    for (int k = 0; k < 4; ++k) {
      pick.push_back(land(kinds[k], duty[k]));
      // the witness must carry the kind flag: on a 2x2 torus +1 and -1
      // coincide, so an unflagged witness could do double duty and dodge
      // the adjacency rules, which fire per flag
      want.push_back(inv_dia(land(land(lan, kinds[k]), duty[k])));
    }
    e.successors = land(implies(lan, disj(pick)), implies(inn, conj(want)));
  }

  e.torus = land(e.first_cell, global_to_local(conj({e.partition, e.chessboard,
                                                     e.torus_size, e.successors})));

  std::vector<Formula> tiles;
  std::map<std::string, std::size_t> tile_index;
  for (const auto& t : inst.problem.tiles) {
    tile_index[t] = tiles.size();
    tiles.push_back(atom(t));
  }

  {  // each cell carries exactly one tile
    std::vector<Formula> pairs;
    for (std::size_t a = 0; a < tiles.size(); ++a)
      for (std::size_t b = 0; b < tiles.size(); ++b)
        if (a != b) pairs.push_back(lor(lnot(tiles[a]), lnot(tiles[b])));
    e.tile_cover = implies(inn, pairs.empty() ? disj(tiles) : land(disj(tiles), conj(pairs)));
  }

  {  // column 0 starts with the listed tiles
    auto at_value = [&](const std::vector<Formula>& axis, std::uint64_t k) {
      std::vector<Formula> bits;
      for (int j = 0; j < n; ++j)
        bits.push_back(((k >> j) & 1) != 0 ? axis[j] : lnot(axis[j]));
      return conj(bits);
    };
    std::vector<Formula> parts;
    for (int i = 0; i < n; ++i)
      parts.push_back(implies(conj({inn, at_value(h, 0), at_value(v, static_cast<std::uint64_t>(i))}),
                              tiles[tile_index.at(inst.initial[i])]));
    e.init_cond = conj(parts);
  }

  {  // the two tiles a lantern shows form an allowed pair, source first
    auto rule_row = [&](const Formula& kind,
                        const std::vector<std::pair<std::string, std::string>>& rel,
                        const Formula& src, const Formula& tgt) {
      std::vector<Formula> alts;
      for (const auto& [a, b] : rel)
        alts.push_back(land(dia(land(src, atom(a))), dia(land(tgt, atom(b)))));
      return implies(land(lan, kind), disj(alts));
    };
    e.tiling_rules = conj({rule_row(atom("vbw"), inst.problem.vert, bl, wht),
                           rule_row(atom("vwb"), inst.problem.vert, wht, bl),
                           rule_row(atom("hbw"), inst.problem.horiz, bl, wht),
                           rule_row(atom("hwb"), inst.problem.horiz, wht, bl)});
  }

  e.tiling = global_to_local(conj({e.tile_cover, e.init_cond, e.tiling_rules}));
  e.reduction = land(e.torus, e.tiling);
  return e;
}

Formula encode_torus(const TilingInstance& inst) { return encode_torus_parts(inst).reduction; }

KripkeStructure build_intended_model(const TilingInstance& inst, const TilingSolution& tau) {
  if (!check_tiling(inst, tau))
    throw std::invalid_argument("build_intended_model: the assignment does not solve the instance");
  if (inst.n > 8)
    throw std::invalid_argument("build_intended_model: refusing 5 * 4^n worlds for n > 8");
  const int n = inst.n;
  const int side = 1 << n;
  const int cells = side * side;
  KripkeStructure m(cells + 4 * cells);

  for (const char* flag : {"inn", "lan", "wht", "bl", "vbw", "hbw", "vwb", "hwb"})
    m.declare(flag);
  for (int i = 0; i < n; ++i) {
    m.declare("v" + std::to_string(i));
    m.declare("h" + std::to_string(i));
  }
  for (const auto& t : inst.problem.tiles) m.declare(t);

  // inner worlds: one reflexive universal clique, cell (h, v) at h * side + v
  auto cell_world = [&](int h, int v) { return h * side + v; };
  for (int a = 0; a < cells; ++a)
    for (int b = 0; b < cells; ++b) m.add_edge(a, b);
  for (int h = 0; h < side; ++h)
    for (int v = 0; v < side; ++v) {
      const int w = cell_world(h, v);
      m.set_val("inn", w);
      m.set_val((v & 1) == (h & 1) ? "wht" : "bl", w);
      for (int j = 0; j < n; ++j) {
        if ((v >> j) & 1) m.set_val("v" + std::to_string(j), w);
        if ((h >> j) & 1) m.set_val("h" + std::to_string(j), w);
      }
      m.set_val(tau.at(h, v), w);
    }

  // one lantern per cell and step kind, showing that step's source and
  // target; the cell itself plays whichever role its color dictates
  struct KindSpec {
    const char* flag;
    bool vertical;
    bool black_source;
  };
  const KindSpec specs[4] = {
      {"vbw", true, true}, {"hbw", false, true}, {"vwb", true, false}, {"hwb", false, false}};
  const int mask = side - 1;
  for (int h = 0; h < side; ++h)
    for (int v = 0; v < side; ++v) {
      const bool white = (v & 1) == (h & 1);
      for (int k = 0; k < 4; ++k) {
        const KindSpec& s = specs[k];
        const int lw = cells + cell_world(h, v) * 4 + k;
        m.set_val("lan", lw);
        m.set_val("wht", lw);  // no position bits, so the chessboard rule wants white
        m.set_val(s.flag, lw);
        int sh = h, sv = v;
        if (s.black_source == white) {  // this cell is the target; step back
          if (s.vertical)
            sv = (v + mask) & mask;
          else
            sh = (h + mask) & mask;
        }
        const int th = s.vertical ? sh : (sh + 1) & mask;
        const int tv = s.vertical ? (sv + 1) & mask : sv;
        m.add_edge(lw, cell_world(sh, sv));
        m.add_edge(lw, cell_world(th, tv));
      }
    }
  return m;
}

TilingSolution decode_tiling(const KripkeStructure& a, const TilingInstance& inst) {
  validate_instance(inst);
  if (inst.n > 8)
    throw std::invalid_argument("decode_tiling: refusing to materialize a torus with n > 8");
  const int n = inst.n;
  const int side = 1 << n;
  TilingSolution tau;
  tau.side = side;
  tau.cells.assign(static_cast<std::size_t>(side) * side, "");
  std::size_t filled = 0;
  for (int w = 0; w < a.n; ++w) {
    if (!a.holds("inn", w)) continue;
    int h = 0, v = 0;
    for (int j = 0; j < n; ++j) {
      if (a.holds("h" + std::to_string(j), w)) h |= 1 << j;
      if (a.holds("v" + std::to_string(j), w)) v |= 1 << j;
    }
    std::string tile;
    for (const auto& t : inst.problem.tiles) {
      if (!a.holds(t, w)) continue;
      if (!tile.empty())
        throw std::runtime_error("decode_tiling: world " + std::to_string(w) +
                                 " carries both '" + tile + "' and '" + t + "'");
      tile = t;
    }
    if (tile.empty())
      throw std::runtime_error("decode_tiling: world " + std::to_string(w) + " carries no tile");
    std::string& slot = tau.at(h, v);
    if (!slot.empty())
      throw std::runtime_error("decode_tiling: position (" + std::to_string(h) + ", " +
                               std::to_string(v) + ") appears twice");
    slot = tile;
    ++filled;
  }
  if (filled != tau.cells.size())
    throw std::runtime_error("decode_tiling: only " + std::to_string(filled) + " of " +
                             std::to_string(tau.cells.size()) + " positions are present");
  return tau;
}

namespace {

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == Conn::Atom) out.insert(f->name);
  collect_atoms(f->lhs, out);
  collect_atoms(f->rhs, out);
}

void require_plain(const Formula& f, const char* who) {
  if (!f) return;
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False:
    case Conn::Not:
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff:
    case Conn::Dia:
    case Conn::Box:
      break;
    default:
      throw std::invalid_argument(std::string(who) +
                                  ": only the plain dia/box language is supported, got " +
                                  render(f));
  }
  require_plain(f->lhs, who);
  require_plain(f->rhs, who);
}

int plain_depth(const Formula& f) {
  if (!f) return 0;
  const int d = std::max(plain_depth(f->lhs), plain_depth(f->rhs));
  return d + (f->kind == Conn::Dia || f->kind == Conn::Box ? 1 : 0);
}

}  // namespace

Formula flatten_modal_depth(const Formula& f) {
  require_plain(f, "flatten_modal_depth");
  std::set<std::string> used;
  collect_atoms(f, used);
  std::vector<Formula> defs;
  std::map<std::string, Formula> alias;  // rendered depth-1 formula -> its name

  std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool nested) -> Formula {
    switch (g->kind) {
      case Conn::Atom:
      case Conn::True:
      case Conn::False:
        return g;
      case Conn::Not:
        return lnot(go(g->lhs, nested));
      case Conn::And:
        return land(go(g->lhs, nested), go(g->rhs, nested));
      case Conn::Or:
        return lor(go(g->lhs, nested), go(g->rhs, nested));
      case Conn::Implies:
        return implies(go(g->lhs, nested), go(g->rhs, nested));
      case Conn::Iff:
        return iff(go(g->lhs, nested), go(g->rhs, nested));
      default: {  // Dia / Box; the body is flattened first
        const Formula self =
            g->kind == Conn::Dia ? dia(go(g->lhs, true)) : box(go(g->lhs, true));
        if (!nested) return self;
        const std::string key = render(self);
        const auto it = alias.find(key);
        if (it != alias.end()) return it->second;
        const std::string name = fresh_variable(used, "q");
        used.insert(name);
        defs.push_back(iff(atom(name), self));
        alias.emplace(key, atom(name));
        return atom(name);
      }
    }
    return g;  // unreachable
  };

  const Formula main = go(f, false);
  if (defs.empty()) return main;
  std::vector<Formula> parts = {main};
  parts.insert(parts.end(), defs.begin(), defs.end());
  return conj(parts);
}

Formula reduce_global_k_to_transitive(const Formula& f) {
  require_plain(f, "reduce_global_k_to_transitive");
  if (plain_depth(f) > 1)
    throw std::invalid_argument(
        "reduce_global_k_to_transitive: flatten the formula to modal depth 1 first");
  std::set<std::string> used;
  collect_atoms(f, used);
  const Formula c[4] = {atom("c0"), atom("c1"), atom("c2"), atom("c3")};
  for (int i = 0; i < 4; ++i)
    if (used.count(c[i]->name))
      throw std::invalid_argument("reduce_global_k_to_transitive: input mentions the layer variable " +
                                  c[i]->name);

  // one forward or converse hop per layer, so that a model may keep every
  // second step stored backwards
  std::function<Formula(const Formula&)> tr = [&](const Formula& g) -> Formula {
    switch (g->kind) {
      case Conn::Atom:
      case Conn::True:
      case Conn::False:
        return g;
      case Conn::Not:
        return lnot(tr(g->lhs));
      case Conn::And:
        return land(tr(g->lhs), tr(g->rhs));
      case Conn::Or:
        return lor(tr(g->lhs), tr(g->rhs));
      case Conn::Implies:
        return implies(tr(g->lhs), tr(g->rhs));
      case Conn::Iff:
        return iff(tr(g->lhs), tr(g->rhs));
      default: {
        const Formula body = tr(g->lhs);
        std::vector<Formula> steps;
        for (int i = 0; i < 4; ++i) {
          const Formula& next = c[(i + 1) % 4];
          const bool forward = i % 2 == 0;
          Formula hop;
          if (g->kind == Conn::Dia)
            hop = forward ? dia(land(next, body)) : inv_dia(land(next, body));
          else
            hop = forward ? box(implies(next, body)) : inv_box(implies(next, body));
          steps.push_back(implies(c[i], hop));
        }
        return conj(steps);
      }
    }
    return g;  // unreachable
  };

  std::vector<Formula> pairwise;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) pairwise.push_back(lor(lnot(c[i]), lnot(c[j])));
  return conj({tr(f), disj({c[0], c[1], c[2], c[3]}), conj(pairwise)});
}

Formula reduce_global_k_to_k5(const Formula& f) {
  // the layered form needs no adjustment for euclidean frames: the same
  // formula is satisfied with the odd layers merged into one clique
  return reduce_global_k_to_transitive(f);
}

KripkeStructure build_inverted_tree_model(const KripkeStructure& tree, InvertedTreeMode mode) {
  const int n = tree.n;
  if (n <= 0) throw std::invalid_argument("build_inverted_tree_model: empty structure");
  for (const char* cname : {"c0", "c1", "c2", "c3"})
    if (tree.val.count(cname))
      throw std::invalid_argument(std::string("build_inverted_tree_model: input already uses ") +
                                  cname);

  std::vector<int> parent(n, -1);
  for (int u = 0; u < n; ++u) {
    if (tree.has_edge(u, u))
      throw std::invalid_argument("build_inverted_tree_model: self loop at world " +
                                  std::to_string(u));
    for (int w : tree.succ[u].indices()) {
      if (parent[w] != -1)
        throw std::invalid_argument("build_inverted_tree_model: world " + std::to_string(w) +
                                    " has two parents");
      parent[w] = u;
    }
  }
  int root = -1;
  for (int w = 0; w < n; ++w) {
    if (parent[w] != -1) continue;
    if (root != -1)
      throw std::invalid_argument("build_inverted_tree_model: worlds " + std::to_string(root) +
                                  " and " + std::to_string(w) + " are both roots");
    root = w;
  }
  if (root == -1) throw std::invalid_argument("build_inverted_tree_model: no root");

  std::vector<int> depth(n, -1);
  std::vector<int> queue = {root};
  depth[root] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int u = queue[qi];
    for (int w : tree.succ[u].indices()) {
      depth[w] = depth[u] + 1;
      queue.push_back(w);
    }
  }
  for (int w = 0; w < n; ++w)
    if (depth[w] < 0)
      throw std::invalid_argument("build_inverted_tree_model: world " + std::to_string(w) +
                                  " is unreachable from the root");

  KripkeStructure m(n);
  m.val = tree.val;
  for (int i = 0; i < 4; ++i) m.declare("c" + std::to_string(i));
  for (int w = 0; w < n; ++w) m.set_val("c" + std::to_string(depth[w] % 4), w);

  if (mode == InvertedTreeMode::Transitive) {
    // keep edges out of even depths, invert the others, then close
    for (int w = 0; w < n; ++w) {
      if (parent[w] == -1) continue;
      if (depth[parent[w]] % 2 == 0)
        m.add_edge(parent[w], w);
      else
        m.add_edge(w, parent[w]);
    }
    m = transitive_closure(reflexive_closure(std::move(m)));
  } else {
    // the odd depths melt into one clique; even-depth worlds stay
    // irreflexive and show their tree neighbors, which all sit at odd depth
    std::vector<int> odd;
    for (int w = 0; w < n; ++w)
      if (depth[w] % 2 == 1) odd.push_back(w);
    for (int a : odd)
      for (int b : odd) m.add_edge(a, b);
    for (int w = 0; w < n; ++w) {
      if (depth[w] % 2 == 1) continue;
      if (parent[w] != -1) m.add_edge(w, parent[w]);
      for (int u : tree.succ[w].indices()) m.add_edge(w, u);
    }
  }
  return m;
}

TilingInstance parse_tiling(const std::string& text) {
  TilingProblem problem;
  std::vector<std::string> initial;
  bool saw_tiles = false, saw_init = false;
  int lineno = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string word;
    while (ls >> word) tok.push_back(word);
    if (tok.empty()) continue;
    const std::string& head = tok[0];
    if (head == "tiles") {
      if (saw_tiles) throw ParseError("duplicate tiles line", lineno, 1);
      if (tok.size() < 2) throw ParseError("tiles line needs at least one tile", lineno, 1);
      problem.tiles.assign(tok.begin() + 1, tok.end());
      saw_tiles = true;
    } else if (head == "h" || head == "v") {
      if (tok.size() != 3) throw ParseError(head + " line needs exactly two tiles", lineno, 1);
      (head == "h" ? problem.horiz : problem.vert).emplace_back(tok[1], tok[2]);
    } else if (head == "init") {
      if (saw_init) throw ParseError("duplicate init line", lineno, 1);
      if (tok.size() < 2) throw ParseError("init line needs at least one tile", lineno, 1);
      initial.assign(tok.begin() + 1, tok.end());
      saw_init = true;
    } else {
      throw ParseError("unknown directive '" + head + "'", lineno, 1);
    }
  }
  if (!saw_tiles) throw ParseError("missing tiles line", lineno + 1, 1);
  if (!saw_init) throw ParseError("missing init line", lineno + 1, 1);
  TilingInstance inst;
  inst.problem = std::move(problem);
  inst.initial = std::move(initial);
  inst.n = static_cast<int>(inst.initial.size());
  validate_instance(inst);
  return inst;
}

std::string render_tiling(const TilingInstance& inst) {
  std::ostringstream out;
  out << "tiles";
  for (const auto& t : inst.problem.tiles) out << ' ' << t;
  out << '\n';
  for (const auto& [a, b] : inst.problem.horiz) out << "h " << a << ' ' << b << '\n';
  for (const auto& [a, b] : inst.problem.vert) out << "v " << a << ' ' << b << '\n';
  out << "init";
  for (const auto& t : inst.initial) out << ' ' << t;
  out << '\n';
  return out.str();
}

}  // namespace gml
