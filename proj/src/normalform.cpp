#include "gml/normalform.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "gml/semantics.hpp"

namespace gml {

namespace {

struct Builder {
  NormalForm nf;
  std::set<std::string> used;
  std::vector<Formula> eta_tail;
  std::map<std::string, std::string> memo;  // rendered subformula -> guard
  int counter = 0;

  std::string fresh(const std::string& base) {
    std::string name = fresh_variable(used, base);
    used.insert(name);
    return name;
  }

  // Returns the propositionalized replacement of g; bodies are rewritten
  // before their enclosing modality, so each guard's body is propositional.
  Formula rewrite(const Formula& g) {
    switch (g->kind) {
      case Conn::Atom:
      case Conn::True:
      case Conn::False: return g;
      case Conn::Not: return lnot(rewrite(g->lhs));
      case Conn::And: return land(rewrite(g->lhs), rewrite(g->rhs));
      case Conn::Or: return lor(rewrite(g->lhs), rewrite(g->rhs));
      case Conn::Implies: return implies(rewrite(g->lhs), rewrite(g->rhs));
      case Conn::Iff: return iff(rewrite(g->lhs), rewrite(g->rhs));
      case Conn::DiaGeq: {
        Formula body = rewrite(g->lhs);
        Formula meaning = dia_geq(g->grade, body);
        std::string key = render(meaning);
        auto it = memo.find(key);
        if (it != memo.end()) return atom(it->second);
        std::string x = fresh("g" + std::to_string(counter));
        std::string xbar = fresh("ng" + std::to_string(counter));
        ++counter;
        nf.geq.push_back({x, g->grade, body});
        nf.leq.push_back({xbar, g->grade - 1, body});
        finish_guard(x, xbar, meaning, key);
        return atom(x);
      }
      case Conn::InvDiaGeq: {
        if (g->grade >= 2)
          throw std::invalid_argument(
              "normal form counts successors only; idia>=" +
              std::to_string(g->grade) + " is outside the language");
        Formula body = rewrite(g->lhs);
        Formula meaning = inv_dia_geq(1, body);
        std::string key = render(meaning);
        auto it = memo.find(key);
        if (it != memo.end()) return atom(it->second);
        std::string x = fresh("g" + std::to_string(counter));
        std::string xbar = fresh("ng" + std::to_string(counter));
        ++counter;
        nf.inv_dia.push_back({x, body});
        nf.inv_box.push_back({xbar, body});
        finish_guard(x, xbar, meaning, key);
        return atom(x);
      }
      default: throw std::logic_error("to_normal_form: unexpected surface form");
    }
  }

  void finish_guard(const std::string& x, const std::string& xbar,
                    const Formula& meaning, const std::string& key) {
    nf.guard_defs.push_back({x, meaning});
    nf.guard_defs.push_back({xbar, lnot(atom(x))});
    eta_tail.push_back(iff(atom(xbar), lnot(atom(x))));
    memo.emplace(key, x);
  }
};

}  // namespace

NormalForm to_normal_form(const Formula& f) {
  Formula core = simplify(desugar(f));
  Builder b;
  b.used = variables(core);
  Formula skeleton = b.rewrite(core);
  std::vector<Formula> parts;
  parts.push_back(skeleton);
  for (auto& c : b.eta_tail) parts.push_back(c);
  b.nf.eta = conj(parts);
  return std::move(b.nf);
}

Formula nf_to_formula(const NormalForm& nf) {
  std::vector<Formula> parts;
  parts.push_back(nf.eta);
  for (const auto& c : nf.geq)
    parts.push_back(implies(atom(c.guard), dia_geq(c.count, c.body)));
  for (const auto& c : nf.leq)
    parts.push_back(implies(atom(c.guard), dia_leq(c.bound, c.body)));
  for (const auto& c : nf.inv_dia)
    parts.push_back(implies(atom(c.guard), inv_dia(c.body)));
  for (const auto& c : nf.inv_box)
    parts.push_back(implies(atom(c.guard), inv_box(lnot(c.body))));
  return conj(parts);
}

std::uint64_t m_constant(const NormalForm& nf) {
  std::uint64_t m = 1;
  for (const auto& c : nf.geq) m = std::max(m, c.count);
  for (const auto& c : nf.leq) m = std::max(m, c.bound + 1);
  return m;
}

NFBounds nf_bounds(const NormalForm& nf) {
  NFBounds b;
  b.depth = 1 + nf.leq.size() + nf.inv_box.size();
  for (const auto& c : nf.leq) b.depth += c.bound;
  b.width = 1 + nf.inv_dia.size();
  for (const auto& c : nf.geq) b.width += c.count;
  return b;
}

KripkeStructure extend_canonical(const KripkeStructure& a, const NormalForm& nf) {
  KripkeStructure out = a;
  for (const auto& def : nf.guard_defs) {
    Bitset where = extension(out, def.meaning);
    out.declare(def.name);
    out.val.at(def.name) = where;
  }
  return out;
}

}  // namespace gml
