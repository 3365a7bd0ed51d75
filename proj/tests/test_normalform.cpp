#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <string>
#include <vector>

#include "gml/formula.hpp"
#include "gml/generators.hpp"
#include "gml/kripke.hpp"
#include "gml/normalform.hpp"
#include "gml/semantics.hpp"

using namespace gml;

namespace {

// Brute-force route: does ANY valuation of the guard variables make the
// rebuilt conjunction hold globally? Exponential, so callers keep
// guards * worlds small.
bool exists_extension(const KripkeStructure& a, const NormalForm& nf) {
  Formula psi = nf_to_formula(nf);
  std::vector<std::string> guards;
  for (const auto& def : nf.guard_defs) guards.push_back(def.name);
  int k = static_cast<int>(guards.size());
  REQUIRE(k * a.n <= 16);
  std::uint64_t total = std::uint64_t{1} << (k * a.n);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    KripkeStructure ext = a;
    for (int g = 0; g < k; ++g) {
      ext.declare(guards[g]);
      for (int w = 0; w < a.n; ++w)
        if (mask & (std::uint64_t{1} << (g * a.n + w))) ext.set_val(guards[g], w);
    }
    if (globally_satisfies(ext, psi)) return true;
  }
  return false;
}

void check_shape(const NormalForm& nf) {
  CHECK(is_propositional(nf.eta));
  for (const auto& c : nf.geq) {
    CHECK(c.count >= 1);
    CHECK(is_propositional(c.body));
  }
  for (const auto& c : nf.leq) CHECK(is_propositional(c.body));
  for (const auto& c : nf.inv_dia) CHECK(is_propositional(c.body));
  for (const auto& c : nf.inv_box) CHECK(is_propositional(c.body));
}

const std::vector<std::string> kVars = {"p", "q"};

// Small fixed pool with at most two modal subformulas each, so the
// brute-force extension search stays feasible.
std::vector<Formula> small_pool() {
  std::vector<Formula> pool;
  for (const char* text : {
           "p",
           "dia p",
           "dia>=2 p",
           "~dia p",
           "idia p",
           "ibox ~p",
           "box p",
           "dia p | ~dia p",
           "dia p & ~dia p",
           "p -> dia>=2 (p & q)",
           "dia<=1 p",
           "idia p -> p",
       })
    pool.push_back(parse_formula(text));
  return pool;
}

}  // namespace

TEST_CASE("normal form of the pinned examples") {
  NormalForm plain = to_normal_form(atom("p"));
  CHECK(equal(plain.eta, atom("p")));
  CHECK(plain.geq.empty());
  CHECK(plain.leq.empty());
  CHECK(plain.inv_dia.empty());
  CHECK(plain.inv_box.empty());
  CHECK(equal(nf_to_formula(plain), atom("p")));

  NormalForm two = to_normal_form(dia_geq(2, atom("p")));
  REQUIRE(two.geq.size() == 1);
  REQUIRE(two.leq.size() == 1);
  CHECK(two.geq[0].guard == "g0");
  CHECK(two.geq[0].count == 2);
  CHECK(equal(two.geq[0].body, atom("p")));
  CHECK(two.leq[0].guard == "ng0");
  CHECK(two.leq[0].bound == 1);
  CHECK(equal(two.leq[0].body, atom("p")));
  CHECK(equal(two.eta, land(atom("g0"), iff(atom("ng0"), lnot(atom("g0"))))));
  CHECK(two.inv_dia.empty());
  CHECK(two.inv_box.empty());

  NormalForm ib = to_normal_form(inv_box(lnot(atom("p"))));
  REQUIRE(ib.inv_dia.size() == 1);
  REQUIRE(ib.inv_box.size() == 1);
  CHECK(equal(ib.inv_box[0].body, atom("p")));
  CHECK(equal(ib.inv_dia[0].body, atom("p")));
  CHECK(ib.geq.empty());
  CHECK(equal(ib.eta, land(lnot(atom("g0")), iff(atom("ng0"), lnot(atom("g0"))))));
}

TEST_CASE("repeated subformulas share a guard; names avoid the input") {
  NormalForm nf = to_normal_form(land(dia(atom("p")), dia(atom("p"))));
  CHECK(nf.geq.size() == 1);
  CHECK(nf.leq.size() == 1);

  Formula tricky = land(atom("g0"), dia(atom("g0")));
  NormalForm nf2 = to_normal_form(tricky);
  REQUIRE(nf2.geq.size() == 1);
  CHECK(nf2.geq[0].guard != "g0");
  std::set<std::string> invars = variables(tricky);
  for (const auto& def : nf2.guard_defs) CHECK(!invars.count(def.name));
}

TEST_CASE("graded converse is rejected") {
  CHECK_THROWS_AS(to_normal_form(parse_formula("idia>=2 p")), std::invalid_argument);
  CHECK_THROWS_AS(to_normal_form(parse_formula("idia<=1 p")), std::invalid_argument);
  CHECK_THROWS_AS(to_normal_form(parse_formula("dia idia>=3 q")), std::invalid_argument);
  CHECK_NOTHROW(to_normal_form(parse_formula("idia>=1 p")));
  CHECK_NOTHROW(to_normal_form(parse_formula("idia>=0 p")));  // simplifies away
}

TEST_CASE("constants and bounds") {
  CHECK(m_constant(to_normal_form(atom("p"))) == 1);
  CHECK(m_constant(to_normal_form(dia_geq(2, atom("p")))) == 2);
  CHECK(m_constant(to_normal_form(parse_formula("dia<=4 p"))) == 5);
  CHECK(m_constant(to_normal_form(parse_formula("dia>=3 p & dia<=3 q"))) == 4);

  NormalForm empty;
  empty.eta = truth();
  CHECK(nf_bounds(empty).depth == 1);
  CHECK(nf_bounds(empty).width == 1);
  CHECK(m_constant(empty) == 1);

  NormalForm a;
  a.eta = truth();
  a.leq.push_back({"q0", 2, atom("p")});
  a.inv_box.push_back({"q1", atom("p")});
  CHECK(nf_bounds(a).depth == 5);  // 2 + 1 + 1 + 1
  CHECK(nf_bounds(a).width == 1);

  NormalForm b;
  b.eta = truth();
  b.geq.push_back({"p0", 3, atom("p")});
  b.inv_dia.push_back({"p1", atom("p")});
  CHECK(nf_bounds(b).width == 5);  // 3 + 1 + 1
  CHECK(nf_bounds(b).depth == 1);
}

TEST_CASE("shape invariants and linear size over a corpus") {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 250; ++i) {
    Formula f = random_two_way_formula(rng, 4, kVars, 3);
    NormalForm nf = to_normal_form(f);
    check_shape(nf);
    std::uint64_t in_len = formula_length(f);
    CHECK(formula_length(nf_to_formula(nf)) <= 40 * in_len + 40);
  }
}

TEST_CASE("canonical guard extension is forced: exhaustive search agrees") {
  for (const Formula& f : small_pool()) {
    NormalForm nf = to_normal_form(f);
    Formula psi = nf_to_formula(nf);
    for (int n = 1; n <= 2; ++n) {
      if (static_cast<int>(nf.guard_defs.size()) * n > 16) continue;
      enumerate_models(n, kVars, parse_frame_class("K4"), 64,
                       [&](const KripkeStructure& a) {
                         bool direct = globally_satisfies(a, f);
                         bool canonical =
                             globally_satisfies(extend_canonical(a, nf), psi);
                         bool searched = exists_extension(a, nf);
                         CHECK(direct == canonical);
                         CHECK(direct == searched);
                         return true;
                       });
    }
  }
}

TEST_CASE("global equisatisfiability over transitive models") {
  auto run = [](const Formula& f, int n, const std::vector<std::string>& vars) {
    NormalForm nf = to_normal_form(f);
    Formula psi = nf_to_formula(nf);
    enumerate_models(n, vars, parse_frame_class("K4"), 64,
                     [&](const KripkeStructure& a) {
                       CHECK(globally_satisfies(a, f) ==
                             globally_satisfies(extend_canonical(a, nf), psi));
                       return true;
                     });
  };

  for (const Formula& f : small_pool()) run(f, 3, kVars);

  std::mt19937_64 rng(777);
  for (int i = 0; i < 30; ++i) run(random_two_way_formula(rng, 2, kVars, 2), 3, kVars);
  for (int i = 0; i < 4; ++i) run(random_two_way_formula(rng, 2, {"p"}, 2), 4, {"p"});
}

TEST_CASE("the normal form also tracks satisfaction on arbitrary frames") {
  // the guard scheme never uses transitivity, so spot-check K frames too
  std::mt19937_64 rng(99);
  for (int i = 0; i < 150; ++i) {
    Formula f = random_two_way_formula(rng, 3, kVars, 2);
    NormalForm nf = to_normal_form(f);
    Formula psi = nf_to_formula(nf);
    KripkeStructure a = random_structure(rng, 1 + static_cast<int>(rng() % 5), kVars, 0.4);
    CHECK(globally_satisfies(a, f) ==
          globally_satisfies(extend_canonical(a, nf), psi));
  }
}
