#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gml/formula.hpp"
#include "gml/generators.hpp"
#include "gml/kripke.hpp"
#include "gml/semantics.hpp"

using namespace gml;

namespace {

const std::vector<std::string> kVars = {"p", "q", "r"};

// Independent length oracle: recompute grade cost by repeated halving instead
// of bit_width, so the two routes cannot share a bug.
std::uint64_t grade_cost_oracle(std::uint64_t n) {
  if (n <= 1) return 1;
  std::uint64_t bits = 0;
  for (std::uint64_t v = n; v > 0; v >>= 1) ++bits;
  // bits == floor(log2 n) + 1 == ceil(log2(n+1)) for n >= 1
  return bits;
}

std::uint64_t length_oracle(const Formula& f) {
  if (!f) return 0;
  std::uint64_t sub = length_oracle(f->lhs) + length_oracle(f->rhs);
  switch (f->kind) {
    case Conn::DiaGeq:
    case Conn::DiaLeq:
    case Conn::InvDiaGeq:
    case Conn::InvDiaLeq:
      return 1 + grade_cost_oracle(f->grade) + sub;
    default:
      return 1 + sub;
  }
}

bool grades_at_most_one(const Formula& f) {
  if (!f) return true;
  switch (f->kind) {
    case Conn::DiaGeq:
    case Conn::DiaLeq:
    case Conn::InvDiaGeq:
    case Conn::InvDiaLeq:
      if (f->grade > 1) return false;
      break;
    default:
      break;
  }
  return grades_at_most_one(f->lhs) && grades_at_most_one(f->rhs);
}

}  // namespace

TEST_CASE("parsing the sample inputs") {
  CHECK(equal(parse_formula("p & dia>=3 q"), land(atom("p"), dia_geq(3, atom("q")))));
  CHECK(equal(desugar(parse_formula("box p")), lnot(dia_geq(1, lnot(atom("p"))))));
  CHECK(equal(desugar(parse_formula("idia<=1 true")), lnot(inv_dia_geq(2, truth()))));
  CHECK(equal(parse_formula("box p"), box(atom("p"))));  // sugar survives parsing
}

TEST_CASE("parser precedence and associativity") {
  CHECK(equal(parse_formula("p & q | r"), lor(land(atom("p"), atom("q")), atom("r"))));
  CHECK(equal(parse_formula("p | q & r"), lor(atom("p"), land(atom("q"), atom("r")))));
  CHECK(equal(parse_formula("p -> q -> r"),
              implies(atom("p"), implies(atom("q"), atom("r")))));
  CHECK(equal(parse_formula("p <-> q <-> r"),
              iff(iff(atom("p"), atom("q")), atom("r"))));
  CHECK(equal(parse_formula("~dia p"), lnot(dia(atom("p")))));
  CHECK(equal(parse_formula("dia p & q"), land(dia(atom("p")), atom("q"))));
  CHECK(equal(parse_formula("dia (p & q)"), dia(land(atom("p"), atom("q")))));
  CHECK(equal(parse_formula("box box p"), box(box(atom("p")))));
  CHECK(equal(parse_formula("idia>=0 false"), inv_dia_geq(0, falsity())));
  CHECK(equal(parse_formula("p -> q | r & s"),
              implies(atom("p"), lor(atom("q"), land(atom("r"), atom("s"))))));
  CHECK(equal(parse_formula("# comment\n p # another\n & q"), land(atom("p"), atom("q"))));
  CHECK(equal(parse_formula("truely"), atom("truely")));  // keyword is not a prefix match
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("(p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p &"), ParseError);
  CHECK_THROWS_AS(parse_formula("p q"), ParseError);
  CHECK_THROWS_AS(parse_formula("dia>= p"), ParseError);
  CHECK_THROWS_AS(parse_formula("dia>=p"), ParseError);
  CHECK_THROWS_AS(parse_formula("p $ q"), ParseError);
  CHECK_THROWS_AS(parse_formula("p < q"), ParseError);
  CHECK_THROWS_AS(parse_formula("dia>=99999999999999999999 p"), ParseError);

  try {
    parse_formula("p &\n& q");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.col == 1);
  }
  try {
    parse_formula("(p | q");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 7);
  }
}

TEST_CASE("rendering the sample outputs") {
  CHECK(render(dia_geq(3, atom("q"))) == "dia>=3 q");
  CHECK(render(land(atom("p"), atom("q"))) == "(p & q)");
  CHECK(render(inv_dia_geq(1, truth())) == "idia>=1 true");
  CHECK(render(lnot(dia_geq(1, lnot(atom("p"))))) == "~dia>=1 ~p");
  CHECK(render(box(implies(atom("p"), atom("q")))) == "box (p -> q)");
  CHECK(render(dia_leq(2, falsity())) == "dia<=2 false");
}

TEST_CASE("parse/render round trip on a generated corpus") {
  std::mt19937_64 rng(20260817);
  for (int i = 0; i < 600; ++i) {
    Formula f = random_formula(rng, 5, kVars, 9);
    Formula back = parse_formula(render(f));
    CHECK(equal(back, f));
  }
}

TEST_CASE("desugar eliminates sugar, is idempotent, and keeps meaning") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 4, kVars, 4);
    Formula d = desugar(f);
    CHECK(is_desugared(d));
    CHECK(equal(desugar(d), d));

    KripkeStructure a = random_structure(rng, 4, kVars, 0.4);
    for (int w = 0; w < a.n; ++w) CHECK(satisfies(a, w, f) == satisfies(a, w, d));
  }
}

TEST_CASE("formula length") {
  CHECK(formula_length(atom("p")) == 1);
  CHECK(formula_length(dia_geq(1, atom("p"))) == 3);
  CHECK(formula_length(dia_geq(8, atom("p"))) == 6);
  CHECK(formula_length(dia_geq(0, atom("p"))) == 3);
  CHECK(formula_length(land(atom("p"), atom("q"))) == 3);

  std::mt19937_64 rng(4242);
  for (int i = 0; i < 400; ++i) {
    Formula f = random_formula(rng, 5, kVars, 1000);
    CHECK(formula_length(f) == length_oracle(f));
    if (grades_at_most_one(f)) CHECK(formula_length(f) >= node_count(f));
  }
}

TEST_CASE("formula length is monotone under subformula inclusion") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 150; ++i) {
    Formula f = random_formula(rng, 4, kVars, 30);
    std::uint64_t whole = formula_length(f);
    for (const Formula& sub : subformulas(f)) CHECK(formula_length(sub) <= whole);
  }
}

TEST_CASE("subformulas lists each distinct node once, root last") {
  Formula pp = land(atom("p"), atom("p"));
  auto subs = subformulas(pp);
  REQUIRE(subs.size() == 2);
  CHECK(equal(subs[0], atom("p")));
  CHECK(equal(subs[1], pp));

  Formula f = parse_formula("(p & q) | (p & q)");
  subs = subformulas(f);
  CHECK(subs.size() == 4);  // p, q, p & q, whole
  CHECK(equal(subs.back(), f));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    Formula g = random_formula(rng, 4, kVars, 3);
    auto list = subformulas(g);
    CHECK(equal(list.back(), g));
    for (std::size_t a = 0; a < list.size(); ++a)
      for (std::size_t b = a + 1; b < list.size(); ++b) CHECK(!equal(list[a], list[b]));
  }
}

TEST_CASE("variables and fresh names") {
  Formula f = parse_formula("p & dia>=2 (q | ~p)");
  std::set<std::string> vs = variables(f);
  CHECK(vs == std::set<std::string>{"p", "q"});

  std::set<std::string> used = {"p", "q"};
  std::string fresh = fresh_variable(used, "p");
  CHECK(!used.count(fresh));
  CHECK(fresh_variable(used, "x") == "x");
  CHECK(fresh_variable({"x", "x0"}, "x") == "x1");
}

TEST_CASE("simplify folds constants and keeps meaning") {
  CHECK(equal(simplify(lnot(lnot(atom("p")))), atom("p")));
  CHECK(equal(simplify(land(atom("p"), truth())), atom("p")));
  CHECK(equal(simplify(lor(atom("p"), truth())), truth()));
  CHECK(equal(simplify(dia_geq(0, atom("p"))), truth()));
  CHECK(equal(simplify(dia_geq(2, falsity())), falsity()));
  CHECK(equal(simplify(box(truth())), truth()));
  CHECK(equal(simplify(implies(falsity(), atom("p"))), truth()));
  CHECK(equal(simplify(implies(atom("p"), falsity())), lnot(atom("p"))));
  CHECK(equal(simplify(iff(truth(), atom("q"))), atom("q")));

  std::mt19937_64 rng(31337);
  for (int i = 0; i < 300; ++i) {
    Formula f = random_formula(rng, 4, kVars, 3);
    Formula s = simplify(f);
    KripkeStructure a = random_structure(rng, 4, kVars, 0.4);
    for (int w = 0; w < a.n; ++w) CHECK(satisfies(a, w, f) == satisfies(a, w, s));
  }
}

TEST_CASE("metrics: modal depth and max grade") {
  CHECK(modal_depth(parse_formula("p & q")) == 0);
  CHECK(modal_depth(parse_formula("dia dia p | q")) == 2);
  CHECK(modal_depth(parse_formula("box (p & idia>=3 q)")) == 2);
  CHECK(max_grade(parse_formula("p")) == 0);
  CHECK(max_grade(parse_formula("dia p")) == 1);
  CHECK(max_grade(parse_formula("dia>=4 p & idia>=2 q")) == 4);
  CHECK(max_grade(parse_formula("dia<=4 p")) == 5);  // rewrites to ~dia>=5
}

TEST_CASE("conj and disj of lists") {
  CHECK(equal(conj({}), truth()));
  CHECK(equal(disj({}), falsity()));
  CHECK(equal(conj({atom("p")}), atom("p")));
  CHECK(equal(conj({atom("p"), atom("q"), atom("r")}),
              land(land(atom("p"), atom("q")), atom("r"))));
  CHECK(equal(disj({atom("p"), atom("q")}), lor(atom("p"), atom("q"))));
}
