#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <string>
#include <vector>

#include "gml/fo.hpp"
#include "gml/formula.hpp"
#include "gml/generators.hpp"
#include "gml/kripke.hpp"
#include "gml/semantics.hpp"

using namespace gml;

namespace {

const std::vector<std::string> kVars = {"p", "q"};

FOFormula lan_x() { return fo_pred("lan", FOVar::X); }

KripkeStructure fig3() {
  KripkeStructure a(7);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) a.add_edge(i, j);
  for (int l = 5; l < 7; ++l)
    for (int i = 0; i < 5; ++i) a.add_edge(l, i);
  return a;
}

}  // namespace

TEST_CASE("standard translation shapes") {
  CHECK(equal_fo(st(atom("p"), FOVar::X), fo_pred("p", FOVar::X)));
  CHECK(equal_fo(st(dia_geq(2, atom("q")), FOVar::X),
                 fo_count_geq(2, FOVar::Y,
                              fo_and(fo_rel(FOVar::X, FOVar::Y),
                                     fo_pred("q", FOVar::Y)))));
  CHECK(equal_fo(st(inv_dia_geq(1, atom("p")), FOVar::X),
                 fo_count_geq(1, FOVar::Y,
                              fo_and(fo_rel(FOVar::Y, FOVar::X),
                                     fo_pred("p", FOVar::Y)))));
  // nesting alternates the two variables
  CHECK(equal_fo(st(dia(dia(atom("p"))), FOVar::X),
                 fo_count_geq(1, FOVar::Y,
                              fo_and(fo_rel(FOVar::X, FOVar::Y),
                                     fo_count_geq(1, FOVar::X,
                                                  fo_and(fo_rel(FOVar::Y, FOVar::X),
                                                         fo_pred("p", FOVar::X)))))));
}

TEST_CASE("standard translation correspondence") {
  std::mt19937_64 rng(321);
  for (int i = 0; i < 350; ++i) {
    KripkeStructure a = random_structure(rng, 1 + static_cast<int>(rng() % 5), kVars, 0.4);
    Formula f = random_formula(rng, 3, kVars, 3);
    FOFormula gx = st(f, FOVar::X);
    FOFormula gy = st(f, FOVar::Y);
    CHECK(is_gc2(gx));
    CHECK((fo_free_vars(gx) & 2u) == 0u);
    FOStructure s{a, {}};
    for (int w = 0; w < a.n; ++w) {
      bool direct = satisfies(a, w, f);
      CHECK(direct == fo_eval(s, gx, w));
      CHECK(direct == fo_eval(s, gy, std::nullopt, w));
    }
  }
}

TEST_CASE("euclidean whole-structure translation") {
  // shape conjunct alone: truth of the translation of T everywhere
  std::mt19937_64 rng(654);
  for (int i = 0; i < 60; ++i) {
    KripkeStructure a = random_connected_euclidean(rng, 7, kVars, false);
    FOStructure s = expand_lan(a);
    FOFormula tr_true = translate_k5(truth());
    for (int w = 0; w < a.n; ++w) CHECK(fo_eval(s, tr_true, w));
  }

  KripkeStructure f3 = fig3();
  f3.set_val("p", 2);
  FOStructure s3 = expand_lan(f3);
  CHECK(fo_eval(s3, translate_k5(atom("p")), 2));
  CHECK(!fo_eval(s3, translate_k5(atom("p")), 3));

  CHECK(!is_gc2(translate_k5(atom("p"))));  // the shape clause is unguarded
  CHECK_THROWS_AS(translate_k5(atom("lan")), std::invalid_argument);
}

TEST_CASE("euclidean translation correspondence") {
  std::mt19937_64 rng(987);
  int sat_seen = 0;
  for (int i = 0; i < 350; ++i) {
    KripkeStructure a = random_connected_euclidean(rng, 7, kVars, false);
    Formula f = random_formula(rng, 3, kVars, 3);
    FOStructure s = expand_lan(a);
    FOFormula tr = translate_k5(f);
    for (int w = 0; w < a.n; ++w) {
      bool direct = satisfies(a, w, f);
      CHECK(direct == fo_eval(s, tr, w));
      if (direct) ++sat_seen;
    }
  }
  CHECK(sat_seen > 100);
}

TEST_CASE("serial variant of the euclidean translation") {
  // connected euclidean structures are serial unless they are a single
  // isolated world, so the serial conjunct only cuts that case
  std::mt19937_64 rng(246);
  for (int i = 0; i < 120; ++i) {
    KripkeStructure a = random_connected_euclidean(rng, 6, kVars, false);
    Formula f = random_formula(rng, 2, kVars, 2);
    FOStructure s = expand_lan(a);
    bool serial = (frame_axioms(a) & AX_D) == AX_D;
    FOFormula tr = translate_k5(f, true);
    for (int w = 0; w < a.n; ++w) {
      bool expect = serial && satisfies(a, w, f);
      CHECK(fo_eval(s, tr, w) == expect);
    }
  }

  KripkeStructure edgeless(3);
  FOStructure s = expand_lan(edgeless);
  CHECK(!fo_eval(s, translate_k5(truth(), true), 0));
}

TEST_CASE("one-variable translation shapes") {
  CHECK(equal_fo(translate_k45_c1(atom("p")), fo_pred("p", FOVar::X)));
  CHECK(equal_fo(translate_k45_c1(dia_geq(2, atom("p"))),
                 fo_count_geq(2, FOVar::X,
                              fo_and(fo_not(lan_x()), fo_pred("p", FOVar::X)))));
  CHECK(equal_fo(translate_k45_c1(parse_formula("idia<=1 p")),
                 fo_or(lan_x(), fo_count_leq(1, FOVar::X, fo_pred("p", FOVar::X)))));
  CHECK(equal_fo(translate_k45_c1(parse_formula("dia<=1 p")),
                 fo_count_leq(1, FOVar::X,
                              fo_and(fo_not(lan_x()), fo_pred("p", FOVar::X)))));
  CHECK(equal_fo(translate_k45_c1(inv_dia_geq(1, atom("p"))),
                 fo_and(fo_not(lan_x()),
                        fo_count_geq(1, FOVar::X, fo_pred("p", FOVar::X)))));
  // grade-zero modalities dissolve before translation
  CHECK(equal_fo(translate_k45_c1(dia_geq(0, atom("p"))), fo_true()));
  CHECK_THROWS_AS(translate_k45_c1(atom("lan")), std::invalid_argument);
}

TEST_CASE("one-variable translation correspondence") {
  std::mt19937_64 rng(135);
  int sat_seen = 0;
  for (int i = 0; i < 350; ++i) {
    KripkeStructure a = random_connected_euclidean(rng, 7, kVars, true);
    Formula f = random_formula(rng, 3, kVars, 3);
    FOStructure s = expand_lan(a);
    FOFormula tr = translate_k45_c1(f);
    CHECK(is_c1(tr));
    std::uint64_t budget = 6 * node_count(simplify(desugar(f))) + 2;
    CHECK(fo_size(tr) <= budget);
    for (int w = 0; w < a.n; ++w) {
      bool direct = satisfies(a, w, f);
      CHECK(direct == fo_eval(s, tr, w));
      if (direct) ++sat_seen;
    }
  }
  CHECK(sat_seen > 100);
}

TEST_CASE("lan expansion") {
  FOStructure f3 = expand_lan(fig3());
  CHECK(f3.preds.at("lan").count() == 2);
  CHECK(f3.preds.at("lan").test(5));
  CHECK(f3.preds.at("lan").test(6));

  KripkeStructure refl(3);
  for (int i = 0; i < 3; ++i) refl.add_edge(i, i);
  CHECK(expand_lan(refl).preds.at("lan").none());

  KripkeStructure edgeless(4);
  CHECK(expand_lan(edgeless).preds.at("lan").count() == 4);
}

TEST_CASE("first-order evaluation basics") {
  KripkeStructure a(3);
  a.add_edge(0, 1);
  a.add_edge(0, 2);
  a.set_val("p", 1);
  a.set_val("p", 2);
  FOStructure s{a, {}};

  CHECK(fo_eval(s, fo_exists(FOVar::X, fo_pred("p", FOVar::X))));
  CHECK(!fo_eval(s, fo_count_leq(0, FOVar::X, fo_pred("p", FOVar::X))));
  CHECK(fo_eval(s, fo_count_geq(2, FOVar::X, fo_pred("p", FOVar::X))));
  CHECK(!fo_eval(s, fo_count_geq(3, FOVar::X, fo_pred("p", FOVar::X))));
  CHECK(fo_eval(s, fo_count_geq(0, FOVar::X, fo_false())));
  CHECK(fo_eval(s, st(dia_geq(2, atom("p")), FOVar::X), 0));
  CHECK(!fo_eval(s, st(dia_geq(3, atom("p")), FOVar::X), 0));
  CHECK(fo_eval(s, fo_forall(FOVar::Y, fo_implies(fo_rel(FOVar::X, FOVar::Y),
                                                  fo_pred("p", FOVar::Y))),
                0));

  // equality and rebinding
  FOFormula eq = fo_exists(FOVar::Y, fo_and(fo_equal(FOVar::X, FOVar::Y),
                                            fo_pred("p", FOVar::Y)));
  CHECK(fo_eval(s, eq, 1));
  CHECK(!fo_eval(s, eq, 0));

  CHECK_THROWS_AS(fo_eval(s, fo_pred("p", FOVar::X)), std::invalid_argument);
  CHECK_THROWS_AS(fo_eval(s, fo_rel(FOVar::X, FOVar::Y), 0), std::invalid_argument);
  CHECK_THROWS_AS(fo_eval(s, fo_pred("p", FOVar::X), 9), std::out_of_range);
}

TEST_CASE("native serialization and round trip") {
  CHECK(serialize_fo(fo_pred("p", FOVar::X)) == "p(x)");
  FOFormula g = fo_count_geq(2, FOVar::Y,
                             fo_and(fo_rel(FOVar::X, FOVar::Y), fo_pred("q", FOVar::Y)));
  CHECK(serialize_fo(g) == "E>=2 y. (R(x,y) & q(y))");
  CHECK(serialize_fo(fo_forall(FOVar::X, fo_equal(FOVar::X, FOVar::Y))) ==
        "A x. x = y");
  CHECK(serialize_fo(fo_count_leq(0, FOVar::X, fo_false())) == "E<=0 x. false");

  for (const char* text : {"p(x)", "E>=2 y. (R(x,y) & q(y))", "A x. x = y",
                           "E x. (p(x) <-> ~q(x))", "(true -> E<=3 y. R(y,y))"}) {
    FOFormula parsed = parse_fo(text);
    CHECK(equal_fo(parse_fo(serialize_fo(parsed)), parsed));
  }

  std::mt19937_64 rng(22);
  for (int i = 0; i < 200; ++i) {
    Formula f = random_formula(rng, 4, kVars, 4);
    for (const FOFormula& g2 : {st(f, FOVar::X), translate_k5(f), translate_k45_c1(f)})
      CHECK(equal_fo(parse_fo(serialize_fo(g2)), g2));
  }

  CHECK_THROWS_AS(parse_fo("p(z)"), ParseError);
  CHECK_THROWS_AS(parse_fo("Q(x,y)"), ParseError);
  CHECK_THROWS_AS(parse_fo("E>= x. p(x)"), ParseError);
  CHECK_THROWS_AS(parse_fo("p(x"), ParseError);
  CHECK_THROWS_AS(parse_fo("E x p(x)"), ParseError);
}

TEST_CASE("smtlib-flavoured export") {
  FOFormula g = fo_count_geq(2, FOVar::Y,
                             fo_and(fo_rel(FOVar::X, FOVar::Y), fo_pred("q", FOVar::Y)));
  std::string smt = serialize_fo(g, FODialect::SmtlibApprox);
  CHECK(smt.find("distinct") != std::string::npos);
  CHECK(smt.find("w0") != std::string::npos);
  CHECK(smt.find("w1") != std::string::npos);
  CHECK(smt.find("w2") == std::string::npos);  // exactly two witnesses

  std::string one = serialize_fo(fo_count_geq(1, FOVar::X, fo_pred("p", FOVar::X)),
                                 FODialect::SmtlibApprox);
  CHECK(one.find("distinct") == std::string::npos);

  std::mt19937_64 rng(5150);
  for (int i = 0; i < 100; ++i) {
    Formula f = random_formula(rng, 3, kVars, 3);
    std::string out = serialize_fo(st(f, FOVar::X), FODialect::SmtlibApprox);
    long depth = 0;
    for (char c : out) {
      if (c == '(') ++depth;
      if (c == ')') --depth;
      CHECK(depth >= 0);
    }
    CHECK(depth == 0);
  }
}
