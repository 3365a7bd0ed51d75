#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gml/formula.hpp"
#include "gml/kripke.hpp"
#include "gml/reductions.hpp"
#include "gml/semantics.hpp"
#include "gml/solvers.hpp"

using namespace gml;

namespace {

TilingInstance chess_instance() {
  TilingInstance inst;
  inst.problem.tiles = {"a", "b"};
  inst.problem.horiz = {{"a", "b"}, {"b", "a"}};
  inst.problem.vert = {{"a", "b"}, {"b", "a"}};
  inst.n = 1;
  inst.initial = {"a"};
  return inst;
}

TilingSolution chess_solution() {
  TilingSolution tau;
  tau.side = 2;
  tau.cells = {"a", "b", "b", "a"};  // (0,0) (0,1) (1,0) (1,1)
  return tau;
}

// every total assignment of side^2 cells, for brute-force refutations
std::vector<TilingSolution> all_assignments(const TilingInstance& inst) {
  const int side = 1 << inst.n;
  const std::size_t cells = static_cast<std::size_t>(side) * side;
  const std::size_t k = inst.problem.tiles.size();
  std::vector<TilingSolution> out;
  std::vector<std::size_t> pick(cells, 0);
  for (;;) {
    TilingSolution tau;
    tau.side = side;
    for (std::size_t c = 0; c < cells; ++c) tau.cells.push_back(inst.problem.tiles[pick[c]]);
    out.push_back(std::move(tau));
    std::size_t c = 0;
    while (c < cells && ++pick[c] == k) pick[c++] = 0;
    if (c == cells) break;
  }
  return out;
}

template <class Fn>
std::string thrown_message(Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

int modal_depth_of(const Formula& f) {
  if (!f) return 0;
  const int d = std::max(modal_depth_of(f->lhs), modal_depth_of(f->rhs));
  return d + (f->kind == Conn::Dia || f->kind == Conn::Box ? 1 : 0);
}

Formula random_plain(std::mt19937& rng, int d) {
  switch (std::uniform_int_distribution<int>(0, d > 0 ? 6 : 1)(rng)) {
    case 0: return atom("p");
    case 1: return atom("r");
    case 2: return lnot(random_plain(rng, d - 1));
    case 3: return land(random_plain(rng, d - 1), random_plain(rng, d - 1));
    case 4: return lor(random_plain(rng, d - 1), random_plain(rng, d - 1));
    case 5: return dia(random_plain(rng, d - 1));
    default: return box(random_plain(rng, d - 1));
  }
}

bool oracle_sat(const Formula& f, const std::string& cls, int bound) {
  SatQuery q;
  q.formula = f;
  q.frame_class = parse_frame_class(cls);
  q.mode = SatMode::Global;
  q.bound = bound;
  return bounded_sat(q).status == SatStatus::Satisfiable;
}

}  // namespace

TEST_CASE("tiling check: solutions are judged cell by cell") {
  const TilingInstance inst = chess_instance();
  const TilingSolution tau = chess_solution();
  CHECK(check_tiling(inst, tau));

  TilingSolution bad = tau;
  bad.cells[3] = "b";  // (1,1): now two b's meet horizontally
  CHECK_FALSE(check_tiling(inst, bad));

  TilingSolution swapped = tau;
  swapped.cells = {"b", "a", "a", "b"};  // adjacency fine, initial tile wrong
  CHECK_FALSE(check_tiling(inst, swapped));

  TilingSolution foreign = tau;
  foreign.cells[0] = "c";
  CHECK_FALSE(check_tiling(inst, foreign));

  TilingSolution small = tau;
  small.side = 1;
  small.cells = {"a"};
  CHECK_FALSE(check_tiling(inst, small));
}

TEST_CASE("tiling check: malformed instances are rejected") {
  const TilingSolution tau = chess_solution();

  TilingInstance dup = chess_instance();
  dup.problem.tiles = {"a", "a"};
  CHECK_THROWS_AS(check_tiling(dup, tau), std::invalid_argument);

  TilingInstance reserved = chess_instance();
  reserved.problem.tiles = {"a", "inn"};
  CHECK_THROWS_AS(check_tiling(reserved, tau), std::invalid_argument);

  TilingInstance bitname = chess_instance();
  bitname.problem.tiles = {"a", "v7"};
  CHECK_THROWS_AS(check_tiling(bitname, tau), std::invalid_argument);

  TilingInstance unknown = chess_instance();
  unknown.initial = {"c"};
  CHECK_THROWS_AS(check_tiling(unknown, tau), std::invalid_argument);

  TilingInstance zero = chess_instance();
  zero.n = 0;
  zero.initial = {};
  CHECK_THROWS_AS(check_tiling(zero, tau), std::invalid_argument);

  TilingInstance loose = chess_instance();
  loose.problem.horiz.push_back({"a", "c"});
  CHECK_THROWS_AS(check_tiling(loose, tau), std::invalid_argument);
}

TEST_CASE("torus encoding: pinned shapes of the pieces") {
  const TorusEncoding e = encode_torus_parts(chess_instance());
  CHECK(render(e.first_cell) == "((inn & wht) & (~v0 & ~h0))");
  CHECK(render(e.partition) == "((lan <-> ~inn) & (lan <-> ~idia true))");
  CHECK(render(e.chessboard) == "((wht <-> ~bl) & (wht <-> (v0 <-> h0)))");
  CHECK(render(e.torus_size) == "(inn -> (dia>=4 true & dia<=4 true))");
  CHECK(render(e.equal_h) == "(dia (bl & h0) <-> dia (wht & h0))");
  CHECK(render(e.equal_v) == "(dia (bl & v0) <-> dia (wht & v0))");
  CHECK(render(e.add_one_vbw) ==
        "((dia (bl & v0) & dia (wht & ~v0)) | (dia (bl & ~v0) & dia (wht & v0)))");
  CHECK(render(e.add_one_hwb) ==
        "((dia (wht & h0) & dia (bl & ~h0)) | (dia (wht & ~h0) & dia (bl & h0)))");
  CHECK(render(e.pseudo_uniqueness) ==
        "((((dia (wht & v0) -> box (wht -> v0)) & (dia (wht & h0) -> box (wht -> h0))) & "
        "(dia (bl & v0) -> box (bl -> v0))) & (dia (bl & h0) -> box (bl -> h0)))");
  CHECK(render(e.init_cond) == "(((inn & ~h0) & ~v0) -> a)");
  CHECK(render(e.tile_cover) == "(inn -> ((a | b) & ((~a | ~b) & (~b | ~a))))");

  const std::string rules = render(e.tiling_rules);
  CHECK(rules.find("((lan & vbw) -> ((dia (bl & a) & dia (wht & b)) | "
                   "(dia (bl & b) & dia (wht & a))))") != std::string::npos);
  CHECK(rules.find("((lan & hwb) -> ((dia (wht & a) & dia (bl & b)) | "
                   "(dia (wht & b) & dia (bl & a))))") != std::string::npos);

  // composites are exactly the conjunctions of their pieces
  CHECK(equal(e.succ_vbw, conj({e.pseudo_uniqueness, e.equal_h, e.add_one_vbw})));
  CHECK(equal(e.succ_hwb, conj({e.pseudo_uniqueness, e.equal_v, e.add_one_hwb})));
  CHECK(equal(e.torus, land(e.first_cell, global_to_local(conj({e.partition, e.chessboard,
                                                                e.torus_size, e.successors})))));
  CHECK(equal(e.tiling, global_to_local(conj({e.tile_cover, e.init_cond, e.tiling_rules}))));
  CHECK(equal(e.reduction, land(e.torus, e.tiling)));
  CHECK(equal(encode_torus(chess_instance()), e.reduction));
}

TEST_CASE("torus encoding: shapes scale with n") {
  TilingInstance inst;
  inst.problem.tiles = {"a"};
  inst.problem.horiz = {{"a", "a"}};
  inst.problem.vert = {{"a", "a"}};
  inst.n = 2;
  inst.initial = {"a", "a"};
  const TorusEncoding e = encode_torus_parts(inst);
  CHECK(render(e.torus_size) == "(inn -> (dia>=16 true & dia<=16 true))");
  CHECK(render(e.first_cell) == "((inn & wht) & ((~v0 & ~h0) & (~v1 & ~h1)))");
  CHECK(render(e.add_one_vbw) ==
        "(((dia (bl & (v0 & v1)) & dia (wht & (~v0 & ~v1))) | "
        "((dia (bl & ~v0) & dia (wht & v0)) & (dia (bl & v1) <-> dia (wht & v1)))) | "
        "(dia ((bl & ~v1) & v0) & dia ((wht & v1) & ~v0)))");
  // second initial tile sits at position (0, 1)
  CHECK(render(e.init_cond).find("((inn & (~h0 & ~h1)) & (v0 & ~v1)) -> a") != std::string::npos);
  // a single tile needs no exclusion pairs
  CHECK(render(e.tile_cover) == "(inn -> a)");
}

TEST_CASE("intended model: euclidean serial witness at the origin") {
  const TilingInstance inst = chess_instance();
  const TilingSolution tau = chess_solution();
  const KripkeStructure m = build_intended_model(inst, tau);
  CHECK(m.n == 20);
  CHECK(lanterns(m).count() == 16);
  for (int w = 4; w < 20; ++w) CHECK(m.succ[w].count() == 2);

  const AxiomSet ax = frame_axioms(m);
  CHECK((ax & AX_5) != 0u);
  CHECK((ax & AX_D) != 0u);
  CHECK(in_class(m, parse_frame_class("D5")));

  const TorusEncoding e = encode_torus_parts(inst);
  CHECK(satisfies(m, 0, e.first_cell));
  CHECK(globally_satisfies(m, conj({e.partition, e.chessboard, e.torus_size, e.successors})));
  CHECK(globally_satisfies(m, conj({e.tile_cover, e.init_cond, e.tiling_rules})));
  CHECK(satisfies(m, 0, e.reduction));

  TilingSolution bad = tau;
  bad.cells[3] = "b";
  CHECK_THROWS_AS(build_intended_model(inst, bad), std::invalid_argument);
}

TEST_CASE("intended model: decoding inverts building") {
  const TilingInstance inst = chess_instance();
  const TilingSolution tau = chess_solution();
  const TilingSolution back = decode_tiling(build_intended_model(inst, tau), inst);
  CHECK(back.side == tau.side);
  CHECK(back.cells == tau.cells);
}

TEST_CASE("decoding: corrupted models are refused") {
  const TilingInstance inst = chess_instance();
  const KripkeStructure m = build_intended_model(inst, chess_solution());

  KripkeStructure duplicated = m;
  duplicated.val.at("v0").reset(1);  // cell (0,1) now reads (0,0)
  CHECK(thrown_message([&] { decode_tiling(duplicated, inst); }).find("twice") !=
        std::string::npos);

  KripkeStructure missing = m;
  missing.val.at("inn").reset(3);
  CHECK(thrown_message([&] { decode_tiling(missing, inst); }).find("3 of 4") !=
        std::string::npos);

  KripkeStructure bare = m;
  bare.val.at("a").reset(0);
  CHECK(thrown_message([&] { decode_tiling(bare, inst); }).find("no tile") !=
        std::string::npos);

  KripkeStructure doubled = m;
  doubled.set_val("b", 0);
  CHECK(thrown_message([&] { decode_tiling(doubled, inst); }).find("both") !=
        std::string::npos);
}

TEST_CASE("tiling brute force: encoder inputs agree with an independent checker") {
  // solvable: the chessboard pattern is the unique solution
  const TilingInstance inst = chess_instance();
  int hits = 0;
  for (const TilingSolution& tau : all_assignments(inst)) {
    if (!check_tiling(inst, tau)) continue;
    ++hits;
    const KripkeStructure m = build_intended_model(inst, tau);
    CHECK(satisfies(m, 0, encode_torus(inst)));
    CHECK(decode_tiling(m, inst).cells == tau.cells);
  }
  CHECK(hits == 1);

  // unsolvable: a vertical step up from b is never allowed
  TilingInstance oneway = inst;
  oneway.problem.vert = {{"a", "b"}};
  for (const TilingSolution& tau : all_assignments(oneway))
    CHECK_FALSE(check_tiling(oneway, tau));

  // a third tile that no rule mentions changes nothing
  TilingInstance padded = inst;
  padded.problem.tiles = {"a", "b", "c"};
  int padded_hits = 0;
  for (const TilingSolution& tau : all_assignments(padded))
    if (check_tiling(padded, tau)) ++padded_hits;
  CHECK(padded_hits == 1);
}

TEST_CASE("tiling text format: round trip and line errors") {
  const std::string text =
      "# 2x2 chessboard\n"
      "tiles a b\n"
      "h a b\n"
      "h b a\n"
      "v a b\n"
      "v b a\n"
      "init a\n";
  const TilingInstance inst = parse_tiling(text);
  CHECK(inst.n == 1);
  CHECK(inst.problem.tiles == std::vector<std::string>{"a", "b"});
  CHECK(inst.initial == std::vector<std::string>{"a"});
  CHECK(inst.problem.horiz.size() == 2);
  CHECK(inst.problem.vert.size() == 2);
  const std::string canon = render_tiling(inst);
  CHECK(canon == "tiles a b\nh a b\nh b a\nv a b\nv b a\ninit a\n");
  CHECK(render_tiling(parse_tiling(canon)) == canon);

  CHECK(parse_tiling("tiles a\nh a a\nv a a\ninit a a\n").n == 2);

  try {
    parse_tiling("tiles a\nh a\ninit a\n");
    CHECK(false);
  } catch (const ParseError& pe) {
    CHECK(pe.line == 2);
  }
  CHECK_THROWS_AS(parse_tiling("tiles a\nv a a\nh a a\n"), ParseError);          // no init
  CHECK_THROWS_AS(parse_tiling("init a\n"), ParseError);                        // no tiles
  CHECK_THROWS_AS(parse_tiling("tiles a\ntiles b\ninit a\n"), ParseError);      // duplicate
  CHECK_THROWS_AS(parse_tiling("tiles a\nwall a a\ninit a\n"), ParseError);     // directive
  CHECK_THROWS_AS(parse_tiling("tiles a b\nh a c\ninit a\n"), std::invalid_argument);
}

TEST_CASE("flattening: nested modalities become fresh variables, innermost first") {
  CHECK(render(flatten_modal_depth(parse_formula("dia dia p"))) == "(dia q & (q <-> dia p))");
  CHECK(render(flatten_modal_depth(parse_formula("box (p & dia p)"))) ==
        "(box (p & q) & (q <-> dia p))");
  CHECK(render(flatten_modal_depth(parse_formula("(dia dia p & box dia p)"))) ==
        "((dia q & box q) & (q <-> dia p))");
  CHECK(render(flatten_modal_depth(parse_formula("dia dia q"))) ==
        "(dia q0 & (q0 <-> dia q))");
  CHECK(render(flatten_modal_depth(parse_formula("dia dia dia p"))) ==
        "((dia q0 & (q <-> dia p)) & (q0 <-> dia q))");
  CHECK(render(flatten_modal_depth(parse_formula("(dia p -> box q)"))) == "(dia p -> box q)");

  CHECK_THROWS_AS(flatten_modal_depth(parse_formula("dia>=2 p")), std::invalid_argument);
  CHECK_THROWS_AS(flatten_modal_depth(parse_formula("idia p")), std::invalid_argument);
  CHECK_THROWS_AS(flatten_modal_depth(parse_formula("box dia<=1 p")), std::invalid_argument);
  CHECK_THROWS_AS(flatten_modal_depth(parse_formula("ibox p")), std::invalid_argument);
}

TEST_CASE("flattening: bounded global satisfiability is preserved") {
  std::mt19937 rng(20240817u);
  const std::vector<std::string> pinned = {
      "dia dia p", "box box p",  "dia box p",
      "box dia p", "~dia dia p", "(dia dia p & box ~p)"};
  std::vector<Formula> corpus;
  for (const auto& s : pinned) corpus.push_back(parse_formula(s));
  for (int i = 0; i < 25; ++i) corpus.push_back(random_plain(rng, 2));

  for (const Formula& f : corpus) {
    const Formula flat = flatten_modal_depth(f);
    CHECK(modal_depth_of(flat) <= 1);
    CHECK(oracle_sat(f, "K", 4) == oracle_sat(flat, "K", 4));
  }
}

TEST_CASE("layer translation: one hop per layer, alternating direction") {
  const std::string d = render(reduce_global_k_to_transitive(parse_formula("dia q")));
  CHECK(d.find("(c0 -> dia (c1 & q))") != std::string::npos);
  CHECK(d.find("(c1 -> idia (c2 & q))") != std::string::npos);
  CHECK(d.find("(c2 -> dia (c3 & q))") != std::string::npos);
  CHECK(d.find("(c3 -> idia (c0 & q))") != std::string::npos);

  const std::string b = render(reduce_global_k_to_transitive(parse_formula("box q")));
  CHECK(b.find("(c0 -> box (c1 -> q))") != std::string::npos);
  CHECK(b.find("(c1 -> ibox (c2 -> q))") != std::string::npos);
  CHECK(b.find("(c2 -> box (c3 -> q))") != std::string::npos);
  CHECK(b.find("(c3 -> ibox (c0 -> q))") != std::string::npos);

  CHECK(render(reduce_global_k_to_transitive(atom("p"))) ==
        "((p & (((c0 | c1) | c2) | c3)) & "
        "((((((~c0 | ~c1) & (~c0 | ~c2)) & (~c0 | ~c3)) & (~c1 | ~c2)) & (~c1 | ~c3)) & "
        "(~c2 | ~c3)))");

  std::mt19937 rng(7u);
  for (int i = 0; i < 10; ++i) {
    const Formula f = flatten_modal_depth(random_plain(rng, 2));
    CHECK(render(reduce_global_k_to_k5(f)) == render(reduce_global_k_to_transitive(f)));
  }

  CHECK_THROWS_AS(reduce_global_k_to_transitive(parse_formula("dia dia p")),
                  std::invalid_argument);
  CHECK_THROWS_AS(reduce_global_k_to_transitive(parse_formula("(c0 & dia p)")),
                  std::invalid_argument);
  CHECK_THROWS_AS(reduce_global_k_to_transitive(parse_formula("dia>=2 p")),
                  std::invalid_argument);
}

TEST_CASE("layer translation: global satisfiability matches over small bounds") {
  const std::vector<std::string> sat_side = {
      "p",          "~p",           "dia p",          "dia ~p",
      "box p",      "box ~p",       "(p & dia p)",    "(p & box p)",
      "(dia p & box p)", "(~p & box ~p)", "(p -> dia p)"};
  // refuting the translated formula by exhaustion gets expensive fast, so
  // only the cheaper refutations run at the full bound here
  const std::vector<std::pair<std::string, int>> unsat_side = {
      {"(p & ~p)", 5},
      {"(~p & dia p)", 5},
      {"(dia p & box ~p)", 4},
      {"(p & (box ~p & dia p))", 4}};

  for (const auto& s : sat_side) {
    const Formula f = parse_formula(s);
    CHECK(oracle_sat(f, "K", 3));
    CHECK(oracle_sat(reduce_global_k_to_transitive(f), "S4", 5));
  }
  for (const auto& [s, bound] : unsat_side) {
    const Formula f = parse_formula(s);
    CHECK_FALSE(oracle_sat(f, "K", 3));
    CHECK_FALSE(oracle_sat(reduce_global_k_to_transitive(f), "S4", bound));
  }
}

TEST_CASE("inverted tree: witnesses the translation in both modes") {
  KripkeStructure tree(7);  // binary, depth 2
  tree.add_edge(0, 1);
  tree.add_edge(0, 2);
  tree.add_edge(1, 3);
  tree.add_edge(1, 4);
  tree.add_edge(2, 5);
  tree.add_edge(2, 6);
  tree.declare("p");
  tree.declare("r");
  for (int w = 1; w < 7; ++w) tree.set_val("p", w);
  for (int w = 0; w < 3; ++w) tree.set_val("r", w);

  for (const char* spec : {"box p", "(r -> dia p)", "(box p & (r -> dia p))"}) {
    const Formula f = parse_formula(spec);
    REQUIRE(globally_satisfies(tree, f));
    const Formula phi = reduce_global_k_to_transitive(f);
    const KripkeStructure mt = build_inverted_tree_model(tree, InvertedTreeMode::Transitive);
    const KripkeStructure me = build_inverted_tree_model(tree, InvertedTreeMode::Euclidean);
    CHECK(globally_satisfies(mt, phi));
    CHECK(globally_satisfies(me, phi));
  }

  const KripkeStructure mt = build_inverted_tree_model(tree, InvertedTreeMode::Transitive);
  CHECK(in_class(mt, parse_frame_class("S4")));
  CHECK(mt.holds("c0", 0));
  CHECK(mt.holds("c1", 1));
  CHECK(mt.holds("c1", 2));
  CHECK(mt.holds("c2", 3));

  const KripkeStructure me = build_inverted_tree_model(tree, InvertedTreeMode::Euclidean);
  const AxiomSet ax = frame_axioms(me);
  CHECK((ax & AX_5) != 0u);
  CHECK((ax & AX_D) != 0u);
  CHECK(lanterns(me).count() == 5);  // the root and the four leaves
  CHECK(me.has_edge(1, 2));          // odd depths form a clique
  CHECK(me.has_edge(1, 1));
  CHECK(me.has_edge(3, 1));          // leaves show their parent
  CHECK_FALSE(me.has_edge(3, 3));
}

TEST_CASE("end to end: euclidean solver digests the torus encoding") {
  const TilingInstance inst = chess_instance();
  const Formula f = encode_torus(inst);
  for (const bool serial : {false, true}) {
    const SatVerdict v = sat_k5(f, serial, 16);
    REQUIRE(v.status == SatStatus::Satisfiable);
    REQUIRE(v.model.has_value());
    REQUIRE(v.witness.has_value());
    CHECK(satisfies(*v.model, *v.witness, f));
    const TilingSolution tau = decode_tiling(*v.model, inst);
    CHECK(check_tiling(inst, tau));
    CHECK(tau.cells == chess_solution().cells);  // the instance has one solution
  }
}

TEST_CASE("inverted tree: non-trees are rejected") {
  KripkeStructure looped(2);
  looped.add_edge(0, 1);
  looped.add_edge(1, 0);
  CHECK(thrown_message([&] { build_inverted_tree_model(looped, InvertedTreeMode::Transitive); })
            .find("root") != std::string::npos);

  KripkeStructure forest(2);
  CHECK(thrown_message([&] { build_inverted_tree_model(forest, InvertedTreeMode::Transitive); })
            .find("roots") != std::string::npos);

  KripkeStructure selfie(1);
  selfie.add_edge(0, 0);
  CHECK(thrown_message([&] { build_inverted_tree_model(selfie, InvertedTreeMode::Euclidean); })
            .find("self loop") != std::string::npos);

  KripkeStructure shared(3);
  shared.add_edge(0, 2);
  shared.add_edge(1, 2);
  CHECK(thrown_message([&] { build_inverted_tree_model(shared, InvertedTreeMode::Transitive); })
            .find("two parents") != std::string::npos);

  KripkeStructure tagged(2);
  tagged.add_edge(0, 1);
  tagged.set_val("c2", 0);
  CHECK_THROWS_AS(build_inverted_tree_model(tagged, InvertedTreeMode::Transitive),
                  std::invalid_argument);
}
