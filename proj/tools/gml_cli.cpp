// Command line front end for the graded two-way modal logic toolkit.
//
// Exit codes:
//   0  success / satisfiable
//   1  unsatisfiable, or no model within the search bound
//   2  usage error: bad flags, unreadable files, malformed input
//   3  internal verification failure: an engine or surgery stage produced
//      output that fails independent re-checking
//
// Results go to standard output, diagnostics to standard error. Every
// satisfiable answer is re-checked through the semantics before exit 0.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "gml/fo.hpp"
#include "gml/formula.hpp"
#include "gml/generators.hpp"
#include "gml/kripke.hpp"
#include "gml/normalform.hpp"
#include "gml/reductions.hpp"
#include "gml/semantics.hpp"
#include "gml/solvers.hpp"
#include "gml/surgery.hpp"

namespace {

using namespace gml;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* kFormulaGrammar = R"x(Formula grammar (.mf):
  formula := iff
  iff     := impl ("<->" impl)*
  impl    := or ("->" or)*
  or      := and ("|" and)*
  and     := unary ("&" unary)*
  unary   := "~" unary | MOD unary | atom
  MOD     := "dia" | "box" | "idia" | "ibox"
           | "dia>=" NUM | "dia<=" NUM | "idia>=" NUM | "idia<=" NUM
  atom    := IDENT | "true" | "false" | "(" formula ")")x";

const char* kModelGrammar = R"(Model text format (.km), one item per line, # starts a comment:
  worlds N
  edge i j
  val p: i j k)";

const char* kTilingGrammar = R"(Tiling file format (.tile), # starts a comment:
  tiles a b c    declares the tile names
  h a b          allows b directly right of a (wrap-around)
  v a b          allows b directly above a (wrap-around)
  init a b       tiles of the first cells of column 0; side = 2^n, n = |init|)";

const char* kFOGrammar = R"(First-order output (native dialect):
  binders "A x." (every), "E x." (some), "E>=n x.", "E<=n x."
  atoms p(x), R(x, y), x = y, true, false; connectives as in the formula
  grammar. --dialect smtlib unrolls counting binders into distinct witnesses.)";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Empty path and "-" both mean standard input, which only one input may use.
std::string read_input(const std::string& path, bool& stdin_taken) {
  if (path.empty() || path == "-") {
    if (stdin_taken) throw UsageError("standard input can feed only one input");
    stdin_taken = true;
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

int count_edges(const KripkeStructure& a) {
  int total = 0;
  for (int w = 0; w < a.n; ++w) total += a.succ[w].count();
  return total;
}

// ---------------------------------------------------------------- parse ----

int run_parse(const std::string& text, const std::string& format) {
  Formula f = parse_formula(text);
  if (format == "tsv") {
    std::cout << "formula\tlength\n" << render(f) << "\t" << formula_length(f) << "\n";
  } else {
    std::cout << render(f) << "\n" << "length " << formula_length(f) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- check ----

int run_check(const std::string& formula_text, const std::string& model_text,
              bool global, const std::string& format) {
  Formula f = parse_formula(formula_text);
  KripkeStructure a = parse_model(model_text);
  if (global) {
    Bitset where = extension(a, f);
    int bad = -1;
    for (int w = 0; w < a.n; ++w)
      if (!where.test(w)) {
        bad = w;
        break;
      }
    if (format == "tsv") {
      std::cout << "status\tworld\n";
      if (bad < 0)
        std::cout << "sat\t-\n";
      else
        std::cout << "unsat\t" << bad << "\n";
    } else if (bad < 0) {
      std::cout << "globally satisfied\n";
    } else {
      std::cout << "fails at world " << bad << "\n";
    }
    return bad < 0 ? 0 : 1;
  }
  std::optional<int> w = locally_satisfied(a, f);
  if (format == "tsv") {
    std::cout << "status\tworld\n";
    if (w)
      std::cout << "sat\t" << *w << "\n";
    else
      std::cout << "unsat\t-\n";
  } else if (w) {
    std::cout << "satisfied at world " << *w << "\n";
  } else {
    std::cout << "not satisfied at any world\n";
  }
  return w ? 0 : 1;
}

// ---------------------------------------------------------------- frame ----

int run_frame(const std::string& model_text, const std::string& format, bool dot) {
  KripkeStructure a = parse_model(model_text);
  if (dot) {
    std::cout << to_dot(a);
    return 0;
  }
  AxiomSet ax = frame_axioms(a);
  if (format == "tsv") {
    std::cout << "worlds\tedges\tD\tT\tB\t4\t5\n"
              << a.n << "\t" << count_edges(a) << "\t" << yesno(ax & AX_D) << "\t"
              << yesno(ax & AX_T) << "\t" << yesno(ax & AX_B) << "\t" << yesno(ax & AX_4)
              << "\t" << yesno(ax & AX_5) << "\n";
    return 0;
  }
  std::cout << "worlds " << a.n << "\n"
            << "edges " << count_edges(a) << "\n"
            << "serial (D): " << yesno(ax & AX_D) << "\n"
            << "reflexive (T): " << yesno(ax & AX_T) << "\n"
            << "symmetric (B): " << yesno(ax & AX_B) << "\n"
            << "transitive (4): " << yesno(ax & AX_4) << "\n"
            << "euclidean (5): " << yesno(ax & AX_5) << "\n"
            << "axioms: " << axioms_to_string(ax) << "\n";
  return 0;
}

// ----------------------------------------------------------- normalform ----

int run_normalform(const std::string& formula_text) {
  Formula f = parse_formula(formula_text);
  NormalForm nf = to_normal_form(f);
  std::cout << "# section: propositional core\n" << render(nf.eta) << "\n";
  std::cout << "# section: at-least\n";
  for (const auto& c : nf.geq)
    std::cout << render(implies(atom(c.guard), dia_geq(c.count, c.body))) << "\n";
  std::cout << "# section: at-most\n";
  for (const auto& c : nf.leq)
    std::cout << render(implies(atom(c.guard), dia_leq(c.bound, c.body))) << "\n";
  std::cout << "# section: inverse diamond\n";
  for (const auto& c : nf.inv_dia)
    std::cout << render(implies(atom(c.guard), inv_dia(c.body))) << "\n";
  std::cout << "# section: inverse box\n";
  for (const auto& c : nf.inv_box)
    std::cout << render(implies(atom(c.guard), inv_box(lnot(c.body)))) << "\n";
  std::cout << "# section: guard definitions\n";
  for (const auto& d : nf.guard_defs)
    std::cout << "# " << d.name << " := " << render(d.meaning) << "\n";
  NFBounds bounds = nf_bounds(nf);
  std::cout << "# m-constant " << m_constant(nf) << "\n"
            << "# depth-bound " << bounds.depth << "\n"
            << "# width-bound " << bounds.width << "\n";
  return 0;
}

// ------------------------------------------------------------ translate ----

int run_translate(const std::string& formula_text, const std::string& target,
                  bool serial, const std::string& dialect) {
  Formula f = parse_formula(formula_text);
  FOFormula out;
  if (target == "gc2") {
    if (serial) throw UsageError("--serial applies to targets c2-k5 and c1-k45 only");
    out = st(f, FOVar::X);
  } else if (target == "c2-k5") {
    out = translate_k5(f, serial);
  } else {
    out = translate_k45_c1(f, serial);
  }
  FODialect d = dialect == "smtlib" ? FODialect::SmtlibApprox : FODialect::Native;
  std::cout << serialize_fo(out, d) << "\n";
  return 0;
}

// -------------------------------------------------------------- surgery ----

int run_surgery(const std::string& stage, const std::string& formula_text,
                const std::string& model_text, bool dot) {
  Formula f = parse_formula(formula_text);
  NormalForm nf = to_normal_form(f);
  Formula psi = nf_to_formula(nf);
  KripkeStructure a = extend_canonical(parse_model(model_text), nf);
  if (!globally_satisfies(a, psi))
    throw UsageError("the model is not a global model of the formula's normal form");
  KripkeStructure out = stage == "depth"   ? reduce_depth(a, nf)
                        : stage == "width" ? reduce_width(a, nf)
                                           : finitize(a, nf);
  if (!globally_satisfies(out, psi)) {
    std::cerr << "internal verification failure: the " << stage
              << " stage output fails re-checking\n";
    return 3;
  }
  std::cerr << stage << ": worlds " << a.n << " -> " << out.n << "\n";
  std::cout << (dot ? to_dot(out) : render_model(out));
  return 0;
}

// ---------------------------------------------------------------- solve ----

struct SolveOptions {
  std::string cls;
  std::string mode = "local";
  std::string engine = "oracle";
  int bound = 4;
  int lanterns = 16;
  std::string formula_path;
  std::string local_path;
  std::string format = "text";
  bool dot = false;
};

int report_sat(const SolveOptions& opt, const KripkeStructure& model,
               std::optional<int> witness) {
  if (opt.format == "tsv") {
    std::cout << "status\twitness\tworlds\nsat\t";
    if (witness)
      std::cout << *witness;
    else
      std::cout << "-";
    std::cout << "\t" << model.n << "\n";
  } else if (opt.dot) {
    std::cout << to_dot(model);
  } else {
    // Status lines are comments so the stream stays parseable model text.
    std::cout << "# satisfiable\n";
    if (witness) std::cout << "# witness world " << *witness << "\n";
    std::cout << render_model(model);
  }
  return 0;
}

int report_negative(const SolveOptions& opt, const std::string& status,
                    const std::string& message, const std::string& reason) {
  if (opt.format == "tsv")
    std::cout << "status\twitness\tworlds\n" << status << "\t-\t-\n";
  else
    std::cout << message << "\n";
  if (!reason.empty()) std::cerr << reason << "\n";
  return 1;
}

int run_solve(const SolveOptions& opt, bool& stdin_taken) {
  FrameClass cls = parse_frame_class(opt.cls);
  SatMode mode = opt.mode == "local"    ? SatMode::Local
                 : opt.mode == "global" ? SatMode::Global
                                        : SatMode::Combined;
  Formula f = parse_formula(read_input(opt.formula_path, stdin_taken));
  std::optional<Formula> local_part;
  if (mode == SatMode::Combined) {
    if (opt.local_path.empty())
      throw UsageError("--mode combined needs --local-part (the somewhere formula)");
    local_part = parse_formula(read_input(opt.local_path, stdin_taken));
  } else if (!opt.local_path.empty()) {
    throw UsageError("--local-part requires --mode combined");
  }

  SatVerdict v;
  if (opt.engine == "oracle") {
    SatQuery q;
    q.formula = f;
    q.frame_class = cls;
    q.mode = mode;
    q.local_part = local_part;
    q.bound = opt.bound;
    v = bounded_sat(q);
  } else {
    // The structured engines decide local satisfiability over one connected
    // clique-and-lantern shape; global and combined queries ride on the
    // universal modality, which those shapes support.
    bool serial;
    if (opt.engine == "k45") {
      if (opt.cls == "K45")
        serial = false;
      else if (opt.cls == "D45")
        serial = true;
      else
        throw UsageError("--engine k45 decides classes K45 and D45");
    } else {
      if (opt.cls == "K5")
        serial = false;
      else if (opt.cls == "D5")
        serial = true;
      else
        throw UsageError("--engine k5 decides classes K5 and D5");
    }
    Formula wrapped = mode == SatMode::Local    ? f
                      : mode == SatMode::Global ? global_to_local(f)
                                                : land(*local_part, global_to_local(f));
    v = opt.engine == "k45" ? sat_k45(wrapped, serial) : sat_k5(wrapped, serial, opt.lanterns);
  }

  switch (v.status) {
    case SatStatus::Satisfiable: {
      if (!v.model) {
        std::cerr << "internal verification failure: satisfiable verdict without a model\n";
        return 3;
      }
      const KripkeStructure& m = *v.model;
      std::optional<int> witness = v.witness;
      bool ok = in_class(m, cls);
      if (mode == SatMode::Local) {
        if (!witness) witness = locally_satisfied(m, f);
        ok = ok && witness && satisfies(m, *witness, f);
      } else if (mode == SatMode::Global) {
        ok = ok && globally_satisfies(m, f);
        witness.reset();
      } else {
        if (!witness) witness = combined_satisfies(m, f, *local_part);
        ok = ok && witness && satisfies(m, *witness, *local_part) && globally_satisfies(m, f);
      }
      if (!ok) {
        std::cerr << "internal verification failure: the engine's model fails "
                     "independent re-checking\n";
        return 3;
      }
      return report_sat(opt, m, witness);
    }
    case SatStatus::NoModelWithinBound: {
      std::string msg = opt.engine == "oracle"
                            ? "no model within bound " + std::to_string(opt.bound)
                            : "no model within the search budget";
      return report_negative(opt, "no-model", msg, v.reason);
    }
    case SatStatus::Unsatisfiable:
      return report_negative(opt, "unsat", "unsatisfiable", v.reason);
  }
  return 3;  // unreachable
}

// --------------------------------------------------------------- reduce ----

int run_reduce(const std::string& kind, const std::string& tiling_path,
               const std::string& formula_path, bool& stdin_taken) {
  if (kind == "tiling") {
    if (!formula_path.empty()) throw UsageError("--kind tiling reads -t, not -f");
    TilingInstance inst = parse_tiling(read_input(tiling_path, stdin_taken));
    std::cout << render(encode_torus(inst)) << "\n";
    return 0;
  }
  if (!tiling_path.empty()) throw UsageError("-t applies to --kind tiling only");
  Formula f = parse_formula(read_input(formula_path, stdin_taken));
  std::uint64_t d = modal_depth(f);
  if (d > 1) {
    f = flatten_modal_depth(f);
    std::cerr << "flattened modal depth " << d << " to 1\n";
  }
  Formula out = kind == "k-to-4" ? reduce_global_k_to_transitive(f) : reduce_global_k_to_k5(f);
  std::cout << render(out) << "\n";
  return 0;
}

// ------------------------------------------------------------- selftest ----

int run_selftest(std::uint64_t seed) {
  struct Fail : std::runtime_error {
    using std::runtime_error::runtime_error;
  };
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw Fail(msg);
  };
  const std::vector<std::string> two{"p", "q"};
  const std::vector<std::string> three{"p", "q", "r"};

  std::vector<std::pair<std::string, std::function<std::string()>>> suites;

  suites.emplace_back("formula-roundtrip", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int i = 0; i < 60; ++i) {
      Formula f = random_formula(rng, 3, three, 4);
      require(equal(parse_formula(render(f)), f), "render/parse round trip failed for " + render(f));
    }
    for (int i = 0; i < 30; ++i) {
      Formula f = random_formula(rng, 2, two, 2);
      KripkeStructure a = random_structure(rng, 5, two, 0.4);
      Bitset want = extension(a, f);
      require(want == extension(a, desugar(f)), "desugaring changed the meaning of " + render(f));
      require(want == extension(a, simplify(f)), "simplification changed the meaning of " + render(f));
    }
    return "60 round trips, 30 semantic preservation checks";
  });

  suites.emplace_back("euclidean-shapes", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbull);
    for (int i = 0; i < 60; ++i) {
      bool transitive = (i % 2) == 1;
      KripkeStructure a = random_connected_euclidean(rng, 7, two, transitive);
      require((frame_axioms(a) & AX_5) != 0u, "generator produced a non-euclidean structure");
      Bitset inner = inner_worlds(a);
      for (int u = 0; u < a.n; ++u) {
        if (!inner.test(u)) continue;
        for (int v = 0; v < a.n; ++v)
          if (inner.test(v))
            require(a.has_edge(u, v), "inner worlds do not form a reflexive clique");
      }
      if (transitive) {
        require((frame_axioms(a) & AX_4) != 0u, "transitive flavor is not transitive");
        Bitset lan = lanterns(a);
        for (int l = 0; l < a.n; ++l) {
          if (!lan.test(l)) continue;
          for (int v = 0; v < a.n; ++v)
            if (inner.test(v)) require(a.has_edge(l, v), "a lantern misses an inner world");
        }
      }
      if (i < 10)
        require(same_structure(parse_model(render_model(a)), a), "model text round trip failed");
    }
    return "60 connected euclidean structures";
  });

  suites.emplace_back("universal-modality", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    for (int i = 0; i < 40; ++i) {
      KripkeStructure a = random_connected_euclidean(rng, 6, two, (i % 2) == 0);
      Formula f = random_formula(rng, 2, two, 2);
      bool somewhere = locally_satisfied(a, global_to_local(f)).has_value();
      require(somewhere == globally_satisfies(a, f), "universal modality mismatch on " + render(f));
    }
    return "40 structure/formula pairs";
  });

  suites.emplace_back("first-order-translations", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0x165667b19e3779f9ull);
    int points = 0;
    for (int i = 0; i < 25; ++i) {
      KripkeStructure a = random_structure(rng, 5, two, 0.35);
      Formula f = random_formula(rng, 2, two, 2);
      FOFormula g = st(f, FOVar::X);
      require(is_gc2(g), "standard translation left the guarded fragment: " + render(f));
      if (i < 10) require(equal_fo(parse_fo(serialize_fo(g)), g), "first-order round trip failed");
      FOStructure s = expand_lan(a);
      for (int w = 0; w < a.n; ++w, ++points)
        require(fo_eval(s, g, w) == satisfies(a, w, f), "standard translation disagrees at a world");
    }
    for (int i = 0; i < 12; ++i) {
      KripkeStructure a = random_connected_euclidean(rng, 6, two, false);
      Formula f = random_formula(rng, 2, two, 2);
      FOFormula tr = translate_k5(f);
      FOStructure s = expand_lan(a);
      for (int w = 0; w < a.n; ++w, ++points)
        require(fo_eval(s, tr, w) == satisfies(a, w, f), "euclidean translation disagrees at a world");
    }
    for (int i = 0; i < 12; ++i) {
      KripkeStructure a = random_connected_euclidean(rng, 6, two, true);
      Formula f = random_two_way_formula(rng, 2, two, 2);
      FOFormula tr = translate_k45_c1(f);
      require(is_c1(tr), "one-variable translation left its fragment");
      FOStructure s = expand_lan(a);
      for (int w = 0; w < a.n; ++w, ++points)
        require(fo_eval(s, tr, w) == satisfies(a, w, f),
                "one-variable translation disagrees at a world");
    }
    return std::to_string(points) + " pointwise agreements";
  });

  suites.emplace_back("normal-form", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0x27220a95fe1d8ad1ull);
    int tried = 0, hits = 0;
    for (int iter = 0; iter < 60 && hits < 14; ++iter) {
      Formula raw = random_two_way_formula(rng, 2, two, 2);
      Formula f = (iter % 2 == 0) ? lor(raw, lnot(raw)) : raw;
      NormalForm nf = to_normal_form(f);
      Formula psi = nf_to_formula(nf);
      ++tried;
      require(formula_length(psi) <=
                  40 * std::max<std::uint64_t>(std::uint64_t{1}, formula_length(f)),
              "normal form grew past the linear envelope");
      KripkeStructure a = random_structure(rng, 4, two, 0.4);
      if (!globally_satisfies(a, f)) continue;
      KripkeStructure b = extend_canonical(a, nf);
      require(globally_satisfies(b, psi), "canonical guard extension broke a global model");
      ++hits;
    }
    require(hits >= 10, "too few globally satisfied samples (got " + std::to_string(hits) + ")");
    return std::to_string(tried) + " normal forms, " + std::to_string(hits) +
           " canonical extensions";
  });

  suites.emplace_back("model-surgery", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0x85ebca77c2b2ae63ull);
    int runs = 0;
    for (int iter = 0; iter < 80 && runs < 8; ++iter) {
      Formula raw = random_two_way_formula(rng, 2, two, 2);
      KripkeStructure a0 = random_transitive(rng, 6, two);
      Formula f;
      if (iter % 2 == 0) {
        f = lor(raw, lnot(raw));  // globally true by shape
      } else {
        if (!globally_satisfies(a0, raw)) continue;
        f = raw;
      }
      NormalForm nf = to_normal_form(f);
      Formula psi = nf_to_formula(nf);
      KripkeStructure a = extend_canonical(a0, nf);
      require(globally_satisfies(a, psi), "canonical extension is not a global model");
      NFBounds bounds = nf_bounds(nf);
      KripkeStructure b = reduce_depth(a, nf);
      require(depth(b).value <= bounds.depth && globally_satisfies(b, psi),
              "depth stage broke its contract");
      KripkeStructure c = reduce_width(b, nf);
      require(static_cast<std::uint64_t>(width(c)) <= bounds.width && globally_satisfies(c, psi),
              "width stage broke its contract");
      KripkeStructure d = finitize(c, nf);
      require(globally_satisfies(d, psi) && (frame_axioms(d) & AX_4) != 0u,
              "finitization broke its contract");
      ++runs;
    }
    require(runs >= 6, "too few surgery samples (got " + std::to_string(runs) + ")");
    return std::to_string(runs) + " depth/width/finitize pipelines";
  });

  suites.emplace_back("bounded-solvers", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0x94d049bb133111ebull);
    std::vector<Formula> pool = {
        land(atom("p"), lnot(atom("p"))),
        land(dia(atom("p")), box(lnot(atom("p")))),
        land(dia_geq(2, truth()), dia_leq(1, truth())),
    };
    for (int i = 0; i < 50; ++i) pool.push_back(random_two_way_formula(rng, 2, two, 2));
    int engine_sat = 0, engine_unsat = 0, oracle_sat = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const Formula& f = pool[i];
      bool serial = (i % 2) == 1;
      FrameClass cls = parse_frame_class(serial ? "D45" : "K45");
      SatVerdict v = sat_k45(f, serial);
      SatQuery q;
      q.formula = f;
      q.frame_class = cls;
      q.mode = SatMode::Local;
      q.bound = 3;
      SatVerdict o = bounded_sat(q);
      if (v.status == SatStatus::Satisfiable) {
        ++engine_sat;
        require(v.model.has_value() && v.witness.has_value(),
                "engine reported sat without a witness");
        require(satisfies(*v.model, *v.witness, f), "engine model fails re-checking");
        require(in_class(*v.model, cls), "engine model lies outside the frame class");
      } else {
        ++engine_unsat;
        require(o.status != SatStatus::Satisfiable,
                "oracle found a model the engine rejected: " + render(f));
      }
      if (o.status == SatStatus::Satisfiable) {
        ++oracle_sat;
        require(v.status == SatStatus::Satisfiable, "engine missed an oracle model: " + render(f));
      }
    }
    require(engine_unsat >= 3, "the unsatisfiable side went unexercised");
    return std::to_string(engine_sat) + " engine sat, " + std::to_string(engine_unsat) +
           " engine unsat, " + std::to_string(oracle_sat) + " oracle-confirmed";
  });

  suites.emplace_back("tiling-pipeline", [&]() -> std::string {
    TilingInstance inst;
    inst.problem.tiles = {"a", "b"};
    inst.problem.horiz = {{"a", "b"}, {"b", "a"}};
    inst.problem.vert = {{"a", "b"}, {"b", "a"}};
    inst.n = 1;
    inst.initial = {"a"};
    TilingSolution tau;
    tau.side = 2;
    tau.cells = {"a", "b", "b", "a"};
    require(check_tiling(inst, tau), "the checker rejects the checkerboard solution");
    require(render_tiling(parse_tiling(render_tiling(inst))) == render_tiling(inst),
            "tiling text round trip failed");
    Formula enc = encode_torus(inst);
    KripkeStructure m = build_intended_model(inst, tau);
    require(satisfies(m, 0, enc), "intended model fails the encoding at the origin");
    require(decode_tiling(m, inst).cells == tau.cells, "decoding does not invert building");
    SatVerdict v = sat_k5(enc, false, 16);
    require(v.status == SatStatus::Satisfiable && v.model.has_value() && v.witness.has_value(),
            "euclidean engine cannot solve the encoding");
    require(satisfies(*v.model, *v.witness, enc), "engine model fails re-checking");
    require(check_tiling(inst, decode_tiling(*v.model, inst)),
            "decoded engine solution is invalid");
    return "encode, build, decode, and solve agree on a 2-tile instance";
  });

  suites.emplace_back("layered-reduction", [&]() -> std::string {
    std::mt19937_64 rng(seed ^ 0xbf58476d1ce4e5b9ull);
    std::function<Formula(int)> plain = [&](int d) -> Formula {
      std::uniform_int_distribution<int> pick(0, d > 0 ? 6 : 1);
      switch (pick(rng)) {
        case 0: return atom("p");
        case 1: return lnot(atom("p"));
        case 2: return lnot(plain(d - 1));
        case 3: return land(plain(d - 1), plain(d - 1));
        case 4: return lor(plain(d - 1), plain(d - 1));
        case 5: return dia(plain(d - 1));
        default: return box(plain(d - 1));
      }
    };
    std::vector<std::pair<KripkeStructure, Formula>> cases;
    {
      KripkeStructure star(3);
      star.add_edge(0, 1);
      star.add_edge(0, 2);
      for (int w = 0; w < 3; ++w) star.set_val("p", w);
      cases.emplace_back(star, atom("p"));
      KripkeStructure chain(3);
      chain.add_edge(0, 1);
      chain.add_edge(1, 2);
      for (int w = 0; w < 3; ++w) chain.set_val("p", w);
      cases.emplace_back(chain, land(atom("p"), box(atom("p"))));
      KripkeStructure leaf(1);
      leaf.declare("p");
      cases.emplace_back(leaf, box(falsity()));
    }
    for (int i = 0; i < 20; ++i) {
      KripkeStructure t = random_tree(rng, 6, {"p"});
      Formula f = plain(1);
      if (!globally_satisfies(t, f)) continue;
      cases.emplace_back(t, f);
    }
    int hits = 0;
    for (const auto& [tree, f] : cases) {
      Formula star_f = reduce_global_k_to_transitive(f);
      require(render(reduce_global_k_to_k5(f)) == render(star_f),
              "the two reduction targets disagree");
      KripkeStructure bt = build_inverted_tree_model(tree, InvertedTreeMode::Transitive);
      require(globally_satisfies(bt, star_f),
              "transitive witness fails the layered formula for " + render(f));
      require(in_class(bt, parse_frame_class("S4")), "transitive witness left S4");
      KripkeStructure be = build_inverted_tree_model(tree, InvertedTreeMode::Euclidean);
      require(globally_satisfies(be, star_f),
              "euclidean witness fails the layered formula for " + render(f));
      require((frame_axioms(be) & AX_5) != 0u, "euclidean witness lost its frame properties");
      if (tree.n >= 2) require((frame_axioms(be) & AX_D) != 0u, "euclidean witness not serial");
      ++hits;
    }
    require(hits >= 3, "too few constructive cases");
    return std::to_string(hits) + " tree witnesses in both modes";
  });

  suites.emplace_back("finite-model-horizon", [&]() -> std::string {
    Formula inf =
        land(land(inv_dia(atom("p")), inv_dia(lnot(atom("p")))), dia_leq(1, truth()));
    SatQuery gq;
    gq.formula = inf;
    gq.frame_class = parse_frame_class("K");
    gq.mode = SatMode::Global;
    gq.bound = 4;
    SatVerdict gv = bounded_sat(gq);
    require(gv.status == SatStatus::NoModelWithinBound,
            "the infinity axiom found a small global model");
    SatQuery lq;
    lq.formula = inf;
    lq.frame_class = parse_frame_class("K");
    lq.mode = SatMode::Local;
    lq.bound = 3;
    SatVerdict lv = bounded_sat(lq);
    require(lv.status == SatStatus::Satisfiable && lv.model.has_value() &&
                lv.witness.has_value(),
            "the infinity axiom is not locally satisfiable within bound 3");
    require(satisfies(*lv.model, *lv.witness, inf), "local witness fails re-checking");
    return "no global model within bound 4; local witness within bound 3";
  });

  bool all_ok = true;
  for (const auto& [name, fn] : suites) {
    try {
      std::cout << "ok " << name << ": " << fn() << "\n";
    } catch (const std::exception& e) {
      all_ok = false;
      std::cout << "FAIL " << name << ": " << e.what() << "\n";
    }
  }
  std::cout << (all_ok ? "selftest passed" : "selftest FAILED") << " (seed " << seed << ")\n";
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded two-way modal logic toolkit"};
  app.require_subcommand(1);
  app.footer(std::string("Exit codes: 0 success/satisfiable, 1 unsatisfiable or no model within "
                         "bound,\n2 usage error, 3 internal verification failure.\n"
                         "File extensions: .mf formula, .km model, .tile tiling; \"-\" reads "
                         "standard input.\n\n") +
             kFormulaGrammar + "\n\n" + kModelGrammar + "\n\n" + kTilingGrammar);

  // parse
  auto* cmd_parse = app.add_subcommand("parse", "parse a formula; echo its rendering and length");
  std::string parse_input = "-";
  cmd_parse->add_option("input,-f,--formula", parse_input, "formula file, or - for standard input")
      ->capture_default_str();
  std::string parse_format = "text";
  cmd_parse->add_option("--format", parse_format, "output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->capture_default_str();
  cmd_parse->footer(kFormulaGrammar);

  // check
  auto* cmd_check = app.add_subcommand("check", "evaluate a formula on a model");
  std::string check_f, check_m, check_format = "text";
  bool check_global = false;
  cmd_check->add_option("-f,--formula", check_f, "formula file (- for standard input)")
      ->required();
  cmd_check->add_option("-m,--model", check_m, "model file (- for standard input)")->required();
  cmd_check->add_flag("--global", check_global,
                      "require truth at every world (default: at some world)");
  cmd_check->add_option("--format", check_format, "output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->capture_default_str();
  cmd_check->footer(std::string(kFormulaGrammar) + "\n\n" + kModelGrammar);

  // frame
  auto* cmd_frame = app.add_subcommand("frame", "report which frame axioms a model satisfies");
  std::string frame_m, frame_format = "text";
  bool frame_dot = false;
  cmd_frame->add_option("-m,--model", frame_m, "model file (- for standard input)")->required();
  cmd_frame->add_option("--format", frame_format, "output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->capture_default_str();
  cmd_frame->add_flag("--dot", frame_dot, "emit the model as DOT instead of a report");
  cmd_frame->footer(kModelGrammar);

  // normalform
  auto* cmd_nf = app.add_subcommand(
      "normalform", "decompose a formula into its guarded counting normal form");
  std::string nf_f = "-";
  cmd_nf->add_option("input,-f,--formula", nf_f, "formula file, or - for standard input")
      ->capture_default_str();
  cmd_nf->footer(std::string("Non-comment output lines are the conjuncts of the normal form;\n"
                             "guard definitions and size bounds appear as # comments.\n\n") +
                 kFormulaGrammar);

  // translate
  auto* cmd_tr = app.add_subcommand("translate", "translate a formula into first-order logic");
  std::string tr_target, tr_f = "-", tr_dialect = "native";
  bool tr_serial = false;
  cmd_tr->add_option("--target", tr_target,
                     "gc2: guarded two-variable counting (all frames); c2-k5: two-variable "
                     "counting (connected euclidean); c1-k45: one-variable counting (connected "
                     "transitive euclidean)")
      ->check(CLI::IsMember({"gc2", "c2-k5", "c1-k45"}))
      ->required();
  cmd_tr->add_flag("--serial", tr_serial, "add the seriality clause (c2-k5 and c1-k45)");
  cmd_tr->add_option("--dialect", tr_dialect, "output dialect")
      ->check(CLI::IsMember({"native", "smtlib"}))
      ->capture_default_str();
  cmd_tr->add_option("input,-f,--formula", tr_f, "formula file, or - for standard input")
      ->capture_default_str();
  cmd_tr->footer(kFOGrammar);

  // surgery
  auto* cmd_sur = app.add_subcommand(
      "surgery", "shrink a transitive global model of a formula's normal form");
  std::string sur_stage, sur_nf, sur_m;
  bool sur_dot = false;
  cmd_sur->add_option("--stage", sur_stage,
                      "depth: bound the depth; width: bound clique sizes; finitize: bound "
                      "sibling-clique counts")
      ->check(CLI::IsMember({"depth", "width", "finitize"}))
      ->required();
  cmd_sur->add_option("--nf", sur_nf, "formula file; its normal form drives the surgery")
      ->required();
  cmd_sur->add_option("-m,--model", sur_m, "model file (- for standard input)")->required();
  cmd_sur->add_flag("--dot", sur_dot, "emit the result as DOT instead of model text");
  cmd_sur->footer(std::string("Guard variables are recomputed canonically before the stage "
                              "runs, so stages pipe:\n  gml surgery --stage depth --nf f.mf -m "
                              "m.km | gml surgery --stage width --nf f.mf -m -\n\n") +
                  kModelGrammar);

  // solve
  auto* cmd_solve = app.add_subcommand("solve", "search for a model of a formula");
  SolveOptions so;
  cmd_solve->add_option("--class", so.cls, "frame class")
      ->check(CLI::IsMember({"K", "D", "T", "B", "DB", "TB", "K4", "D4", "S4", "K5", "D5", "K45",
                             "D45", "KB4", "KB45", "S5"}))
      ->required();
  cmd_solve->add_option("--mode", so.mode,
                        "local: truth at some world; global: truth everywhere; combined: -f "
                        "everywhere plus --local-part somewhere")
      ->check(CLI::IsMember({"local", "global", "combined"}))
      ->capture_default_str();
  cmd_solve->add_option("--engine", so.engine,
                        "oracle: exhaustive search up to --bound worlds (any class); k45: "
                        "clique-and-lantern decision procedure for K45/D45; k5: the same for "
                        "K5/D5")
      ->check(CLI::IsMember({"oracle", "k45", "k5"}))
      ->capture_default_str();
  cmd_solve->add_option("--bound", so.bound, "world cap for the oracle engine")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd_solve->add_option("--lanterns", so.lanterns, "lantern cap for the k5 engine")
      ->check(CLI::Range(0, 100000))
      ->capture_default_str();
  cmd_solve->add_option("-f,--formula", so.formula_path,
                        "formula file; by default the formula is read from standard input");
  cmd_solve->add_option("--local-part", so.local_path,
                        "somewhere-formula file for --mode combined");
  cmd_solve->add_option("--format", so.format, "output format")
      ->check(CLI::IsMember({"text", "tsv"}))
      ->capture_default_str();
  cmd_solve->add_flag("--dot", so.dot, "emit a found model as DOT");
  cmd_solve->footer(std::string("On satisfiable the model is printed as model text with # status "
                                "lines, so the\noutput parses as a model again. Every model is "
                                "re-checked through the\nsemantics before exit 0.\n\n") +
                    kFormulaGrammar + "\n\n" + kModelGrammar);

  // reduce
  auto* cmd_red = app.add_subcommand("reduce", "emit a hardness-reduction formula");
  std::string red_kind, red_t, red_f;
  cmd_red->add_option("--kind", red_kind,
                      "tiling: torus tiling to euclidean satisfiability; k-to-4 / k-to-5: "
                      "layered translation of global satisfiability into S4 / K5 targets")
      ->check(CLI::IsMember({"tiling", "k-to-4", "k-to-5"}))
      ->required();
  cmd_red->add_option("-t,--tiling", red_t, "tiling file (- for standard input)");
  cmd_red->add_option("-f,--formula", red_f,
                      "formula file for k-to-4 / k-to-5 (default standard input); deeper "
                      "formulas are flattened to modal depth 1 first");
  cmd_red->footer(std::string(kTilingGrammar) + "\n\n" + kFormulaGrammar);

  // selftest
  auto* cmd_self = app.add_subcommand("selftest", "run the seeded invariant corpus");
  std::uint64_t self_seed = 0;
  cmd_self->add_option("--seed", self_seed, "random seed for the corpus")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  bool stdin_taken = false;
  try {
    if (cmd_parse->parsed()) return run_parse(read_input(parse_input, stdin_taken), parse_format);
    if (cmd_check->parsed())
      return run_check(read_input(check_f, stdin_taken), read_input(check_m, stdin_taken),
                       check_global, check_format);
    if (cmd_frame->parsed())
      return run_frame(read_input(frame_m, stdin_taken), frame_format, frame_dot);
    if (cmd_nf->parsed()) return run_normalform(read_input(nf_f, stdin_taken));
    if (cmd_tr->parsed())
      return run_translate(read_input(tr_f, stdin_taken), tr_target, tr_serial, tr_dialect);
    if (cmd_sur->parsed())
      return run_surgery(sur_stage, read_input(sur_nf, stdin_taken),
                         read_input(sur_m, stdin_taken), sur_dot);
    if (cmd_solve->parsed()) return run_solve(so, stdin_taken);
    if (cmd_red->parsed()) return run_reduce(red_kind, red_t, red_f, stdin_taken);
    if (cmd_self->parsed()) return run_selftest(self_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::string msg = e.what();
    if (msg.find("line ") == std::string::npos)
      msg += " (line " + std::to_string(e.line) + ", column " + std::to_string(e.col) + ")";
    std::cerr << "error: " << msg << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    std::cerr << "internal verification failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
