#include "gml/fo.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace gml {

FOVar other_var(FOVar v) { return v == FOVar::X ? FOVar::Y : FOVar::X; }

namespace {

FOFormula make(FOKind kind, std::string pred, FOVar a, FOVar b, std::uint64_t n,
               FOFormula lhs, FOFormula rhs) {
  auto node = std::make_shared<FONode>();
  node->kind = kind;
  node->pred = std::move(pred);
  node->a = a;
  node->b = b;
  node->n = n;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

const char* var_name(FOVar v) { return v == FOVar::X ? "x" : "y"; }

}  // namespace

FOFormula fo_pred(const std::string& name, FOVar v) {
  return make(FOKind::Pred, name, v, FOVar::X, 0, nullptr, nullptr);
}
FOFormula fo_rel(FOVar a, FOVar b) { return make(FOKind::Rel, "", a, b, 0, nullptr, nullptr); }
FOFormula fo_equal(FOVar a, FOVar b) { return make(FOKind::Equal, "", a, b, 0, nullptr, nullptr); }
FOFormula fo_true() { return make(FOKind::True, "", FOVar::X, FOVar::X, 0, nullptr, nullptr); }
FOFormula fo_false() { return make(FOKind::False, "", FOVar::X, FOVar::X, 0, nullptr, nullptr); }
FOFormula fo_not(FOFormula f) {
  return make(FOKind::Not, "", FOVar::X, FOVar::X, 0, std::move(f), nullptr);
}
FOFormula fo_and(FOFormula a, FOFormula b) {
  return make(FOKind::And, "", FOVar::X, FOVar::X, 0, std::move(a), std::move(b));
}
FOFormula fo_or(FOFormula a, FOFormula b) {
  return make(FOKind::Or, "", FOVar::X, FOVar::X, 0, std::move(a), std::move(b));
}
FOFormula fo_implies(FOFormula a, FOFormula b) {
  return make(FOKind::Implies, "", FOVar::X, FOVar::X, 0, std::move(a), std::move(b));
}
FOFormula fo_iff(FOFormula a, FOFormula b) {
  return make(FOKind::Iff, "", FOVar::X, FOVar::X, 0, std::move(a), std::move(b));
}
FOFormula fo_forall(FOVar v, FOFormula body) {
  return make(FOKind::Forall, "", v, FOVar::X, 0, std::move(body), nullptr);
}
FOFormula fo_exists(FOVar v, FOFormula body) {
  return make(FOKind::Exists, "", v, FOVar::X, 0, std::move(body), nullptr);
}
FOFormula fo_count_geq(std::uint64_t n, FOVar v, FOFormula body) {
  return make(FOKind::CountGeq, "", v, FOVar::X, n, std::move(body), nullptr);
}
FOFormula fo_count_leq(std::uint64_t n, FOVar v, FOFormula body) {
  return make(FOKind::CountLeq, "", v, FOVar::X, n, std::move(body), nullptr);
}

bool equal_fo(const FOFormula& a, const FOFormula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->pred != b->pred || a->a != b->a || a->b != b->b ||
      a->n != b->n)
    return false;
  return equal_fo(a->lhs, b->lhs) && equal_fo(a->rhs, b->rhs);
}

std::uint64_t fo_size(const FOFormula& f) {
  if (!f) return 0;
  return 1 + fo_size(f->lhs) + fo_size(f->rhs);
}

namespace {

unsigned var_bit(FOVar v) { return v == FOVar::X ? 1u : 2u; }

}  // namespace

unsigned fo_free_vars(const FOFormula& f) {
  if (!f) return 0;
  switch (f->kind) {
    case FOKind::Pred: return var_bit(f->a);
    case FOKind::Rel:
    case FOKind::Equal: return var_bit(f->a) | var_bit(f->b);
    case FOKind::True:
    case FOKind::False: return 0;
    case FOKind::Forall:
    case FOKind::Exists:
    case FOKind::CountGeq:
    case FOKind::CountLeq: return fo_free_vars(f->lhs) & ~var_bit(f->a);
    default: return fo_free_vars(f->lhs) | fo_free_vars(f->rhs);
  }
}

namespace {

bool guards_both(const FOFormula& g) {
  return g && g->kind == FOKind::Rel && g->a != g->b;
}

}  // namespace

bool is_gc2(const FOFormula& f) {
  if (!f) return true;
  switch (f->kind) {
    case FOKind::Pred:
    case FOKind::Rel:
    case FOKind::Equal:
    case FOKind::True:
    case FOKind::False: return true;
    case FOKind::Not: return is_gc2(f->lhs);
    case FOKind::And:
    case FOKind::Or:
    case FOKind::Implies:
    case FOKind::Iff: return is_gc2(f->lhs) && is_gc2(f->rhs);
    case FOKind::Forall:
      return f->lhs->kind == FOKind::Implies && guards_both(f->lhs->lhs) &&
             is_gc2(f->lhs->rhs);
    case FOKind::Exists:
    case FOKind::CountGeq:
    case FOKind::CountLeq:
      return f->lhs->kind == FOKind::And && guards_both(f->lhs->lhs) &&
             is_gc2(f->lhs->rhs);
  }
  return false;
}

bool is_c1(const FOFormula& f) {
  if (!f) return true;
  switch (f->kind) {
    case FOKind::Pred: return f->a == FOVar::X;
    case FOKind::Rel: return false;
    case FOKind::Equal: return f->a == FOVar::X && f->b == FOVar::X;
    case FOKind::True:
    case FOKind::False: return true;
    case FOKind::Forall:
    case FOKind::Exists:
    case FOKind::CountGeq:
    case FOKind::CountLeq:
      return f->a == FOVar::X && is_c1(f->lhs);
    default: return is_c1(f->lhs) && is_c1(f->rhs);
  }
}

// ---------------------------------------------------------------------------
// Translations
// ---------------------------------------------------------------------------

namespace {

FOFormula st_core(const Formula& f, FOVar v) {
  switch (f->kind) {
    case Conn::Atom: return fo_pred(f->name, v);
    case Conn::True: return fo_true();
    case Conn::False: return fo_false();
    case Conn::Not: return fo_not(st_core(f->lhs, v));
    case Conn::And: return fo_and(st_core(f->lhs, v), st_core(f->rhs, v));
    case Conn::Or: return fo_or(st_core(f->lhs, v), st_core(f->rhs, v));
    case Conn::Implies: return fo_implies(st_core(f->lhs, v), st_core(f->rhs, v));
    case Conn::Iff: return fo_iff(st_core(f->lhs, v), st_core(f->rhs, v));
    case Conn::DiaGeq: {
      FOVar u = other_var(v);
      return fo_count_geq(f->grade, u, fo_and(fo_rel(v, u), st_core(f->lhs, u)));
    }
    case Conn::InvDiaGeq: {
      FOVar u = other_var(v);
      return fo_count_geq(f->grade, u, fo_and(fo_rel(u, v), st_core(f->lhs, u)));
    }
    default: throw std::logic_error("st: formula not desugared");
  }
}

void reject_lan(const Formula& f) {
  if (variables(f).count("lan"))
    throw std::invalid_argument("formula mentions the reserved variable 'lan'");
}

}  // namespace

FOFormula st(const Formula& f, FOVar v) { return st_core(desugar(f), v); }

FOFormula translate_k5(const Formula& f, bool serial) {
  reject_lan(f);
  FOFormula clique = fo_implies(
      fo_and(fo_not(fo_pred("lan", FOVar::X)), fo_not(fo_pred("lan", FOVar::Y))),
      fo_rel(FOVar::X, FOVar::Y));
  FOFormula no_in = fo_implies(fo_pred("lan", FOVar::Y),
                               fo_not(fo_rel(FOVar::X, FOVar::Y)));
  FOFormula shape = fo_forall(FOVar::X, fo_forall(FOVar::Y, fo_and(clique, no_in)));
  FOFormula out = fo_and(st(f, FOVar::X), shape);
  if (serial)
    out = fo_and(out, fo_exists(FOVar::X, fo_not(fo_pred("lan", FOVar::X))));
  return out;
}

namespace {

FOFormula not_lan_x() { return fo_not(fo_pred("lan", FOVar::X)); }

// The six clauses over counting subformulas. Callers pass a simplified
// desugared formula, so every modality has a nonzero subscript; the two
// at-most clauses fire on negated at-least modalities.
FOFormula tr_c1(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom: return fo_pred(f->name, FOVar::X);
    case Conn::True: return fo_true();
    case Conn::False: return fo_false();
    case Conn::Not: {
      const Formula& g = f->lhs;
      if (g->kind == Conn::DiaGeq && g->grade >= 1)
        return fo_count_leq(g->grade - 1, FOVar::X,
                            fo_and(not_lan_x(), tr_c1(g->lhs)));
      if (g->kind == Conn::InvDiaGeq && g->grade >= 1)
        return fo_or(fo_pred("lan", FOVar::X),
                     fo_count_leq(g->grade - 1, FOVar::X, tr_c1(g->lhs)));
      return fo_not(tr_c1(g));
    }
    case Conn::And: return fo_and(tr_c1(f->lhs), tr_c1(f->rhs));
    case Conn::Or: return fo_or(tr_c1(f->lhs), tr_c1(f->rhs));
    case Conn::Implies: return fo_implies(tr_c1(f->lhs), tr_c1(f->rhs));
    case Conn::Iff: return fo_iff(tr_c1(f->lhs), tr_c1(f->rhs));
    case Conn::DiaGeq:
      return fo_count_geq(f->grade, FOVar::X, fo_and(not_lan_x(), tr_c1(f->lhs)));
    case Conn::InvDiaGeq:
      return fo_and(not_lan_x(), fo_count_geq(f->grade, FOVar::X, tr_c1(f->lhs)));
    default: throw std::logic_error("tr_c1: formula not desugared");
  }
}

}  // namespace

FOFormula translate_k45_c1(const Formula& f, bool serial) {
  reject_lan(f);
  FOFormula out = tr_c1(simplify(desugar(f)));
  if (serial)
    out = fo_and(out, fo_exists(FOVar::X, fo_not(fo_pred("lan", FOVar::X))));
  return out;
}

// ---------------------------------------------------------------------------
// Structures and evaluation
// ---------------------------------------------------------------------------

FOStructure expand_lan(const KripkeStructure& a) {
  FOStructure s;
  s.kripke = a;
  s.preds.emplace("lan", lanterns(a));
  return s;
}

namespace {

bool pred_holds(const FOStructure& s, const std::string& name, int w) {
  auto it = s.preds.find(name);
  if (it != s.preds.end()) return it->second.test(w);
  return s.kripke.holds(name, w);
}

struct Assignment {
  std::optional<int> v[2];
  int get(FOVar var) const { return *v[static_cast<int>(var)]; }
  void set(FOVar var, int w) { v[static_cast<int>(var)] = w; }
};

bool eval(const FOStructure& s, const FOFormula& f, Assignment& asg) {
  switch (f->kind) {
    case FOKind::Pred: return pred_holds(s, f->pred, asg.get(f->a));
    case FOKind::Rel: return s.kripke.has_edge(asg.get(f->a), asg.get(f->b));
    case FOKind::Equal: return asg.get(f->a) == asg.get(f->b);
    case FOKind::True: return true;
    case FOKind::False: return false;
    case FOKind::Not: return !eval(s, f->lhs, asg);
    case FOKind::And: return eval(s, f->lhs, asg) && eval(s, f->rhs, asg);
    case FOKind::Or: return eval(s, f->lhs, asg) || eval(s, f->rhs, asg);
    case FOKind::Implies: return !eval(s, f->lhs, asg) || eval(s, f->rhs, asg);
    case FOKind::Iff: return eval(s, f->lhs, asg) == eval(s, f->rhs, asg);
    case FOKind::Forall:
    case FOKind::Exists:
    case FOKind::CountGeq:
    case FOKind::CountLeq: {
      std::optional<int> saved = asg.v[static_cast<int>(f->a)];
      std::uint64_t count = 0;
      bool result = false;
      bool decided = false;
      for (int d = 0; d < s.kripke.n && !decided; ++d) {
        asg.set(f->a, d);
        bool h = eval(s, f->lhs, asg);
        switch (f->kind) {
          case FOKind::Forall:
            if (!h) { result = false; decided = true; }
            break;
          case FOKind::Exists:
            if (h) { result = true; decided = true; }
            break;
          case FOKind::CountGeq:
            if (h && ++count >= f->n) { result = true; decided = true; }
            break;
          default:  // CountLeq
            if (h && ++count > f->n) { result = false; decided = true; }
            break;
        }
      }
      asg.v[static_cast<int>(f->a)] = saved;
      if (decided) return result;
      switch (f->kind) {
        case FOKind::Forall: return true;
        case FOKind::Exists: return false;
        case FOKind::CountGeq: return count >= f->n;  // only via n == 0
        default: return true;                         // CountLeq never exceeded
      }
    }
  }
  throw std::logic_error("fo_eval: bad node");
}

}  // namespace

bool fo_eval(const FOStructure& s, const FOFormula& f, std::optional<int> x,
             std::optional<int> y) {
  unsigned free = fo_free_vars(f);
  if ((free & 1u) && !x) throw std::invalid_argument("free variable x unassigned");
  if ((free & 2u) && !y) throw std::invalid_argument("free variable y unassigned");
  auto check = [&](const std::optional<int>& w, const char* which) {
    if (w && (*w < 0 || *w >= s.kripke.n))
      throw std::out_of_range(std::string("assignment for ") + which +
                              " outside the domain");
  };
  check(x, "x");
  check(y, "y");
  Assignment asg;
  asg.v[0] = x;
  asg.v[1] = y;
  return eval(s, f, asg);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

void render_native(const FOFormula& f, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    render_native(f->lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    render_native(f->rhs, out);
    out += ')';
  };
  switch (f->kind) {
    case FOKind::Pred:
      out += f->pred;
      out += '(';
      out += var_name(f->a);
      out += ')';
      break;
    case FOKind::Rel:
      out += "R(";
      out += var_name(f->a);
      out += ',';
      out += var_name(f->b);
      out += ')';
      break;
    case FOKind::Equal:
      out += var_name(f->a);
      out += " = ";
      out += var_name(f->b);
      break;
    case FOKind::True: out += "true"; break;
    case FOKind::False: out += "false"; break;
    case FOKind::Not:
      out += '~';
      render_native(f->lhs, out);
      break;
    case FOKind::And: binary("&"); break;
    case FOKind::Or: binary("|"); break;
    case FOKind::Implies: binary("->"); break;
    case FOKind::Iff: binary("<->"); break;
    case FOKind::Forall:
      out += "A ";
      out += var_name(f->a);
      out += ". ";
      render_native(f->lhs, out);
      break;
    case FOKind::Exists:
      out += "E ";
      out += var_name(f->a);
      out += ". ";
      render_native(f->lhs, out);
      break;
    case FOKind::CountGeq:
    case FOKind::CountLeq:
      out += f->kind == FOKind::CountGeq ? "E>=" : "E<=";
      out += std::to_string(f->n);
      out += ' ';
      out += var_name(f->a);
      out += ". ";
      render_native(f->lhs, out);
      break;
  }
}

// SMT-LIB-flavoured export over a single sort W: counting quantifiers become
// blocks of pairwise-distinct witnesses. Export only; nothing parses it back.
void render_smt(const FOFormula& f, std::string names[2], int& counter,
                std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    out += op;
    out += ' ';
    render_smt(f->lhs, names, counter, out);
    out += ' ';
    render_smt(f->rhs, names, counter, out);
    out += ')';
  };
  auto quant = [&](const char* op) {
    std::string fresh = "w" + std::to_string(counter++);
    std::string saved = names[static_cast<int>(f->a)];
    names[static_cast<int>(f->a)] = fresh;
    out += '(';
    out += op;
    out += " ((";
    out += fresh;
    out += " W)) ";
    render_smt(f->lhs, names, counter, out);
    out += ')';
    names[static_cast<int>(f->a)] = saved;
  };
  switch (f->kind) {
    case FOKind::Pred:
      out += '(' + f->pred + ' ' + names[static_cast<int>(f->a)] + ')';
      break;
    case FOKind::Rel:
      out += "(R " + names[static_cast<int>(f->a)] + ' ' +
             names[static_cast<int>(f->b)] + ')';
      break;
    case FOKind::Equal:
      out += "(= " + names[static_cast<int>(f->a)] + ' ' +
             names[static_cast<int>(f->b)] + ')';
      break;
    case FOKind::True: out += "true"; break;
    case FOKind::False: out += "false"; break;
    case FOKind::Not:
      out += "(not ";
      render_smt(f->lhs, names, counter, out);
      out += ')';
      break;
    case FOKind::And: binary("and"); break;
    case FOKind::Or: binary("or"); break;
    case FOKind::Implies: binary("=>"); break;
    case FOKind::Iff: binary("="); break;
    case FOKind::Forall: quant("forall"); break;
    case FOKind::Exists: quant("exists"); break;
    case FOKind::CountGeq: {
      if (f->n == 0) {
        out += "true";
        break;
      }
      std::vector<std::string> fresh;
      for (std::uint64_t i = 0; i < f->n; ++i)
        fresh.push_back("w" + std::to_string(counter++));
      out += "(exists (";
      for (const auto& w : fresh) out += '(' + w + " W)";
      out += ") (and";
      if (fresh.size() > 1) {
        out += " (distinct";
        for (const auto& w : fresh) out += ' ' + w;
        out += ')';
      }
      std::string saved = names[static_cast<int>(f->a)];
      for (const auto& w : fresh) {
        names[static_cast<int>(f->a)] = w;
        out += ' ';
        render_smt(f->lhs, names, counter, out);
      }
      names[static_cast<int>(f->a)] = saved;
      out += "))";
      break;
    }
    case FOKind::CountLeq: {
      out += "(not ";
      render_smt(fo_count_geq(f->n + 1, f->a, f->lhs), names, counter, out);
      out += ')';
      break;
    }
  }
}

}  // namespace

std::string serialize_fo(const FOFormula& f, FODialect dialect) {
  std::string out;
  if (dialect == FODialect::Native) {
    render_native(f, out);
  } else {
    std::string names[2] = {"x", "y"};
    int counter = 0;
    render_smt(f, names, counter, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Native-dialect parser
// ---------------------------------------------------------------------------

namespace {

enum class FTok { LParen, RParen, Not, And, Or, Arrow, Iff, Geq, Leq, Eq, Dot, Comma, Ident, Num, End };

struct FToken {
  FTok kind;
  std::string text;
  std::uint64_t num = 0;
  int line = 1;
  int col = 1;
};

class FLexer {
 public:
  explicit FLexer(const std::string& s) : s_(s) { advance(); }
  const FToken& peek() const { return tok_; }
  FToken take() {
    FToken t = tok_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) {
    throw ParseError(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(col),
                     line, col);
  }

  void advance() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= s_.size()) {
      tok_.kind = FTok::End;
      tok_.text = "<end of input>";
      return;
    }
    char c = s_[pos_];
    auto one = [&](FTok k, const char* t) {
      tok_.kind = k;
      tok_.text = t;
      ++pos_;
      ++col_;
    };
    switch (c) {
      case '(': one(FTok::LParen, "("); return;
      case ')': one(FTok::RParen, ")"); return;
      case '~': one(FTok::Not, "~"); return;
      case '&': one(FTok::And, "&"); return;
      case '|': one(FTok::Or, "|"); return;
      case '.': one(FTok::Dot, "."); return;
      case ',': one(FTok::Comma, ","); return;
      case '=': one(FTok::Eq, "="); return;
      case '-':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
          tok_.kind = FTok::Arrow;
          tok_.text = "->";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '->'", line_, col_);
      case '<':
        if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '-' && s_[pos_ + 2] == '>') {
          tok_.kind = FTok::Iff;
          tok_.text = "<->";
          pos_ += 3;
          col_ += 3;
          return;
        }
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
          tok_.kind = FTok::Leq;
          tok_.text = "<=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '<->' or '<='", line_, col_);
      case '>':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
          tok_.kind = FTok::Geq;
          tok_.text = ">=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '>='", line_, col_);
      default: break;
    }
    if (c >= '0' && c <= '9') {
      std::uint64_t v = 0;
      int start = col_;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
        std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
        if (v > (UINT64_MAX - d) / 10) fail("count literal overflows 64 bits", line_, start);
        v = v * 10 + d;
        ++pos_;
        ++col_;
      }
      tok_.kind = FTok::Num;
      tok_.num = v;
      tok_.text = std::to_string(v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
        id += s_[pos_];
        ++pos_;
        ++col_;
      }
      tok_.kind = FTok::Ident;
      tok_.text = id;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  FToken tok_;
};

class FParser {
 public:
  explicit FParser(const std::string& s) : lex_(s) {}

  FOFormula parse() {
    FOFormula f = parse_iff();
    const FToken& t = lex_.peek();
    if (t.kind != FTok::End)
      throw ParseError("unexpected '" + t.text + "' at line " + std::to_string(t.line) +
                           ", column " + std::to_string(t.col),
                       t.line, t.col);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const FToken& t = lex_.peek();
    throw ParseError(msg + ", got '" + t.text + "' at line " + std::to_string(t.line) +
                         ", column " + std::to_string(t.col),
                     t.line, t.col);
  }

  FOFormula parse_iff() {
    FOFormula f = parse_impl();
    while (lex_.peek().kind == FTok::Iff) {
      lex_.take();
      f = fo_iff(f, parse_impl());
    }
    return f;
  }

  FOFormula parse_impl() {
    FOFormula f = parse_or();
    if (lex_.peek().kind == FTok::Arrow) {
      lex_.take();
      return fo_implies(f, parse_impl());
    }
    return f;
  }

  FOFormula parse_or() {
    FOFormula f = parse_and();
    while (lex_.peek().kind == FTok::Or) {
      lex_.take();
      f = fo_or(f, parse_and());
    }
    return f;
  }

  FOFormula parse_and() {
    FOFormula f = parse_unary();
    while (lex_.peek().kind == FTok::And) {
      lex_.take();
      f = fo_and(f, parse_unary());
    }
    return f;
  }

  FOVar parse_var() {
    if (lex_.peek().kind != FTok::Ident) fail("expected a variable");
    FToken t = lex_.take();
    if (t.text == "x") return FOVar::X;
    if (t.text == "y") return FOVar::Y;
    throw ParseError("variables are named x and y, got '" + t.text + "' at line " +
                         std::to_string(t.line) + ", column " + std::to_string(t.col),
                     t.line, t.col);
  }

  void expect_dot() {
    if (lex_.peek().kind != FTok::Dot) fail("expected '.' after the bound variable");
    lex_.take();
  }

  FOFormula parse_unary() {
    const FToken& t = lex_.peek();
    if (t.kind == FTok::Not) {
      lex_.take();
      return fo_not(parse_unary());
    }
    if (t.kind == FTok::Ident && t.text == "A") {
      lex_.take();
      FOVar v = parse_var();
      expect_dot();
      return fo_forall(v, parse_unary());
    }
    if (t.kind == FTok::Ident && t.text == "E") {
      lex_.take();
      if (lex_.peek().kind == FTok::Geq || lex_.peek().kind == FTok::Leq) {
        bool geq = lex_.take().kind == FTok::Geq;
        if (lex_.peek().kind != FTok::Num) fail("expected a count");
        std::uint64_t n = lex_.take().num;
        FOVar v = parse_var();
        expect_dot();
        FOFormula body = parse_unary();
        return geq ? fo_count_geq(n, v, body) : fo_count_leq(n, v, body);
      }
      FOVar v = parse_var();
      expect_dot();
      return fo_exists(v, parse_unary());
    }
    return parse_primary();
  }

  FOFormula parse_primary() {
    const FToken& t = lex_.peek();
    if (t.kind == FTok::LParen) {
      lex_.take();
      FOFormula f = parse_iff();
      if (lex_.peek().kind != FTok::RParen) fail("expected ')'");
      lex_.take();
      return f;
    }
    if (t.kind == FTok::Ident) {
      if (t.text == "true") {
        lex_.take();
        return fo_true();
      }
      if (t.text == "false") {
        lex_.take();
        return fo_false();
      }
      FToken name = lex_.take();
      if ((name.text == "x" || name.text == "y") && lex_.peek().kind == FTok::Eq) {
        lex_.take();
        FOVar a = name.text == "x" ? FOVar::X : FOVar::Y;
        return fo_equal(a, parse_var());
      }
      if (lex_.peek().kind != FTok::LParen) fail("expected '(' after predicate name");
      lex_.take();
      FOVar a = parse_var();
      if (lex_.peek().kind == FTok::Comma) {
        lex_.take();
        FOVar b = parse_var();
        if (lex_.peek().kind != FTok::RParen) fail("expected ')'");
        lex_.take();
        if (name.text != "R")
          throw ParseError("the only binary predicate is R, got '" + name.text +
                               "' at line " + std::to_string(name.line) + ", column " +
                               std::to_string(name.col),
                           name.line, name.col);
        return fo_rel(a, b);
      }
      if (lex_.peek().kind != FTok::RParen) fail("expected ')'");
      lex_.take();
      return fo_pred(name.text, a);
    }
    fail("expected a formula");
  }

  FLexer lex_;
};

}  // namespace

FOFormula parse_fo(const std::string& text) { return FParser(text).parse(); }

}  // namespace gml
