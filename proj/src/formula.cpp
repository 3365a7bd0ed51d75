#include "gml/formula.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <tuple>

#include "gml/table.hpp"

namespace gml {

namespace {

Formula make(Conn kind, std::string name, std::uint64_t grade, Formula lhs,
             Formula rhs) {
  auto n = std::make_shared<FormulaNode>();
  n->kind = kind;
  n->name = std::move(name);
  n->grade = grade;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

}  // namespace

Formula atom(const std::string& name) { return make(Conn::Atom, name, 0, nullptr, nullptr); }
Formula truth() { return make(Conn::True, "", 0, nullptr, nullptr); }
Formula falsity() { return make(Conn::False, "", 0, nullptr, nullptr); }
Formula lnot(Formula f) { return make(Conn::Not, "", 0, std::move(f), nullptr); }
Formula land(Formula a, Formula b) { return make(Conn::And, "", 0, std::move(a), std::move(b)); }
Formula lor(Formula a, Formula b) { return make(Conn::Or, "", 0, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return make(Conn::Implies, "", 0, std::move(a), std::move(b)); }
Formula iff(Formula a, Formula b) { return make(Conn::Iff, "", 0, std::move(a), std::move(b)); }
Formula dia(Formula f) { return make(Conn::Dia, "", 0, std::move(f), nullptr); }
Formula box(Formula f) { return make(Conn::Box, "", 0, std::move(f), nullptr); }
Formula inv_dia(Formula f) { return make(Conn::InvDia, "", 0, std::move(f), nullptr); }
Formula inv_box(Formula f) { return make(Conn::InvBox, "", 0, std::move(f), nullptr); }
Formula dia_geq(std::uint64_t n, Formula f) { return make(Conn::DiaGeq, "", n, std::move(f), nullptr); }
Formula dia_leq(std::uint64_t n, Formula f) { return make(Conn::DiaLeq, "", n, std::move(f), nullptr); }
Formula inv_dia_geq(std::uint64_t n, Formula f) { return make(Conn::InvDiaGeq, "", n, std::move(f), nullptr); }
Formula inv_dia_leq(std::uint64_t n, Formula f) { return make(Conn::InvDiaLeq, "", n, std::move(f), nullptr); }

Formula conj(const std::vector<Formula>& fs) {
  if (fs.empty()) return truth();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = land(acc, fs[i]);
  return acc;
}

Formula disj(const std::vector<Formula>& fs) {
  if (fs.empty()) return falsity();
  Formula acc = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) acc = lor(acc, fs[i]);
  return acc;
}

bool equal(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->grade != b->grade || a->name != b->name) return false;
  if (!equal(a->lhs, b->lhs)) return false;
  return equal(a->rhs, b->rhs);
}

// ---------------------------------------------------------------------------
// Lexer / parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok { LParen, RParen, Not, And, Or, Arrow, Iff, Geq, Leq, Ident, Num, End };

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t num = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
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
      tok_.kind = Tok::End;
      tok_.text = "<end of input>";
      return;
    }
    char c = s_[pos_];
    auto one = [&](Tok k, const char* t) {
      tok_.kind = k;
      tok_.text = t;
      ++pos_;
      ++col_;
    };
    switch (c) {
      case '(': one(Tok::LParen, "("); return;
      case ')': one(Tok::RParen, ")"); return;
      case '~': one(Tok::Not, "~"); return;
      case '&': one(Tok::And, "&"); return;
      case '|': one(Tok::Or, "|"); return;
      case '-':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
          tok_.kind = Tok::Arrow;
          tok_.text = "->";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '->'", line_, col_);
      case '<':
        if (pos_ + 2 < s_.size() && s_[pos_ + 1] == '-' && s_[pos_ + 2] == '>') {
          tok_.kind = Tok::Iff;
          tok_.text = "<->";
          pos_ += 3;
          col_ += 3;
          return;
        }
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
          tok_.kind = Tok::Leq;
          tok_.text = "<=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '<->' or '<='", line_, col_);
      case '>':
        if (pos_ + 1 < s_.size() && s_[pos_ + 1] == '=') {
          tok_.kind = Tok::Geq;
          tok_.text = ">=";
          pos_ += 2;
          col_ += 2;
          return;
        }
        fail("expected '>='", line_, col_);
      default:
        break;
    }
    if (c >= '0' && c <= '9') {
      std::uint64_t v = 0;
      int start = col_;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') {
        std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
        if (v > (UINT64_MAX - d) / 10) fail("grade literal overflows 64 bits", line_, start);
        v = v * 10 + d;
        ++pos_;
        ++col_;
      }
      tok_.kind = Tok::Num;
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
      tok_.kind = Tok::Ident;
      tok_.text = id;
      return;
    }
    fail(std::string("unexpected character '") + c + "'", line_, col_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  Formula parse() {
    Formula f = parse_iff();
    const Token& t = lex_.peek();
    if (t.kind != Tok::End)
      throw ParseError("unexpected '" + t.text + "' at line " + std::to_string(t.line) +
                           ", column " + std::to_string(t.col),
                       t.line, t.col);
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = lex_.peek();
    throw ParseError(msg + ", got '" + t.text + "' at line " + std::to_string(t.line) +
                         ", column " + std::to_string(t.col),
                     t.line, t.col);
  }

  Formula parse_iff() {
    Formula f = parse_impl();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      f = iff(f, parse_impl());
    }
    return f;
  }

  Formula parse_impl() {
    Formula f = parse_or();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.take();
      return implies(f, parse_impl());  // right-associative
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      f = lor(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      f = land(f, parse_unary());
    }
    return f;
  }

  std::uint64_t parse_grade() {
    if (lex_.peek().kind != Tok::Num) fail("expected a grade");
    return lex_.take().num;
  }

  Formula parse_unary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::Not) {
      lex_.take();
      return lnot(parse_unary());
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "dia" || t.text == "idia") {
        bool inverse = t.text == "idia";
        lex_.take();
        if (lex_.peek().kind == Tok::Geq) {
          lex_.take();
          std::uint64_t n = parse_grade();
          Formula body = parse_unary();
          return inverse ? inv_dia_geq(n, body) : dia_geq(n, body);
        }
        if (lex_.peek().kind == Tok::Leq) {
          lex_.take();
          std::uint64_t n = parse_grade();
          Formula body = parse_unary();
          return inverse ? inv_dia_leq(n, body) : dia_leq(n, body);
        }
        Formula body = parse_unary();
        return inverse ? inv_dia(body) : dia(body);
      }
      if (t.text == "box" || t.text == "ibox") {
        bool inverse = t.text == "ibox";
        lex_.take();
        Formula body = parse_unary();
        return inverse ? inv_box(body) : box(body);
      }
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.take();
      Formula f = parse_iff();
      if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
      lex_.take();
      return f;
    }
    if (t.kind == Tok::Ident) {
      if (t.text == "true") {
        lex_.take();
        return truth();
      }
      if (t.text == "false") {
        lex_.take();
        return falsity();
      }
      std::string name = lex_.take().text;
      return atom(name);
    }
    fail("expected a formula");
  }

  Lexer lex_;
};

}  // namespace

Formula parse_formula(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// Binary nodes are always parenthesized, so output is unambiguous without
// precedence bookkeeping and unary arguments never need extra parentheses.
void render_to(const Formula& f, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    render_to(f->lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    render_to(f->rhs, out);
    out += ')';
  };
  auto graded = [&](const char* op) {
    out += op;
    out += std::to_string(f->grade);
    out += ' ';
    render_to(f->lhs, out);
  };
  switch (f->kind) {
    case Conn::Atom: out += f->name; break;
    case Conn::True: out += "true"; break;
    case Conn::False: out += "false"; break;
    case Conn::Not:
      out += '~';
      render_to(f->lhs, out);
      break;
    case Conn::Dia:
      out += "dia ";
      render_to(f->lhs, out);
      break;
    case Conn::Box:
      out += "box ";
      render_to(f->lhs, out);
      break;
    case Conn::InvDia:
      out += "idia ";
      render_to(f->lhs, out);
      break;
    case Conn::InvBox:
      out += "ibox ";
      render_to(f->lhs, out);
      break;
    case Conn::DiaGeq: graded("dia>="); break;
    case Conn::DiaLeq: graded("dia<="); break;
    case Conn::InvDiaGeq: graded("idia>="); break;
    case Conn::InvDiaLeq: graded("idia<="); break;
    case Conn::And: binary("&"); break;
    case Conn::Or: binary("|"); break;
    case Conn::Implies: binary("->"); break;
    case Conn::Iff: binary("<->"); break;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_to(f, out);
  return out;
}

// ---------------------------------------------------------------------------
// Transformations
// ---------------------------------------------------------------------------

namespace {

std::uint64_t checked_inc(std::uint64_t n) {
  if (n == UINT64_MAX) throw std::overflow_error("grade overflows 64 bits after <= expansion");
  return n + 1;
}

}  // namespace

Formula desugar(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not: return lnot(desugar(f->lhs));
    case Conn::And: return land(desugar(f->lhs), desugar(f->rhs));
    case Conn::Or: return lor(desugar(f->lhs), desugar(f->rhs));
    case Conn::Implies: return implies(desugar(f->lhs), desugar(f->rhs));
    case Conn::Iff: return iff(desugar(f->lhs), desugar(f->rhs));
    case Conn::DiaGeq: return dia_geq(f->grade, desugar(f->lhs));
    case Conn::InvDiaGeq: return inv_dia_geq(f->grade, desugar(f->lhs));
    case Conn::Dia: return dia_geq(1, desugar(f->lhs));
    case Conn::InvDia: return inv_dia_geq(1, desugar(f->lhs));
    case Conn::Box: return lnot(dia_geq(1, lnot(desugar(f->lhs))));
    case Conn::InvBox: return lnot(inv_dia_geq(1, lnot(desugar(f->lhs))));
    case Conn::DiaLeq: return lnot(dia_geq(checked_inc(f->grade), desugar(f->lhs)));
    case Conn::InvDiaLeq: return lnot(inv_dia_geq(checked_inc(f->grade), desugar(f->lhs)));
  }
  throw std::logic_error("desugar: bad connective");
}

Formula simplify(const Formula& f) {
  auto is_true = [](const Formula& g) { return g->kind == Conn::True; };
  auto is_false = [](const Formula& g) { return g->kind == Conn::False; };
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return f;
    case Conn::Not: {
      Formula a = simplify(f->lhs);
      if (a->kind == Conn::Not) return a->lhs;
      if (is_true(a)) return falsity();
      if (is_false(a)) return truth();
      return lnot(a);
    }
    case Conn::And: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_false(a) || is_false(b)) return falsity();
      if (is_true(a)) return b;
      if (is_true(b)) return a;
      return land(a, b);
    }
    case Conn::Or: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_true(a) || is_true(b)) return truth();
      if (is_false(a)) return b;
      if (is_false(b)) return a;
      return lor(a, b);
    }
    case Conn::Implies: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_false(a) || is_true(b)) return truth();
      if (is_true(a)) return b;
      if (is_false(b)) return simplify(lnot(a));
      return implies(a, b);
    }
    case Conn::Iff: {
      Formula a = simplify(f->lhs), b = simplify(f->rhs);
      if (is_true(a)) return b;
      if (is_true(b)) return a;
      if (is_false(a)) return simplify(lnot(b));
      if (is_false(b)) return simplify(lnot(a));
      return iff(a, b);
    }
    case Conn::DiaGeq: {
      if (f->grade == 0) return truth();
      Formula a = simplify(f->lhs);
      if (is_false(a)) return falsity();
      return dia_geq(f->grade, a);
    }
    case Conn::InvDiaGeq: {
      if (f->grade == 0) return truth();
      Formula a = simplify(f->lhs);
      if (is_false(a)) return falsity();
      return inv_dia_geq(f->grade, a);
    }
    case Conn::Dia: {
      Formula a = simplify(f->lhs);
      if (is_false(a)) return falsity();
      return dia(a);
    }
    case Conn::InvDia: {
      Formula a = simplify(f->lhs);
      if (is_false(a)) return falsity();
      return inv_dia(a);
    }
    case Conn::Box: {
      Formula a = simplify(f->lhs);
      if (is_true(a)) return truth();
      return box(a);
    }
    case Conn::InvBox: {
      Formula a = simplify(f->lhs);
      if (is_true(a)) return truth();
      return inv_box(a);
    }
    case Conn::DiaLeq: {
      Formula a = simplify(f->lhs);
      if (is_false(a)) return truth();
      return dia_leq(f->grade, a);
    }
    case Conn::InvDiaLeq: {
      Formula a = simplify(f->lhs);
      if (is_false(a)) return truth();
      return inv_dia_leq(f->grade, a);
    }
  }
  throw std::logic_error("simplify: bad connective");
}

bool is_desugared(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return true;
    case Conn::Not: return is_desugared(f->lhs);
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: return is_desugared(f->lhs) && is_desugared(f->rhs);
    case Conn::DiaGeq:
    case Conn::InvDiaGeq: return is_desugared(f->lhs);
    default: return false;
  }
}

bool is_propositional(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return true;
    case Conn::Not: return is_propositional(f->lhs);
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: return is_propositional(f->lhs) && is_propositional(f->rhs);
    default: return false;
  }
}

namespace {

std::uint64_t grade_bits(std::uint64_t n) {
  if (n <= 1) return 1;
  return static_cast<std::uint64_t>(std::bit_width(n));
}

}  // namespace

std::uint64_t formula_length(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return 1;
    case Conn::Not:
    case Conn::Dia:
    case Conn::Box:
    case Conn::InvDia:
    case Conn::InvBox: return 1 + formula_length(f->lhs);
    case Conn::DiaGeq:
    case Conn::DiaLeq:
    case Conn::InvDiaGeq:
    case Conn::InvDiaLeq: return 1 + grade_bits(f->grade) + formula_length(f->lhs);
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: return 1 + formula_length(f->lhs) + formula_length(f->rhs);
  }
  throw std::logic_error("formula_length: bad connective");
}

std::uint64_t node_count(const Formula& f) {
  if (!f) return 0;
  return 1 + node_count(f->lhs) + node_count(f->rhs);
}

std::uint64_t modal_depth(const Formula& f) {
  switch (f->kind) {
    case Conn::Atom:
    case Conn::True:
    case Conn::False: return 0;
    case Conn::Not: return modal_depth(f->lhs);
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: return std::max(modal_depth(f->lhs), modal_depth(f->rhs));
    default: return 1 + modal_depth(f->lhs);
  }
}

std::uint64_t max_grade(const Formula& f) {
  if (!f) return 0;
  std::uint64_t g = std::max(max_grade(f->lhs), max_grade(f->rhs));
  switch (f->kind) {
    case Conn::Dia:
    case Conn::Box:
    case Conn::InvDia:
    case Conn::InvBox: return std::max<std::uint64_t>(g, 1);
    case Conn::DiaGeq:
    case Conn::InvDiaGeq: return std::max(g, f->grade);
    case Conn::DiaLeq:
    case Conn::InvDiaLeq: return std::max(g, checked_inc(f->grade));
    default: return g;
  }
}

// ---------------------------------------------------------------------------
// Subformula table
// ---------------------------------------------------------------------------

namespace {

using Key = std::tuple<Conn, std::string, std::uint64_t, int, int>;

int intern(const Formula& f, std::map<Key, int>& ids, FormulaTable& t) {
  int l = f->lhs ? intern(f->lhs, ids, t) : -1;
  int r = f->rhs ? intern(f->rhs, ids, t) : -1;
  Key k{f->kind, f->name, f->grade, l, r};
  auto it = ids.find(k);
  if (it != ids.end()) return it->second;
  int id = static_cast<int>(t.entries.size());
  t.entries.push_back(TableEntry{f->kind, f->name, f->grade, l, r});
  ids.emplace(k, id);
  return id;
}

}  // namespace

FormulaTable build_table(const Formula& f) {
  FormulaTable t;
  std::map<Key, int> ids;
  t.root = intern(f, ids, t);
  return t;
}

Formula table_formula(const FormulaTable& t, int idx) {
  std::vector<Formula> built(t.entries.size());
  for (std::size_t i = 0; i <= static_cast<std::size_t>(idx); ++i) {
    const TableEntry& e = t.entries[i];
    Formula l = e.lhs >= 0 ? built[e.lhs] : nullptr;
    Formula r = e.rhs >= 0 ? built[e.rhs] : nullptr;
    auto n = std::make_shared<FormulaNode>();
    n->kind = e.kind;
    n->name = e.name;
    n->grade = e.grade;
    n->lhs = l;
    n->rhs = r;
    built[i] = n;
  }
  return built[idx];
}

std::vector<Formula> subformulas(const Formula& f) {
  FormulaTable t = build_table(f);
  std::vector<Formula> out;
  out.reserve(t.entries.size());
  for (std::size_t i = 0; i < t.entries.size(); ++i) out.push_back(table_formula(t, static_cast<int>(i)));
  return out;
}

namespace {

void collect_variables(const Formula& f, std::set<std::string>& out) {
  if (!f) return;
  if (f->kind == Conn::Atom) out.insert(f->name);
  collect_variables(f->lhs, out);
  collect_variables(f->rhs, out);
}

}  // namespace

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_variables(f, out);
  return out;
}

std::string fresh_variable(const std::set<std::string>& used, const std::string& base) {
  if (!used.count(base)) return base;
  for (std::uint64_t i = 0;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!used.count(cand)) return cand;
  }
}

}  // namespace gml
