// ============================================================================
//  formula.cpp -- parser, printer, desugaring and analyses for STCTL formulas
// ============================================================================

#include "stctl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace stctl {

// ---------------------------------------------------------------------------
//  Constructors
// ---------------------------------------------------------------------------

namespace {

StatePtr mk_state(StateFormula f) {
  return std::make_shared<const StateFormula>(std::move(f));
}
PathPtr mk_path(PathFormula f) {
  return std::make_shared<const PathFormula>(std::move(f));
}

}  // namespace

StatePtr mk_true() { return mk_state({StateFormula::Kind::True}); }
StatePtr mk_false() { return mk_state({StateFormula::Kind::False}); }

StatePtr mk_prop(std::string name) {
  StateFormula f{StateFormula::Kind::Prop};
  f.prop = std::move(name);
  return mk_state(std::move(f));
}

StatePtr mk_not(StatePtr x) {
  StateFormula f{StateFormula::Kind::Not};
  f.lhs = std::move(x);
  return mk_state(std::move(f));
}

StatePtr mk_and(StatePtr a, StatePtr b) {
  StateFormula f{StateFormula::Kind::And};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return mk_state(std::move(f));
}

StatePtr mk_or(StatePtr a, StatePtr b) {
  StateFormula f{StateFormula::Kind::Or};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return mk_state(std::move(f));
}

StatePtr mk_implies(StatePtr a, StatePtr b) {
  StateFormula f{StateFormula::Kind::Implies};
  f.lhs = std::move(a);
  f.rhs = std::move(b);
  return mk_state(std::move(f));
}

StatePtr mk_coalition(std::vector<std::string> agents, PathPtr g) {
  std::sort(agents.begin(), agents.end());
  agents.erase(std::unique(agents.begin(), agents.end()), agents.end());
  StateFormula f{StateFormula::Kind::Coalition};
  f.agents = std::move(agents);
  f.path = std::move(g);
  return mk_state(std::move(f));
}

PathPtr mk_lift(StatePtr f) {
  PathFormula g{PathFormula::Kind::Lift};
  g.state = std::move(f);
  return mk_path(std::move(g));
}

// Boolean structure over lifted state formulas is normalized back to the
// state level, so "!p" is Lift(Not p), never PathNot(Lift p).
PathPtr mk_pnot(PathPtr x) {
  if (x->kind == PathFormula::Kind::Lift) return mk_lift(mk_not(x->state));
  PathFormula g{PathFormula::Kind::Not};
  g.lhs = std::move(x);
  return mk_path(std::move(g));
}

PathPtr mk_pand(PathPtr a, PathPtr b) {
  if (a->kind == PathFormula::Kind::Lift && b->kind == PathFormula::Kind::Lift)
    return mk_lift(mk_and(a->state, b->state));
  PathFormula g{PathFormula::Kind::And};
  g.lhs = std::move(a);
  g.rhs = std::move(b);
  return mk_path(std::move(g));
}

PathPtr mk_por(PathPtr a, PathPtr b) {
  if (a->kind == PathFormula::Kind::Lift && b->kind == PathFormula::Kind::Lift)
    return mk_lift(mk_or(a->state, b->state));
  PathFormula g{PathFormula::Kind::Or};
  g.lhs = std::move(a);
  g.rhs = std::move(b);
  return mk_path(std::move(g));
}

namespace {
PathPtr mk_unary_path(PathFormula::Kind k, PathPtr x) {
  PathFormula g{k};
  g.lhs = std::move(x);
  return mk_path(std::move(g));
}
PathPtr mk_binary_path(PathFormula::Kind k, PathPtr a, Interval iv, PathPtr b) {
  PathFormula g{k};
  g.lhs = std::move(a);
  g.rhs = std::move(b);
  g.interval = iv;
  return mk_path(std::move(g));
}
PathPtr mk_timed_unary(PathFormula::Kind k, Interval iv, PathPtr x) {
  PathFormula g{k};
  g.lhs = std::move(x);
  g.interval = iv;
  return mk_path(std::move(g));
}
}  // namespace

PathPtr mk_all_next(PathPtr g) {
  return mk_unary_path(PathFormula::Kind::AllNext, std::move(g));
}
PathPtr mk_ex_next(PathPtr g) {
  return mk_unary_path(PathFormula::Kind::ExNext, std::move(g));
}
PathPtr mk_all_until(PathPtr a, Interval iv, PathPtr b) {
  return mk_binary_path(PathFormula::Kind::AllUntil, std::move(a), iv, std::move(b));
}
PathPtr mk_ex_until(PathPtr a, Interval iv, PathPtr b) {
  return mk_binary_path(PathFormula::Kind::ExUntil, std::move(a), iv, std::move(b));
}
PathPtr mk_all_release(PathPtr a, Interval iv, PathPtr b) {
  return mk_binary_path(PathFormula::Kind::AllRelease, std::move(a), iv, std::move(b));
}
PathPtr mk_ex_release(PathPtr a, Interval iv, PathPtr b) {
  return mk_binary_path(PathFormula::Kind::ExRelease, std::move(a), iv, std::move(b));
}
PathPtr mk_all_finally(Interval iv, PathPtr g) {
  return mk_timed_unary(PathFormula::Kind::AllFinally, iv, std::move(g));
}
PathPtr mk_ex_finally(Interval iv, PathPtr g) {
  return mk_timed_unary(PathFormula::Kind::ExFinally, iv, std::move(g));
}
PathPtr mk_all_globally(Interval iv, PathPtr g) {
  return mk_timed_unary(PathFormula::Kind::AllGlobally, iv, std::move(g));
}
PathPtr mk_ex_globally(Interval iv, PathPtr g) {
  return mk_timed_unary(PathFormula::Kind::ExGlobally, iv, std::move(g));
}

// ---------------------------------------------------------------------------
//  Structural equality
// ---------------------------------------------------------------------------

bool equal(const StatePtr& a, const StatePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case StateFormula::Kind::True:
    case StateFormula::Kind::False:
      return true;
    case StateFormula::Kind::Prop:
      return a->prop == b->prop;
    case StateFormula::Kind::Not:
      return equal(a->lhs, b->lhs);
    case StateFormula::Kind::And:
    case StateFormula::Kind::Or:
    case StateFormula::Kind::Implies:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case StateFormula::Kind::Coalition:
      return a->agents == b->agents && equal(a->path, b->path);
  }
  return false;
}

bool equal(const PathPtr& a, const PathPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case PathFormula::Kind::Lift:
      return equal(a->state, b->state);
    case PathFormula::Kind::Not:
      return equal(a->lhs, b->lhs);
    case PathFormula::Kind::And:
    case PathFormula::Kind::Or:
      return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    case PathFormula::Kind::AllNext:
    case PathFormula::Kind::ExNext:
      return equal(a->lhs, b->lhs);
    case PathFormula::Kind::AllFinally:
    case PathFormula::Kind::ExFinally:
    case PathFormula::Kind::AllGlobally:
    case PathFormula::Kind::ExGlobally:
      return a->interval == b->interval && equal(a->lhs, b->lhs);
    case PathFormula::Kind::AllUntil:
    case PathFormula::Kind::ExUntil:
    case PathFormula::Kind::AllRelease:
    case PathFormula::Kind::ExRelease:
      return a->interval == b->interval && equal(a->lhs, b->lhs) &&
             equal(a->rhs, b->rhs);
  }
  return false;
}

// ---------------------------------------------------------------------------
//  Lexer
// ---------------------------------------------------------------------------

FormulaError::FormulaError(std::string msg, int line, int column)
    : std::runtime_error("formula:" + std::to_string(line) + ":" +
                         std::to_string(column) + ": " + msg),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  End, LParen, RParen, LBrack, RBrack, Comma, Bang, Amp, Pipe, Arrow,
  CoalOpen, CoalClose, Ident, Nat,
  KwTrue, KwFalse, KwInf, KwA, KwE, KwX, KwF, KwG, KwU, KwR
};

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t value = 0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto err = [&](const std::string& m) { throw FormulaError(m, line, col); };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') { ++line; col = 1; ++i; continue; }
    if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
    Token t;
    t.line = line;
    t.column = col;
    auto push1 = [&](Tok k) { t.kind = k; out.push_back(t); ++i; ++col; };
    switch (c) {
      case '(': push1(Tok::LParen); continue;
      case ')': push1(Tok::RParen); continue;
      case '[': push1(Tok::LBrack); continue;
      case ']': push1(Tok::RBrack); continue;
      case ',': push1(Tok::Comma); continue;
      case '!': push1(Tok::Bang); continue;
      case '&': push1(Tok::Amp); continue;
      case '|': push1(Tok::Pipe); continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          t.kind = Tok::Arrow;
          out.push_back(t);
          i += 2; col += 2;
          continue;
        }
        err("unexpected '-'");
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '<') {
          t.kind = Tok::CoalOpen;
          out.push_back(t);
          i += 2; col += 2;
          continue;
        }
        err("unexpected '<'");
      case '>':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          t.kind = Tok::CoalClose;
          out.push_back(t);
          i += 2; col += 2;
          continue;
        }
        err("unexpected '>'");
      default:
        break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      std::uint64_t v = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[j] - '0');
        if (v > 0xFFFFFFFEull) err("interval bound too large");
        ++j;
      }
      t.kind = Tok::Nat;
      t.value = v;
      t.text = text.substr(i, j - i);
      out.push_back(t);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      std::string w = text.substr(i, j - i);
      if (w == "true") t.kind = Tok::KwTrue;
      else if (w == "false") t.kind = Tok::KwFalse;
      else if (w == "inf") t.kind = Tok::KwInf;
      else if (w == "A") t.kind = Tok::KwA;
      else if (w == "E") t.kind = Tok::KwE;
      else if (w == "X") t.kind = Tok::KwX;
      else if (w == "F") t.kind = Tok::KwF;
      else if (w == "G") t.kind = Tok::KwG;
      else if (w == "U") t.kind = Tok::KwU;
      else if (w == "R") t.kind = Tok::KwR;
      else { t.kind = Tok::Ident; t.text = std::move(w); }
      out.push_back(t);
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    err(std::string("unexpected character '") + c + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
//  Parser (recursive descent over the token vector)
// ---------------------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  PathPtr parse_top() {
    PathPtr g = parse_ur_expr();
    expect(Tok::End, "end of input");
    return g;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  void advance() { if (pos_ + 1 < toks_.size()) ++pos_; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw FormulaError(msg, cur().line, cur().column);
  }
  void expect(Tok k, const std::string& what) {
    if (cur().kind != k) fail("expected " + what);
    advance();
  }
  bool accept(Tok k) {
    if (cur().kind != k) return false;
    advance();
    return true;
  }

  // expr with an optional single infix U/R at this level; the elided path
  // quantifier defaults to A.
  PathPtr parse_ur_expr() {
    PathPtr lhs = parse_arrow();
    if (cur().kind == Tok::KwU || cur().kind == Tok::KwR) {
      bool is_until = cur().kind == Tok::KwU;
      advance();
      Interval iv = parse_optional_interval();
      PathPtr rhs = parse_arrow();
      return is_until ? mk_all_until(lhs, iv, rhs)
                      : mk_all_release(lhs, iv, rhs);
    }
    return lhs;
  }

  PathPtr parse_arrow() {
    PathPtr lhs = parse_or();
    if (accept(Tok::Arrow)) {
      PathPtr rhs = parse_arrow();
      // a -> b is surface sugar; keep the normalized state-level node when
      // both sides are state formulas, else expand at the path level.
      if (lhs->kind == PathFormula::Kind::Lift &&
          rhs->kind == PathFormula::Kind::Lift)
        return mk_lift(mk_implies(lhs->state, rhs->state));
      return mk_por(mk_pnot(lhs), rhs);
    }
    return lhs;
  }

  PathPtr parse_or() {
    PathPtr lhs = parse_and();
    while (accept(Tok::Pipe)) lhs = mk_por(lhs, parse_and());
    return lhs;
  }

  PathPtr parse_and() {
    PathPtr lhs = parse_unary();
    while (accept(Tok::Amp)) lhs = mk_pand(lhs, parse_unary());
    return lhs;
  }

  PathPtr parse_unary() {
    if (accept(Tok::Bang)) return mk_pnot(parse_unary());
    return parse_primary();
  }

  // A '(' directly after F or G starts an interval only when followed by
  // NAT ','; otherwise it opens a parenthesized formula.
  bool at_interval() const {
    if (cur().kind == Tok::LBrack) return true;
    return cur().kind == Tok::LParen && peek(1).kind == Tok::Nat &&
           peek(2).kind == Tok::Comma;
  }

  Interval parse_optional_interval() {
    if (!at_interval()) return full_interval();
    Interval iv;
    int ln = cur().line, co = cur().column;
    iv.lo_closed = cur().kind == Tok::LBrack;
    advance();
    if (cur().kind != Tok::Nat) fail("expected interval lower bound");
    iv.lo = static_cast<std::uint32_t>(cur().value);
    advance();
    expect(Tok::Comma, "','");
    if (cur().kind == Tok::KwInf) {
      iv.hi = Interval::kInf;
      advance();
      if (cur().kind == Tok::RBrack)
        fail("interval cannot be closed at infinity");
      expect(Tok::RParen, "')'");
      iv.hi_closed = false;
    } else if (cur().kind == Tok::Nat) {
      iv.hi = static_cast<std::uint32_t>(cur().value);
      advance();
      if (cur().kind == Tok::RBrack) { iv.hi_closed = true; advance(); }
      else if (cur().kind == Tok::RParen) { iv.hi_closed = false; advance(); }
      else fail("expected ']' or ')'");
    } else {
      fail("expected interval upper bound");
    }
    bool empty = iv.lo > iv.hi ||
                 (iv.lo == iv.hi && !(iv.lo_closed && iv.hi_closed));
    if (iv.hi != Interval::kInf && empty)
      throw FormulaError("empty interval", ln, co);
    return iv;
  }

  // quantifier == 0: elided (universal), 'A' or 'E' otherwise
  PathPtr parse_temporal(char quantifier) {
    bool ex = quantifier == 'E';
    if (accept(Tok::KwX)) {
      PathPtr g = parse_unary();
      return ex ? mk_ex_next(g) : mk_all_next(g);
    }
    if (accept(Tok::KwF)) {
      Interval iv = parse_optional_interval();
      PathPtr g = parse_unary();
      return ex ? mk_ex_finally(iv, g) : mk_all_finally(iv, g);
    }
    if (accept(Tok::KwG)) {
      Interval iv = parse_optional_interval();
      PathPtr g = parse_unary();
      return ex ? mk_ex_globally(iv, g) : mk_all_globally(iv, g);
    }
    if (accept(Tok::LParen)) {
      PathPtr lhs = parse_arrow();
      bool is_until;
      if (accept(Tok::KwU)) is_until = true;
      else if (accept(Tok::KwR)) is_until = false;
      else fail("expected 'U' or 'R'");
      Interval iv = parse_optional_interval();
      PathPtr rhs = parse_arrow();
      expect(Tok::RParen, "')'");
      if (is_until) return ex ? mk_ex_until(lhs, iv, rhs) : mk_all_until(lhs, iv, rhs);
      return ex ? mk_ex_release(lhs, iv, rhs) : mk_all_release(lhs, iv, rhs);
    }
    fail("expected 'X', 'F', 'G' or '(' after path quantifier");
  }

  PathPtr parse_primary() {
    switch (cur().kind) {
      case Tok::KwTrue: advance(); return mk_lift(mk_true());
      case Tok::KwFalse: advance(); return mk_lift(mk_false());
      case Tok::Ident: {
        std::string name = cur().text;
        advance();
        return mk_lift(mk_prop(std::move(name)));
      }
      case Tok::LParen: {
        advance();
        PathPtr g = parse_ur_expr();
        expect(Tok::RParen, "')'");
        return g;
      }
      case Tok::CoalOpen: {
        advance();
        std::vector<std::string> agents;
        if (cur().kind != Tok::CoalClose) {
          for (;;) {
            if (cur().kind == Tok::Ident) agents.push_back(cur().text);
            else if (cur().kind == Tok::Nat) agents.push_back(cur().text);
            else fail("expected agent name");
            advance();
            if (!accept(Tok::Comma)) break;
          }
        }
        expect(Tok::CoalClose, "'>>'");
        PathPtr g = parse_unary();
        return mk_lift(mk_coalition(std::move(agents), std::move(g)));
      }
      case Tok::KwA: advance(); return parse_temporal('A');
      case Tok::KwE: advance(); return parse_temporal('E');
      case Tok::KwX:
      case Tok::KwF:
      case Tok::KwG:
        return parse_temporal(0);  // elided universal quantifier
      default:
        fail("expected a formula");
    }
  }
};

StatePtr path_to_state(PathPtr g) {
  if (g->kind == PathFormula::Kind::Lift) return g->state;
  return mk_coalition({}, std::move(g));
}

}  // namespace

StatePtr parse_formula(const std::string& text) {
  Parser p(lex(text));
  return desugar(path_to_state(p.parse_top()));
}

// ---------------------------------------------------------------------------
//  Desugaring
// ---------------------------------------------------------------------------

namespace {
PathPtr desugar_path(const PathPtr& g);

StatePtr desugar_state(const StatePtr& f) {
  using K = StateFormula::Kind;
  switch (f->kind) {
    case K::True:
    case K::False:
    case K::Prop:
      return f;
    case K::Not: {
      StatePtr x = desugar_state(f->lhs);
      return x.get() == f->lhs.get() ? f : mk_not(x);
    }
    case K::And: {
      StatePtr a = desugar_state(f->lhs), b = desugar_state(f->rhs);
      return (a.get() == f->lhs.get() && b.get() == f->rhs.get()) ? f : mk_and(a, b);
    }
    case K::Or:
      return mk_not(mk_and(mk_not(desugar_state(f->lhs)),
                           mk_not(desugar_state(f->rhs))));
    case K::Implies:
      return mk_not(mk_and(desugar_state(f->lhs), mk_not(desugar_state(f->rhs))));
    case K::Coalition: {
      PathPtr g = desugar_path(f->path);
      return g.get() == f->path.get() ? f : mk_coalition(f->agents, g);
    }
  }
  return f;
}

PathPtr desugar_path(const PathPtr& g) {
  using K = PathFormula::Kind;
  switch (g->kind) {
    case K::Lift: {
      StatePtr s = desugar_state(g->state);
      return s.get() == g->state.get() ? g : mk_lift(s);
    }
    case K::Not: {
      PathPtr x = desugar_path(g->lhs);
      return x.get() == g->lhs.get() ? g : mk_pnot(x);
    }
    case K::And: {
      PathPtr a = desugar_path(g->lhs), b = desugar_path(g->rhs);
      return (a.get() == g->lhs.get() && b.get() == g->rhs.get()) ? g : mk_pand(a, b);
    }
    case K::Or:
      return mk_pnot(mk_pand(mk_pnot(desugar_path(g->lhs)),
                             mk_pnot(desugar_path(g->rhs))));
    case K::AllNext: {
      PathPtr x = desugar_path(g->lhs);
      return x.get() == g->lhs.get() ? g : mk_all_next(x);
    }
    case K::ExNext:
      return mk_pnot(mk_all_next(mk_pnot(desugar_path(g->lhs))));
    case K::AllFinally:
      return mk_all_until(mk_lift(mk_true()), g->interval, desugar_path(g->lhs));
    case K::ExFinally:
      return mk_ex_until(mk_lift(mk_true()), g->interval, desugar_path(g->lhs));
    case K::AllGlobally:
      return mk_all_release(mk_lift(mk_false()), g->interval, desugar_path(g->lhs));
    case K::ExGlobally:
      return mk_ex_release(mk_lift(mk_false()), g->interval, desugar_path(g->lhs));
    case K::AllUntil:
    case K::ExUntil:
    case K::AllRelease:
    case K::ExRelease: {
      PathPtr a = desugar_path(g->lhs), b = desugar_path(g->rhs);
      if (a.get() == g->lhs.get() && b.get() == g->rhs.get()) return g;
      return mk_binary_path(g->kind, a, g->interval, b);
    }
  }
  return g;
}
}  // namespace

StatePtr desugar(const StatePtr& f) { return desugar_state(f); }

// ---------------------------------------------------------------------------
//  Printing (core constructors only)
// ---------------------------------------------------------------------------

namespace {

void print_state_inner(std::ostream& os, const StatePtr& f, bool right_of_and);
void print_path_inner(std::ostream& os, const PathPtr& g, bool right_of_and);

void print_interval(std::ostream& os, const Interval& iv) {
  if (iv.is_full()) return;
  os << (iv.lo_closed ? '[' : '(') << iv.lo << ',';
  if (iv.hi == Interval::kInf) os << "inf)";
  else os << iv.hi << (iv.hi_closed ? ']' : ')');
}

bool state_atomic(const StatePtr& f) {
  using K = StateFormula::Kind;
  return f->kind == K::True || f->kind == K::False || f->kind == K::Prop;
}

// Prints f so that it reparses as one '&'-operand (unary level).
void print_state_unary(std::ostream& os, const StatePtr& f) {
  if (f->kind == StateFormula::Kind::And) {
    os << '(';
    print_state_inner(os, f, false);
    os << ')';
    return;
  }
  print_state_inner(os, f, false);
}

// A lifted state-level '&' (or sugar boolean) is still an '&'-operand chain
// in the concrete syntax and needs the same parenthesization as a path And.
bool and_like(const PathPtr& g) {
  using SK = StateFormula::Kind;
  if (g->kind == PathFormula::Kind::And) return true;
  if (g->kind != PathFormula::Kind::Lift) return false;
  SK k = g->state->kind;
  return k == SK::And || k == SK::Or || k == SK::Implies;
}

void print_path_unary(std::ostream& os, const PathPtr& g) {
  if (and_like(g)) {
    os << '(';
    print_path_inner(os, g, false);
    os << ')';
    return;
  }
  print_path_inner(os, g, false);
}

void print_state_inner(std::ostream& os, const StatePtr& f, bool right_of_and) {
  using K = StateFormula::Kind;
  switch (f->kind) {
    case K::True: os << "true"; return;
    case K::False: os << "false"; return;
    case K::Prop: os << f->prop; return;
    case K::Not:
      os << '!';
      if (state_atomic(f->lhs) || f->lhs->kind == K::Not) {
        print_state_inner(os, f->lhs, false);
      } else {
        os << '(';
        print_state_inner(os, f->lhs, false);
        os << ')';
      }
      return;
    case K::And:
      if (right_of_and) {
        os << '(';
        print_state_inner(os, f, false);
        os << ')';
        return;
      }
      print_state_inner(os, f->lhs, false);
      os << " & ";
      print_state_unary(os, f->rhs);
      return;
    case K::Coalition: {
      os << "<<";
      for (std::size_t i = 0; i < f->agents.size(); ++i) {
        if (i) os << ',';
        os << f->agents[i];
      }
      os << ">> ";
      print_path_unary(os, f->path);
      return;
    }
    case K::Or:
    case K::Implies:
      // printing is defined on desugared formulas; fall back to parens form
      os << '(';
      print_state_inner(os, f->lhs, false);
      os << (f->kind == K::Or ? " | " : " -> ");
      print_state_inner(os, f->rhs, false);
      os << ')';
      return;
  }
}

void print_path_inner(std::ostream& os, const PathPtr& g, bool right_of_and) {
  using K = PathFormula::Kind;
  switch (g->kind) {
    case K::Lift:
      print_state_inner(os, g->state, right_of_and);
      return;
    case K::Not:
      os << '!';
      if (g->lhs->kind == K::Not) {
        print_path_inner(os, g->lhs, false);
      } else {
        os << '(';
        print_path_inner(os, g->lhs, false);
        os << ')';
      }
      return;
    case K::And:
      if (right_of_and) {
        os << '(';
        print_path_inner(os, g, false);
        os << ')';
        return;
      }
      print_path_inner(os, g->lhs, false);
      os << " & ";
      print_path_unary(os, g->rhs);
      return;
    case K::AllNext:
      os << "A X ";
      print_path_unary(os, g->lhs);
      return;
    case K::AllUntil:
    case K::ExUntil:
    case K::AllRelease:
    case K::ExRelease: {
      bool ex = g->kind == K::ExUntil || g->kind == K::ExRelease;
      bool until = g->kind == K::AllUntil || g->kind == K::ExUntil;
      os << (ex ? "E (" : "A (");
      print_path_inner(os, g->lhs, false);
      os << (until ? " U" : " R");
      print_interval(os, g->interval);
      os << ' ';
      print_path_inner(os, g->rhs, false);
      os << ')';
      return;
    }
    default:
      throw std::logic_error("print_formula requires a desugared formula");
  }
}

}  // namespace

std::string print_formula(const StatePtr& f) {
  std::ostringstream os;
  // a top-level empty coalition is the implicit wrapper; print the bare path
  if (f->kind == StateFormula::Kind::Coalition && f->agents.empty()) {
    print_path_inner(os, f->path, false);
  } else {
    print_state_inner(os, f, false);
  }
  return os.str();
}

std::string print_formula(const PathPtr& g) {
  std::ostringstream os;
  print_path_inner(os, g, false);
  return os.str();
}

// ---------------------------------------------------------------------------
//  Fragment classification and constants
// ---------------------------------------------------------------------------

const char* fragment_name(Fragment f) {
  switch (f) {
    case Fragment::CTL: return "CTL";
    case Fragment::TCTL: return "TCTL";
    case Fragment::ATL: return "ATL";
    case Fragment::TATL: return "TATL";
    case Fragment::SCTL: return "SCTL";
    case Fragment::STCTL: return "STCTL";
  }
  return "?";
}

namespace {

struct Classify {
  bool coalition = false;   // some non-empty coalition occurs
  bool timed = false;       // some interval != [0,inf) occurs
  bool atl_shape = true;    // every coalition body is a single elided-A operator
                            // over state-formula operands

  // A state formula operand inside an ATL-shaped body.
  void state(const StatePtr& f) {
    using K = StateFormula::Kind;
    switch (f->kind) {
      case K::True: case K::False: case K::Prop: return;
      case K::Not: state(f->lhs); return;
      case K::And: case K::Or: case K::Implies:
        state(f->lhs); state(f->rhs); return;
      case K::Coalition:
        if (!f->agents.empty()) coalition = true;
        body(f->path, f->agents.empty());
        return;
    }
  }

  // Coalition body; for the empty coalition (plain path quantification) the
  // ATL shape additionally admits E-quantified operators.
  void body(const PathPtr& g, bool allow_existential) {
    using K = PathFormula::Kind;
    switch (g->kind) {
      case K::Lift:
        // <<A>> phi with no temporal operator: degenerate, keep ATL shape
        state(g->state);
        return;
      case K::AllNext:
        shaped_operand(g->lhs);
        return;
      case K::AllUntil:
      case K::AllRelease:
        if (!g->interval.is_full()) timed = true;
        shaped_operand(g->lhs);
        shaped_operand(g->rhs);
        return;
      case K::ExUntil:
      case K::ExRelease:
        if (!g->interval.is_full()) timed = true;
        if (!allow_existential) atl_shape = false;
        shaped_operand(g->lhs);
        shaped_operand(g->rhs);
        return;
      case K::Not:
        atl_shape = false;
        path(g->lhs);
        return;
      case K::And:
        atl_shape = false;
        path(g->lhs);
        path(g->rhs);
        return;
      default:
        atl_shape = false;
        return;
    }
  }

  // Operand of a shaped temporal operator must be a state formula.
  void shaped_operand(const PathPtr& g) {
    if (g->kind == PathFormula::Kind::Lift) state(g->state);
    else { atl_shape = false; path(g); }
  }

  // General path formula (already outside the ATL shape).
  void path(const PathPtr& g) {
    using K = PathFormula::Kind;
    switch (g->kind) {
      case K::Lift: state(g->state); return;
      case K::Not: path(g->lhs); return;
      case K::And: case K::Or: path(g->lhs); path(g->rhs); return;
      case K::AllNext: case K::ExNext: path(g->lhs); return;
      case K::AllFinally: case K::ExFinally:
      case K::AllGlobally: case K::ExGlobally:
        if (!g->interval.is_full()) timed = true;
        path(g->lhs);
        return;
      case K::AllUntil: case K::ExUntil:
      case K::AllRelease: case K::ExRelease:
        if (!g->interval.is_full()) timed = true;
        path(g->lhs); path(g->rhs);
        return;
    }
  }
};

}  // namespace

Fragment classify_fragment(const StatePtr& f) {
  Classify c;
  c.state(f);
  if (!c.coalition) return c.timed ? Fragment::TCTL : Fragment::CTL;
  if (c.atl_shape) return c.timed ? Fragment::TATL : Fragment::ATL;
  return c.timed ? Fragment::STCTL : Fragment::SCTL;
}

namespace {
void max_const_path(const PathPtr& g, std::uint32_t& m);

void max_const_state(const StatePtr& f, std::uint32_t& m) {
  using K = StateFormula::Kind;
  switch (f->kind) {
    case K::True: case K::False: case K::Prop: return;
    case K::Not: max_const_state(f->lhs, m); return;
    case K::And: case K::Or: case K::Implies:
      max_const_state(f->lhs, m);
      max_const_state(f->rhs, m);
      return;
    case K::Coalition: max_const_path(f->path, m); return;
  }
}

void max_const_path(const PathPtr& g, std::uint32_t& m) {
  using K = PathFormula::Kind;
  switch (g->kind) {
    case K::Lift: max_const_state(g->state, m); return;
    case K::Not: case K::AllNext: case K::ExNext:
      max_const_path(g->lhs, m);
      return;
    case K::AllFinally: case K::ExFinally:
    case K::AllGlobally: case K::ExGlobally:
      if (g->interval.lo != Interval::kInf) m = std::max(m, g->interval.lo);
      if (g->interval.hi != Interval::kInf) m = std::max(m, g->interval.hi);
      max_const_path(g->lhs, m);
      return;
    case K::And: case K::Or:
    case K::AllUntil: case K::ExUntil:
    case K::AllRelease: case K::ExRelease:
      if (g->interval.lo != Interval::kInf) m = std::max(m, g->interval.lo);
      if (g->interval.hi != Interval::kInf) m = std::max(m, g->interval.hi);
      max_const_path(g->lhs, m);
      max_const_path(g->rhs, m);
      return;
  }
}
}  // namespace

std::uint32_t max_constant(const StatePtr& f) {
  std::uint32_t m = 0;
  max_const_state(f, m);
  return m;
}

namespace {
void collect_agents_path(const PathPtr& g, std::vector<std::string>& out, bool& any);

void collect_agents_state(const StatePtr& f, std::vector<std::string>& out, bool& any) {
  using K = StateFormula::Kind;
  switch (f->kind) {
    case K::True: case K::False: case K::Prop: return;
    case K::Not: collect_agents_state(f->lhs, out, any); return;
    case K::And: case K::Or: case K::Implies:
      collect_agents_state(f->lhs, out, any);
      collect_agents_state(f->rhs, out, any);
      return;
    case K::Coalition:
      if (!f->agents.empty()) any = true;
      out.insert(out.end(), f->agents.begin(), f->agents.end());
      collect_agents_path(f->path, out, any);
      return;
  }
}

void collect_agents_path(const PathPtr& g, std::vector<std::string>& out, bool& any) {
  using K = PathFormula::Kind;
  switch (g->kind) {
    case K::Lift: collect_agents_state(g->state, out, any); return;
    case K::Not: case K::AllNext: case K::ExNext:
    case K::AllFinally: case K::ExFinally:
    case K::AllGlobally: case K::ExGlobally:
      collect_agents_path(g->lhs, out, any);
      return;
    case K::And: case K::Or:
    case K::AllUntil: case K::ExUntil:
    case K::AllRelease: case K::ExRelease:
      collect_agents_path(g->lhs, out, any);
      collect_agents_path(g->rhs, out, any);
      return;
  }
}
}  // namespace

bool has_coalition(const StatePtr& f) {
  bool any = false;
  std::vector<std::string> out;
  collect_agents_state(f, out, any);
  return any;
}

std::vector<std::string> coalition_agents(const StatePtr& f) {
  bool any = false;
  std::vector<std::string> out;
  collect_agents_state(f, out, any);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace stctl
