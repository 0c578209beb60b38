#pragma once

#include <string>
#include <vector>

#include "gradia/syntax.hpp"

namespace gradia {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
};

namespace parse_detail {

enum class Tok {
  Ident,
  Lambda,   // backslash
  Dot,
  LParen,
  RParen,
  Comma,
  Colon,
  Semi,
  Caret,
  Plus,
  Star,
  Arrow,
  Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string text) {
    out.push_back({k, std::move(text), line, col});
  };
  while (i < src.size()) {
    char ch = src[i];
    if (ch == '\n') {
      line++;
      col = 1;
      i++;
      continue;
    }
    if (ch == ' ' || ch == '\t' || ch == '\r') {
      i++;
      col++;
      continue;
    }
    if (ch == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') i++;
      continue;
    }
    if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      push(Tok::Arrow, "->");
      i += 2;
      col += 2;
      continue;
    }
    if (isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      size_t j = i;
      while (j < src.size() && (isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' ||
                                src[j] == '\''))
        j++;
      push(Tok::Ident, src.substr(i, j - i));
      col += static_cast<int>(j - i);
      i = j;
      continue;
    }
    Tok k;
    switch (ch) {
      case '\\': k = Tok::Lambda; break;
      case '.': k = Tok::Dot; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case ':': k = Tok::Colon; break;
      case ';': k = Tok::Semi; break;
      case '^': k = Tok::Caret; break;
      case '+': k = Tok::Plus; break;
      case '*': k = Tok::Star; break;
      case '=': k = Tok::Equals; break;
      default:
        throw ParseError(line, col, std::string("unexpected character '") + ch + "'");
    }
    push(k, std::string(1, ch));
    i++;
    col++;
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

inline const std::vector<std::string> kKeywords = {
    "Pi",   "Sigma", "let",  "return", "in",   "bind", "case", "of",
    "unit", "Unit",  "T",    "eta",    "seal", "unseal", "pi1", "pi2",
    "inj1", "inj2"};

class Parser {
 public:
  Parser(const std::string& src, const Lattice& lat, Fragment frag,
         std::vector<std::string> sorts, std::vector<std::string> free_names)
      : toks_(lex(src)), lat_(lat), frag_(frag), sorts_(std::move(sorts)) {
    // free variables, outermost first; innermost end of scope is the back
    for (auto& n : free_names) scope_.push_back(n);
  }

  TermPtr parse_whole() {
    TermPtr t = expr();
    expect(Tok::End, "input continues after term");
    return t;
  }

 private:
  bool sdc_like() const { return frag_ == Fragment::Sdc || frag_ == Fragment::Seal; }

  const Token& peek(int k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token advance() { return toks_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(const std::string& s) const {
    return peek().kind == Tok::Ident && peek().text == s;
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) throw ParseError(peek().line, peek().col, "expected " + what);
    return advance();
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(peek().line, peek().col, msg);
  }

  bool is_keyword(const std::string& s) const {
    for (auto& k : parse_detail::kKeywords)
      if (k == s) return true;
    for (auto& k : sorts_)
      if (k == s) return true;
    return false;
  }

  Grade grade_after_caret() {
    expect(Tok::Caret, "'^'");
    Token t = expect(Tok::Ident, "a grade name");
    auto g = lat_.lookup(t.text);
    if (!g) throw ParseError(t.line, t.col, "unknown grade '" + t.text + "'");
    return *g;
  }

  Grade optional_grade() {
    if (at(Tok::Caret)) return grade_after_caret();
    return lat_.bot();
  }

  std::string binder_name() {
    Token t = expect(Tok::Ident, "a binder name");
    if (is_keyword(t.text))
      throw ParseError(t.line, t.col, "'" + t.text + "' is reserved");
    return t.text;
  }

  struct ScopeGuard {
    Parser& p;
    size_t n;
    ScopeGuard(Parser& p, const std::string& name) : p(p), n(1) { p.scope_.push_back(name); }
    ScopeGuard(Parser& p, const std::string& a, const std::string& b) : p(p), n(2) {
      p.scope_.push_back(a);
      p.scope_.push_back(b);
    }
    ~ScopeGuard() { p.scope_.resize(p.scope_.size() - n); }
  };

  TermPtr expr() {
    if (++depth_ > 4096) fail("nesting too deep");
    struct Guard {
      int& d;
      ~Guard() { d--; }
    } guard{depth_};
    if (at(Tok::Lambda)) return lambda();
    if (at_ident("Pi") || at_ident("Sigma")) return pi_sigma();
    if (at_ident("let")) return letpair();
    if (at_ident("bind")) return bind_expr();
    if (at_ident("case")) return case_expr();
    return arrow_level();
  }

  TermPtr lambda() {
    advance();  // backslash
    std::string x = binder_name();
    expect(Tok::Colon, "':' after binder");
    bool graded = at(Tok::Caret);
    Grade g = optional_grade();
    TermPtr dom = arrow_level();
    expect(Tok::Dot, "'.' after binder annotation");
    ScopeGuard sg(*this, x);
    TermPtr body = expr();
    if (sdc_like()) {
      if (graded) fail("graded lambda is not available in this fragment");
      return lam(dom, body, x);
    }
    return glam(g, dom, body, x);
  }

  TermPtr pi_sigma() {
    bool is_pi = peek().text == "Pi";
    if (sdc_like()) fail("dependent types are not available in this fragment");
    advance();
    std::string x = binder_name();
    expect(Tok::Colon, "':' after binder");
    Grade g = optional_grade();
    TermPtr dom = arrow_level();
    expect(Tok::Dot, "'.' after binder annotation");
    ScopeGuard sg(*this, x);
    TermPtr body = expr();
    return is_pi ? pi(g, dom, body, x) : sigma(g, dom, body, x);
  }

  TermPtr letpair() {
    if (sdc_like()) fail("let-pair is not available in this fragment");
    advance();  // let
    expect(Tok::LParen, "'(' after let");
    std::string x = binder_name();
    Grade g = optional_grade();
    expect(Tok::Comma, "',' between pattern variables");
    std::string y = binder_name();
    expect(Tok::RParen, "')' closing the pattern");
    expect(Tok::Equals, "'=' after pattern");
    TermPtr scrut = expr();
    TermPtr motive;
    std::string z = "z";
    if (at_ident("return")) {
      advance();
      z = binder_name();
      expect(Tok::Dot, "'.' after motive binder");
      ScopeGuard sg(*this, z);
      motive = expr();
    }
    if (!at_ident("in")) fail("expected 'in'");
    advance();
    ScopeGuard sg(*this, x, y);
    TermPtr body = expr();
    return let_pair(g, scrut, body, motive, x, y, z);
  }

  TermPtr bind_expr() {
    if (frag_ != Fragment::Sdc) fail("bind is not available in this fragment");
    advance();
    Grade g = optional_grade();
    std::string x = binder_name();
    expect(Tok::Equals, "'=' after bind variable");
    TermPtr rhs = expr();
    if (!at_ident("in")) fail("expected 'in'");
    advance();
    ScopeGuard sg(*this, x);
    TermPtr body = expr();
    return bind(g, rhs, body, x);
  }

  TermPtr case_expr() {
    advance();
    TermPtr scrut = expr();
    if (!at_ident("of")) fail("expected 'of'");
    advance();
    TermPtr b1 = expr();
    expect(Tok::Semi, "';' between case branches");
    TermPtr b2 = expr();
    return case_of(scrut, b1, b2);
  }

  TermPtr arrow_level() {
    TermPtr lhs = sum_level();
    if (at(Tok::Arrow)) {
      if (!sdc_like()) fail("'->' is simply-typed syntax; use Pi in this fragment");
      advance();
      return arrow(lhs, arrow_level());
    }
    return lhs;
  }

  TermPtr sum_level() {
    TermPtr t = prod_level();
    while (at(Tok::Plus)) {
      advance();
      t = sum(t, prod_level());
    }
    return t;
  }

  TermPtr prod_level() {
    TermPtr t = app_level();
    while (at(Tok::Star)) {
      if (!sdc_like()) fail("'*' is simply-typed syntax; use Sigma in this fragment");
      advance();
      t = prod(t, app_level());
    }
    return t;
  }

  bool starts_atom() const {
    if (at(Tok::LParen)) return true;
    if (!at(Tok::Ident)) return false;
    const std::string& s = peek().text;
    if (s == "unit" || s == "Unit") return true;
    for (auto& k : sorts_)
      if (k == s) return true;
    return !is_keyword(s);
  }

  TermPtr app_level() {
    TermPtr t = unary();
    while (starts_atom()) {
      TermPtr arg = atom();
      // A caret right before ',' is a pair grade, not an argument grade.
      bool caret_for_pair =
          at(Tok::Caret) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Comma;
      if (at(Tok::Caret) && !caret_for_pair) {
        if (sdc_like()) fail("graded application is not available in this fragment");
        t = gapp(t, arg, grade_after_caret());
      } else if (sdc_like()) {
        t = app(t, arg);
      } else {
        t = gapp(t, arg, lat_.bot());
        if (caret_for_pair) break;
      }
    }
    return t;
  }

  TermPtr unary() {
    if (at(Tok::Ident)) {
      const std::string& s = peek().text;
      if (s == "T") {
        if (sdc_like()) {
          advance();
          Grade g = optional_grade();
          return tmonad(g, unary());
        }
        fail("the modality T is simply-typed syntax; use Sigma in this fragment");
      }
      if (s == "eta") {
        if (frag_ != Fragment::Sdc) fail("eta is SDC syntax");
        advance();
        Grade g = optional_grade();
        return ret(g, unary());
      }
      if (s == "seal" || s == "unseal") {
        if (frag_ != Fragment::Seal) fail("'" + s + "' is sealing-calculus syntax");
        bool is_seal = s == "seal";
        advance();
        Grade g = optional_grade();
        return is_seal ? seal(g, unary()) : unseal(g, unary());
      }
      if (s == "pi1" || s == "pi2") {
        bool first = s == "pi1";
        advance();
        Grade g = optional_grade();
        TermPtr body = unary();
        if (sdc_like()) {
          // projections are primitive in the simple calculi and ungraded
          return first ? proj1(body) : proj2(body);
        }
        // pi1^g a is sugar for let (x^g, y) = a in x
        return let_pair(g, body, var(first ? 1 : 0, first ? "x" : "y"), nullptr, "x", "y");
      }
      if (s == "inj1" || s == "inj2") {
        bool first = s == "inj1";
        advance();
        TermPtr body = unary();
        return first ? inj1(body) : inj2(body);
      }
    }
    return atom();
  }

  TermPtr atom() {
    if (at(Tok::LParen)) {
      advance();
      TermPtr first = expr();
      if (at(Tok::Colon)) {
        advance();
        TermPtr ty = expr();
        expect(Tok::RParen, "')' closing ascription");
        return ascribe(first, ty);
      }
      Grade g = lat_.bot();
      bool graded = false;
      if (at(Tok::Caret)) {
        g = grade_after_caret();
        graded = true;
      }
      if (at(Tok::Comma)) {
        advance();
        TermPtr second = expr();
        expect(Tok::RParen, "')' closing pair");
        if (sdc_like()) {
          if (graded) fail("graded pairs are not available in this fragment");
          return pair(first, second);
        }
        return gpair(first, g, second);
      }
      if (graded) fail("expected ',' after pair grade");
      expect(Tok::RParen, "')'");
      return first;
    }
    Token t = expect(Tok::Ident, "a term");
    if (t.text == "unit") return unit_tm();
    if (t.text == "Unit") return unit_ty();
    for (auto& s : sorts_)
      if (s == t.text) {
        if (sdc_like()) throw ParseError(t.line, t.col, "sorts are not simply-typed syntax");
        return sort(t.text);
      }
    if (is_keyword(t.text))
      throw ParseError(t.line, t.col, "unexpected keyword '" + t.text + "'");
    for (int i = static_cast<int>(scope_.size()) - 1; i >= 0; i--)
      if (scope_[i] == t.text) return var(static_cast<int>(scope_.size()) - 1 - i, t.text);
    throw ParseError(t.line, t.col, "unbound variable '" + t.text + "'");
  }

  TermPtr ascribe(const TermPtr& t, const TermPtr& ty) {
    Term copy = *t;
    switch (t->tag) {
      case Tag::Inj1:
      case Tag::Inj2:
      case Tag::GPair:
        copy.ann = ty;
        return make_term(std::move(copy));
      default:
        fail("only injections and graded pairs take a type ascription");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  int depth_ = 0;
  const Lattice& lat_;
  Fragment frag_;
  std::vector<std::string> sorts_;
  std::vector<std::string> scope_;
};

}  // namespace parse_detail

inline std::vector<std::string> default_sort_names() { return {"Type", "Kind", "Box"}; }

// Parses surface syntax into a well-scoped term. Binder names become index
// hints; `free_names` (outermost first) provides the ambient scope.
inline TermPtr parse(const std::string& source, const Lattice& lattice,
                     Fragment fragment = Fragment::Ddc,
                     std::vector<std::string> sort_names = default_sort_names(),
                     std::vector<std::string> free_names = {}) {
  parse_detail::Parser p(source, lattice, fragment, std::move(sort_names),
                         std::move(free_names));
  return p.parse_whole();
}

}  // namespace gradia
