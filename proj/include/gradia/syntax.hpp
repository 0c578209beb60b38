#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gradia/lattice.hpp"

namespace gradia {

// One shared AST covers SDC, the sealing calculus and DDC; each checker
// rejects constructors outside its fragment. Binders are positional indices,
// innermost = 0; surface names survive only as printing hints.
enum class Tag : uint8_t {
  Var,
  Sort,
  UnitTy,
  UnitTm,
  // simply-typed forms (SDC / sealing calculus)
  SimpleArrow,  // A -> B
  SimpleProd,   // A * B
  TMonad,       // T^l A
  Lam,          // \x:A. b        (body binds 1)
  App,          // b a
  Pair,         // (a, b)
  Proj1,
  Proj2,
  Return,  // eta^l a
  Bind,    // bind^l x = a in b  (body binds 1)
  Seal,    // seal^l a
  Unseal,  // unseal^l a
  // dependent forms (DDC / DDC^T)
  Pi,       // Pi x:^l A. B      (B binds 1)
  GLam,     // \x:^l A. b        (b binds 1)
  GApp,     // b a^l
  Sigma,    // Sigma x:^l A. B   (B binds 1)
  GPair,    // (a^l, b)          (optional Sigma ascription in ann)
  LetPair,  // let (x^l, y) = a in b   (b binds 2: x outer, y inner;
            //  optional motive in ann, binds 1: z)
  // shared sums
  Sum,   // A + B
  Inj1,  // inj1 a   (optional sum-type ascription in ann)
  Inj2,
  Case,  // case a of b1 ; b2   (branches are functions)
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  Tag tag;
  int var = -1;           // Var: de Bruijn index
  std::string sort;       // Sort: sort name
  Grade grade{};          // graded nodes
  TermPtr a, b, c;        // children (Case uses all three)
  TermPtr ann;            // ascription slot (Inj1/Inj2/GPair) or LetPair motive
  std::vector<std::string> hints;  // binder name hints, outermost first

  int size = 1;        // node count, annotation slots included
  int fv_bound = 0;    // least n such that the term is well-scoped under n vars
  uint64_t hash = 0;
};

namespace detail {
inline uint64_t mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}
}  // namespace detail

inline TermPtr make_term(Term t) {
  uint64_t h = detail::mix(0, static_cast<uint64_t>(t.tag));
  h = detail::mix(h, static_cast<uint64_t>(t.var + 1));
  h = detail::mix(h, std::hash<std::string>{}(t.sort));
  h = detail::mix(h, t.grade.id);
  int size = 1;
  int fv = (t.tag == Tag::Var) ? t.var + 1 : 0;
  int binders_a = 0, binders_b = 0, binders_ann = 0;
  switch (t.tag) {
    case Tag::Lam: binders_b = 1; break;
    case Tag::Bind: binders_b = 1; break;
    case Tag::Pi:
    case Tag::GLam:
    case Tag::Sigma: binders_b = 1; break;
    case Tag::LetPair: binders_b = 2; binders_ann = 1; break;
    default: break;
  }
  (void)binders_a;
  auto fold = [&](const TermPtr& ch, int binders) {
    if (!ch) {
      h = detail::mix(h, 0);
      return;
    }
    h = detail::mix(h, ch->hash);
    size += ch->size;
    int f = ch->fv_bound - binders;
    if (f > fv) fv = f;
  };
  fold(t.a, 0);
  fold(t.b, binders_b);
  fold(t.c, 0);
  fold(t.ann, binders_ann);
  t.size = size;
  t.fv_bound = fv;
  t.hash = h;
  return std::make_shared<const Term>(std::move(t));
}

// --- constructors ---------------------------------------------------------

inline TermPtr var(int i, std::string hint = "") {
  Term t;
  t.tag = Tag::Var;
  t.var = i;
  if (!hint.empty()) t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr sort(std::string name) {
  Term t;
  t.tag = Tag::Sort;
  t.sort = std::move(name);
  return make_term(std::move(t));
}
inline TermPtr unit_ty() {
  Term t;
  t.tag = Tag::UnitTy;
  return make_term(std::move(t));
}
inline TermPtr unit_tm() {
  Term t;
  t.tag = Tag::UnitTm;
  return make_term(std::move(t));
}
inline TermPtr node1(Tag tag, TermPtr a) {
  Term t;
  t.tag = tag;
  t.a = std::move(a);
  return make_term(std::move(t));
}
inline TermPtr node2(Tag tag, TermPtr a, TermPtr b) {
  Term t;
  t.tag = tag;
  t.a = std::move(a);
  t.b = std::move(b);
  return make_term(std::move(t));
}
inline TermPtr arrow(TermPtr a, TermPtr b) { return node2(Tag::SimpleArrow, std::move(a), std::move(b)); }
inline TermPtr prod(TermPtr a, TermPtr b) { return node2(Tag::SimpleProd, std::move(a), std::move(b)); }
inline TermPtr sum(TermPtr a, TermPtr b) { return node2(Tag::Sum, std::move(a), std::move(b)); }
inline TermPtr tmonad(Grade g, TermPtr a) {
  Term t;
  t.tag = Tag::TMonad;
  t.grade = g;
  t.a = std::move(a);
  return make_term(std::move(t));
}
inline TermPtr lam(TermPtr dom, TermPtr body, std::string hint = "x") {
  Term t;
  t.tag = Tag::Lam;
  t.a = std::move(dom);
  t.b = std::move(body);
  t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr app(TermPtr f, TermPtr arg) { return node2(Tag::App, std::move(f), std::move(arg)); }
inline TermPtr pair(TermPtr a, TermPtr b) { return node2(Tag::Pair, std::move(a), std::move(b)); }
inline TermPtr proj1(TermPtr a) { return node1(Tag::Proj1, std::move(a)); }
inline TermPtr proj2(TermPtr a) { return node1(Tag::Proj2, std::move(a)); }
inline TermPtr ret(Grade g, TermPtr a) {
  Term t;
  t.tag = Tag::Return;
  t.grade = g;
  t.a = std::move(a);
  return make_term(std::move(t));
}
inline TermPtr bind(Grade g, TermPtr rhs, TermPtr body, std::string hint = "x") {
  Term t;
  t.tag = Tag::Bind;
  t.grade = g;
  t.a = std::move(rhs);
  t.b = std::move(body);
  t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr seal(Grade g, TermPtr a) {
  Term t;
  t.tag = Tag::Seal;
  t.grade = g;
  t.a = std::move(a);
  return make_term(std::move(t));
}
inline TermPtr unseal(Grade g, TermPtr a) {
  Term t;
  t.tag = Tag::Unseal;
  t.grade = g;
  t.a = std::move(a);
  return make_term(std::move(t));
}
inline TermPtr pi(Grade g, TermPtr dom, TermPtr cod, std::string hint = "x") {
  Term t;
  t.tag = Tag::Pi;
  t.grade = g;
  t.a = std::move(dom);
  t.b = std::move(cod);
  t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr glam(Grade g, TermPtr dom, TermPtr body, std::string hint = "x") {
  Term t;
  t.tag = Tag::GLam;
  t.grade = g;
  t.a = std::move(dom);
  t.b = std::move(body);
  t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr gapp(TermPtr f, TermPtr arg, Grade g) {
  Term t;
  t.tag = Tag::GApp;
  t.grade = g;
  t.a = std::move(f);
  t.b = std::move(arg);
  return make_term(std::move(t));
}
inline TermPtr sigma(Grade g, TermPtr dom, TermPtr cod, std::string hint = "x") {
  Term t;
  t.tag = Tag::Sigma;
  t.grade = g;
  t.a = std::move(dom);
  t.b = std::move(cod);
  t.hints = {std::move(hint)};
  return make_term(std::move(t));
}
inline TermPtr gpair(TermPtr a, Grade g, TermPtr b, TermPtr ascription = nullptr) {
  Term t;
  t.tag = Tag::GPair;
  t.grade = g;
  t.a = std::move(a);
  t.b = std::move(b);
  t.ann = std::move(ascription);
  return make_term(std::move(t));
}
inline TermPtr let_pair(Grade g, TermPtr scrut, TermPtr body, TermPtr motive = nullptr,
                        std::string hx = "x", std::string hy = "y", std::string hz = "z") {
  Term t;
  t.tag = Tag::LetPair;
  t.grade = g;
  t.a = std::move(scrut);
  t.b = std::move(body);
  t.ann = std::move(motive);
  t.hints = {std::move(hx), std::move(hy), std::move(hz)};
  return make_term(std::move(t));
}
inline TermPtr inj1(TermPtr a, TermPtr ascription = nullptr) {
  Term t;
  t.tag = Tag::Inj1;
  t.a = std::move(a);
  t.ann = std::move(ascription);
  return make_term(std::move(t));
}
inline TermPtr inj2(TermPtr a, TermPtr ascription = nullptr) {
  Term t;
  t.tag = Tag::Inj2;
  t.a = std::move(a);
  t.ann = std::move(ascription);
  return make_term(std::move(t));
}
inline TermPtr case_of(TermPtr scrut, TermPtr b1, TermPtr b2) {
  Term t;
  t.tag = Tag::Case;
  t.a = std::move(scrut);
  t.b = std::move(b1);
  t.c = std::move(b2);
  return make_term(std::move(t));
}

// Structural equality: everything except name hints. This is also
// alpha-equivalence, since binders are positional.
inline bool term_eq(const TermPtr& x, const TermPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash) return false;
  if (x->tag != y->tag || x->var != y->var || x->sort != y->sort || x->grade != y->grade)
    return false;
  return term_eq(x->a, y->a) && term_eq(x->b, y->b) && term_eq(x->c, y->c) &&
         term_eq(x->ann, y->ann);
}

struct TermEq {
  bool operator()(const TermPtr& x, const TermPtr& y) const { return term_eq(x, y); }
};
struct TermHash {
  size_t operator()(const TermPtr& t) const { return t ? static_cast<size_t>(t->hash) : 0; }
};

// --- shifting and substitution --------------------------------------------

// Number of binders each child of `t` lives under.
inline int child_binders(const Term& t, int which) {
  // which: 0=a, 1=b, 2=c, 3=ann
  switch (t.tag) {
    case Tag::Lam:
    case Tag::Bind:
    case Tag::Pi:
    case Tag::GLam:
    case Tag::Sigma:
      return which == 1 ? 1 : 0;
    case Tag::LetPair:
      if (which == 1) return 2;
      if (which == 3) return 1;
      return 0;
    default:
      return 0;
  }
}

inline TermPtr map_children(const Term& t,
                            const std::function<TermPtr(const TermPtr&, int)>& f) {
  Term out = t;
  out.a = t.a ? f(t.a, child_binders(t, 0)) : nullptr;
  out.b = t.b ? f(t.b, child_binders(t, 1)) : nullptr;
  out.c = t.c ? f(t.c, child_binders(t, 2)) : nullptr;
  out.ann = t.ann ? f(t.ann, child_binders(t, 3)) : nullptr;
  return make_term(std::move(out));
}

// Adds `amount` to every free index >= cutoff.
inline TermPtr shift(const TermPtr& t, int amount, int cutoff = 0) {
  if (!t) return nullptr;
  if (amount == 0 || t->fv_bound <= cutoff) return t;
  if (t->tag == Tag::Var)
    return t->var >= cutoff ? var(t->var + amount, t->hints.empty() ? "" : t->hints[0]) : t;
  return map_children(*t, [&](const TermPtr& ch, int binders) {
    return shift(ch, amount, cutoff + binders);
  });
}

// Capture-avoiding substitution of `s` for index `idx`; indices above `idx`
// slide down by one.
inline TermPtr subst(const TermPtr& t, const TermPtr& s, int idx = 0) {
  if (!t) return nullptr;
  if (t->fv_bound <= idx) return t;
  if (t->tag == Tag::Var) {
    if (t->var == idx) return shift(s, idx);
    if (t->var > idx) return var(t->var - 1, t->hints.empty() ? "" : t->hints[0]);
    return t;
  }
  return map_children(*t, [&](const TermPtr& ch, int binders) {
    return subst(ch, s, idx + binders);
  });
}

// --- contexts ---------------------------------------------------------------

struct ContextBinding {
  std::string hint;
  Grade grade{};
  TermPtr type;
};

// Graded typing context; ordered, innermost binding last.
struct Context {
  std::vector<ContextBinding> bindings;

  int size() const { return static_cast<int>(bindings.size()); }
  // de Bruijn index counts from the innermost end
  const ContextBinding& lookup(int index) const {
    return bindings[bindings.size() - 1 - index];
  }
  Context extended(std::string hint, Grade g, TermPtr ty) const {
    Context out = *this;
    out.bindings.push_back({std::move(hint), g, std::move(ty)});
    return out;
  }
};

// Grade-only projection |Omega|.
struct GradeContext {
  std::vector<std::pair<std::string, Grade>> bindings;

  static GradeContext of(const Context& omega) {
    GradeContext out;
    for (auto& b : omega.bindings) out.bindings.emplace_back(b.hint, b.grade);
    return out;
  }
  int size() const { return static_cast<int>(bindings.size()); }
  Grade lookup(int index) const { return bindings[bindings.size() - 1 - index].second; }
  GradeContext extended(std::string hint, Grade g) const {
    GradeContext out = *this;
    out.bindings.emplace_back(std::move(hint), g);
    return out;
  }
};

// Pointwise meet C /\ Omega: truncation makes top-marked variables usable at C.
inline Context truncate_context(const Lattice& lat, const Context& omega, Grade c) {
  Context out = omega;
  for (auto& b : out.bindings) b.grade = lat.meet(c, b.grade);
  return out;
}

// PTS signature: sorts, axioms A(s1,s2), rules R(s1,s2,s3).
struct PtsSignature {
  std::vector<std::string> sorts;
  std::set<std::pair<std::string, std::string>> axioms;
  std::set<std::tuple<std::string, std::string, std::string>> rules;

  bool has_sort(const std::string& s) const {
    for (auto& x : sorts)
      if (x == s) return true;
    return false;
  }
  std::optional<std::string> axiom(const std::string& s1) const {
    for (auto& [a, b] : axioms)
      if (a == s1) return b;
    return std::nullopt;
  }
  std::optional<std::string> rule(const std::string& s1, const std::string& s2) const {
    for (auto& [a, b, c] : rules)
      if (a == s1 && b == s2) return c;
    return std::nullopt;
  }
  // Every sort needs an axiom; regularity depends on it.
  void validate() const {
    if (sorts.empty()) throw std::runtime_error("pts: no sorts declared");
    for (auto& s : sorts)
      if (!axiom(s)) throw std::runtime_error("pts: sort '" + s + "' has no axiom");
    for (auto& [a, b] : axioms)
      if (!has_sort(a) || !has_sort(b)) throw std::runtime_error("pts: axiom names unknown sort");
    for (auto& [a, b, c] : rules)
      if (!has_sort(a) || !has_sort(b) || !has_sort(c))
        throw std::runtime_error("pts: rule names unknown sort");
  }

  static PtsSignature type_in_type() {
    PtsSignature p;
    p.sorts = {"Type"};
    p.axioms = {{"Type", "Type"}};
    p.rules = {{"Type", "Type", "Type"}};
    return p;
  }

  // CoC-style instance, padded with an inert top sort so that every sort has
  // an axiom. No rule mentions Box, so it stays non-recursive.
  static PtsSignature coc() {
    PtsSignature p;
    p.sorts = {"Type", "Kind", "Box"};
    p.axioms = {{"Type", "Kind"}, {"Kind", "Box"}, {"Box", "Box"}};
    p.rules = {{"Type", "Type", "Type"},
               {"Type", "Kind", "Kind"},
               {"Kind", "Type", "Type"},
               {"Kind", "Kind", "Kind"}};
    return p;
  }
};

// Parses the PTS config format:
//   sorts: Type, Kind
//   axioms: Type : Kind
//   rules: (Type, Type, Type), (Type, Kind, Kind)
// The names `type-in-type` and `coc` select the built-in instances.
inline PtsSignature load_pts(const std::string& text) {
  using lattice_config::split_list;
  {
    std::string trimmed;
    for (char ch : text)
      if (!isspace(static_cast<unsigned char>(ch))) trimmed += ch;
    if (trimmed == "type-in-type") return PtsSignature::type_in_type();
    if (trimmed == "coc") return PtsSignature::coc();
  }
  PtsSignature p;
  for (auto& raw : split_list(text, '\n')) {
    std::string line = raw;
    size_t dash = line.find("--");
    if (dash != std::string::npos) line = line.substr(0, dash);
    size_t at = line.find_first_not_of(" \t\r");
    if (at == std::string::npos) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("pts: expected 'key: value'");
    std::string key = line.substr(at, colon - at);
    key = key.substr(0, key.find_last_not_of(" \t") + 1);
    std::string val = line.substr(colon + 1);
    if (key == "sorts") {
      for (auto& s : split_list(val, ','))
        if (!s.empty()) p.sorts.push_back(s);
    } else if (key == "axioms") {
      for (auto& ax : split_list(val, ',')) {
        if (ax.empty()) continue;
        auto parts = split_list(ax, ':');
        if (parts.size() != 2) throw std::runtime_error("pts: axiom needs 's1 : s2'");
        p.axioms.insert({parts[0], parts[1]});
      }
    } else if (key == "rules") {
      // (s1, s2, s3) triples
      std::string v = val;
      size_t pos = 0;
      while ((pos = v.find('(')) != std::string::npos) {
        size_t end = v.find(')', pos);
        if (end == std::string::npos) throw std::runtime_error("pts: unclosed rule triple");
        auto parts = split_list(v.substr(pos + 1, end - pos - 1), ',');
        if (parts.size() != 3) throw std::runtime_error("pts: rule needs three sorts");
        p.rules.insert({parts[0], parts[1], parts[2]});
        v = v.substr(end + 1);
      }
    } else {
      throw std::runtime_error("pts: unknown key '" + key + "'");
    }
  }
  p.validate();
  return p;
}

// --- fragments ---------------------------------------------------------------

enum class Fragment { Sdc, Seal, Ddc, DdcPi };

inline bool tag_in_fragment(Tag tag, Fragment f) {
  switch (tag) {
    case Tag::Var:
    case Tag::UnitTm:
    case Tag::UnitTy:
      return f != Fragment::DdcPi || tag == Tag::Var;
    case Tag::Sort:
      return f == Fragment::Ddc || f == Fragment::DdcPi;
    case Tag::SimpleArrow:
    case Tag::SimpleProd:
    case Tag::TMonad:
    case Tag::Lam:
    case Tag::App:
    case Tag::Pair:
    case Tag::Proj1:
    case Tag::Proj2:
      return f == Fragment::Sdc || f == Fragment::Seal;
    case Tag::Return:
    case Tag::Bind:
      return f == Fragment::Sdc;
    case Tag::Seal:
    case Tag::Unseal:
      return f == Fragment::Seal;
    case Tag::Pi:
    case Tag::GLam:
    case Tag::GApp:
      return f == Fragment::Ddc || f == Fragment::DdcPi;
    case Tag::Sigma:
    case Tag::GPair:
    case Tag::LetPair:
      return f == Fragment::Ddc;
    case Tag::Sum:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::Case:
      return f == Fragment::Sdc || f == Fragment::Seal || f == Fragment::Ddc;
  }
  return false;
}

inline bool in_fragment(const TermPtr& t, Fragment f) {
  if (!t) return true;
  if (!tag_in_fragment(t->tag, f)) return false;
  return in_fragment(t->a, f) && in_fragment(t->b, f) && in_fragment(t->c, f) &&
         in_fragment(t->ann, f);
}

}  // namespace gradia
