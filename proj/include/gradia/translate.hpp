#pragma once

#include <stdexcept>

#include "gradia/syntax.hpp"

namespace gradia {

struct TranslateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- sealing calculus -> SDC -------------------------------------------------

// The overline translation: homomorphic, with seal becoming eta and
// unseal^l a becoming bind^l x = a in x.
inline TermPtr seal_to_sdc(const TermPtr& a) {
  switch (a->tag) {
    case Tag::Seal:
      return ret(a->grade, seal_to_sdc(a->a));
    case Tag::Unseal:
      return bind(a->grade, seal_to_sdc(a->a), var(0, "x"));
    default:
      return map_children(*a, [&](const TermPtr& ch, int) { return seal_to_sdc(ch); });
  }
}

// --- SDC -> DDC^T -------------------------------------------------------------

// Simple types become bot-graded dependent types; the graded modality T^l A
// folds into Sigma x:^l A. Unit rather than surviving as a separate form.
inline TermPtr sdc_type_to_ddct(const Lattice& lat, const TermPtr& ty) {
  switch (ty->tag) {
    case Tag::UnitTy:
      return ty;
    case Tag::SimpleArrow:
      return pi(lat.bot(), sdc_type_to_ddct(lat, ty->a),
                shift(sdc_type_to_ddct(lat, ty->b), 1));
    case Tag::SimpleProd:
      return sigma(lat.bot(), sdc_type_to_ddct(lat, ty->a),
                   shift(sdc_type_to_ddct(lat, ty->b), 1));
    case Tag::Sum:
      return sum(sdc_type_to_ddct(lat, ty->a), sdc_type_to_ddct(lat, ty->b));
    case Tag::TMonad:
      return sigma(ty->grade, sdc_type_to_ddct(lat, ty->a), unit_ty());
    default:
      throw TranslateError("sdc_type_to_ddct: not an SDC type");
  }
}

inline TermPtr sdc_to_ddct(const Lattice& lat, const TermPtr& a) {
  switch (a->tag) {
    case Tag::Var:
    case Tag::UnitTm:
      return a;
    case Tag::Lam:
      return glam(lat.bot(), sdc_type_to_ddct(lat, a->a), sdc_to_ddct(lat, a->b),
                  a->hints[0]);
    case Tag::App:
      return gapp(sdc_to_ddct(lat, a->a), sdc_to_ddct(lat, a->b), lat.bot());
    case Tag::Pair:
      return gpair(sdc_to_ddct(lat, a->a), lat.bot(), sdc_to_ddct(lat, a->b));
    case Tag::Proj1:
      return let_pair(lat.bot(), sdc_to_ddct(lat, a->a), var(1, "x"));
    case Tag::Proj2:
      return let_pair(lat.bot(), sdc_to_ddct(lat, a->a), var(0, "y"));
    case Tag::Inj1:
    case Tag::Inj2: {
      TermPtr ann = a->ann ? sdc_type_to_ddct(lat, a->ann) : nullptr;
      return a->tag == Tag::Inj1 ? inj1(sdc_to_ddct(lat, a->a), ann)
                                 : inj2(sdc_to_ddct(lat, a->a), ann);
    }
    case Tag::Case:
      return case_of(sdc_to_ddct(lat, a->a), sdc_to_ddct(lat, a->b),
                     sdc_to_ddct(lat, a->c));
    case Tag::Return:
      return gpair(sdc_to_ddct(lat, a->a), a->grade, unit_tm());
    case Tag::Bind:
      // let (x^l, y) = a in b, where y is a fresh variable of type Unit
      return let_pair(a->grade, sdc_to_ddct(lat, a->a), shift(sdc_to_ddct(lat, a->b), 1),
                      nullptr, a->hints[0], "y_");
    default:
      throw TranslateError("sdc_to_ddct: constructor outside the SDC fragment");
  }
}

inline Context sdc_context_to_ddct(const Lattice& lat, const Context& omega) {
  Context out;
  for (auto& b : omega.bindings)
    out.bindings.push_back({b.hint, b.grade, sdc_type_to_ddct(lat, b.type)});
  return out;
}

// --- DDC (Pi fragment) -> ICC* ------------------------------------------------

// ICC* terms: relevant binders/arguments in parentheses, irrelevant ones in
// square brackets. Domains become optional so the same structure can carry
// the Curry-style image of the star erasure.
struct IccTerm;
using IccPtr = std::shared_ptr<const IccTerm>;

struct IccTerm {
  enum class Tag { Var, Sort, Pi, Lam, App } tag;
  bool relevant = true;
  int var = -1;
  std::string sort;
  IccPtr a, b;  // Pi: domain/codomain; Lam: domain(optional)/body; App: fun/arg
  std::string hint;
  int fv_bound = 0;
};

inline IccPtr icc_make(IccTerm t) {
  int fv = t.tag == IccTerm::Tag::Var ? t.var + 1 : 0;
  auto fold = [&](const IccPtr& ch, int binders) {
    if (ch && ch->fv_bound - binders > fv) fv = ch->fv_bound - binders;
  };
  int binders = (t.tag == IccTerm::Tag::Pi || t.tag == IccTerm::Tag::Lam) ? 1 : 0;
  fold(t.a, 0);
  fold(t.b, binders);
  t.fv_bound = fv;
  return std::make_shared<const IccTerm>(std::move(t));
}

inline IccPtr icc_var(int i, std::string hint = "") {
  IccTerm t;
  t.tag = IccTerm::Tag::Var;
  t.var = i;
  t.hint = std::move(hint);
  return icc_make(std::move(t));
}
inline IccPtr icc_sort(std::string s) {
  IccTerm t;
  t.tag = IccTerm::Tag::Sort;
  t.sort = std::move(s);
  return icc_make(std::move(t));
}
inline IccPtr icc_pi(bool rel, IccPtr dom, IccPtr cod, std::string hint = "x") {
  IccTerm t;
  t.tag = IccTerm::Tag::Pi;
  t.relevant = rel;
  t.a = std::move(dom);
  t.b = std::move(cod);
  t.hint = std::move(hint);
  return icc_make(std::move(t));
}
inline IccPtr icc_lam(bool rel, IccPtr dom, IccPtr body, std::string hint = "x") {
  IccTerm t;
  t.tag = IccTerm::Tag::Lam;
  t.relevant = rel;
  t.a = std::move(dom);
  t.b = std::move(body);
  t.hint = std::move(hint);
  return icc_make(std::move(t));
}
inline IccPtr icc_app(bool rel, IccPtr f, IccPtr arg) {
  IccTerm t;
  t.tag = IccTerm::Tag::App;
  t.relevant = rel;
  t.a = std::move(f);
  t.b = std::move(arg);
  return icc_make(std::move(t));
}

inline bool icc_eq(const IccPtr& x, const IccPtr& y) {
  if (x == y) return true;
  if (!x || !y) return false;
  if (x->tag != y->tag || x->relevant != y->relevant || x->var != y->var ||
      x->sort != y->sort)
    return false;
  return icc_eq(x->a, y->a) && icc_eq(x->b, y->b);
}

inline IccPtr icc_shift(const IccPtr& t, int amount, int cutoff = 0) {
  if (!t || t->fv_bound <= cutoff) return t;
  if (t->tag == IccTerm::Tag::Var)
    return t->var >= cutoff ? icc_var(t->var + amount, t->hint) : t;
  IccTerm out = *t;
  int binders = (t->tag == IccTerm::Tag::Pi || t->tag == IccTerm::Tag::Lam) ? 1 : 0;
  out.a = icc_shift(t->a, amount, cutoff);
  out.b = icc_shift(t->b, amount, cutoff + binders);
  return icc_make(std::move(out));
}

inline IccPtr icc_subst(const IccPtr& t, const IccPtr& s, int idx = 0) {
  if (!t || t->fv_bound <= idx) return t;
  if (t->tag == IccTerm::Tag::Var) {
    if (t->var == idx) return icc_shift(s, idx);
    if (t->var > idx) return icc_var(t->var - 1, t->hint);
    return t;
  }
  IccTerm out = *t;
  int binders = (t->tag == IccTerm::Tag::Pi || t->tag == IccTerm::Tag::Lam) ? 1 : 0;
  out.a = icc_subst(t->a, s, idx);
  out.b = icc_subst(t->b, s, idx + binders);
  return icc_make(std::move(out));
}

// The tilde translation: arguments at C and below become relevant, everything
// above C becomes irrelevant. Only the Pi fragment of DDC maps across.
inline IccPtr ddc_to_icc(const Lattice& lat, const TermPtr& a, Grade c) {
  auto rel = [&](Grade g) { return lat.leq(g, c); };
  switch (a->tag) {
    case Tag::Var:
      return icc_var(a->var, a->hints.empty() ? "" : a->hints[0]);
    case Tag::Sort:
      return icc_sort(a->sort);
    case Tag::Pi:
      return icc_pi(rel(a->grade), ddc_to_icc(lat, a->a, c), ddc_to_icc(lat, a->b, c),
                    a->hints[0]);
    case Tag::GLam:
      return icc_lam(rel(a->grade), ddc_to_icc(lat, a->a, c), ddc_to_icc(lat, a->b, c),
                     a->hints[0]);
    case Tag::GApp:
      return icc_app(rel(a->grade), ddc_to_icc(lat, a->a, c), ddc_to_icc(lat, a->b, c));
    default:
      throw TranslateError("ddc_to_icc: constructor outside the Pi fragment");
  }
}

inline bool uses_var0(const IccPtr& t, int idx = 0) {
  if (!t || t->fv_bound <= idx) return false;
  if (t->tag == IccTerm::Tag::Var) return t->var == idx;
  int binders = (t->tag == IccTerm::Tag::Pi || t->tag == IccTerm::Tag::Lam) ? 1 : 0;
  return uses_var0(t->a, idx) || uses_var0(t->b, idx + binders);
}

// ICC*'s erasure |.|*: strips irrelevant lambdas and irrelevant arguments and
// drops lambda domains, leaving a Curry-style core. Partial on raw syntax:
// fails when a stripped binder is still used relevantly.
inline std::optional<IccPtr> icc_star_erase(const IccPtr& t) {
  switch (t->tag) {
    case IccTerm::Tag::Var:
    case IccTerm::Tag::Sort:
      return t;
    case IccTerm::Tag::Pi: {
      auto dom = icc_star_erase(t->a);
      auto cod = icc_star_erase(t->b);
      if (!dom || !cod) return std::nullopt;
      return icc_pi(t->relevant, *dom, *cod, t->hint);
    }
    case IccTerm::Tag::Lam: {
      auto body = icc_star_erase(t->b);
      if (!body) return std::nullopt;
      if (t->relevant) return icc_lam(true, nullptr, *body, t->hint);
      if ((*body)->fv_bound > 0 && uses_var0(*body)) return std::nullopt;
      return icc_shift(*body, -1, 1);
    }
    case IccTerm::Tag::App: {
      auto f = icc_star_erase(t->a);
      if (!f) return std::nullopt;
      if (!t->relevant) return f;
      auto arg = icc_star_erase(t->b);
      if (!arg) return std::nullopt;
      return icc_app(true, *f, *arg);
    }
  }
  return std::nullopt;
}

// All single beta_ie contractions: both relevant and irrelevant redexes count
// as reduction steps in ICC*.
inline std::vector<IccPtr> icc_full_step(const IccPtr& t) {
  std::vector<IccPtr> out;
  if (t->tag == IccTerm::Tag::App && t->a->tag == IccTerm::Tag::Lam &&
      t->a->relevant == t->relevant)
    out.push_back(icc_subst(t->a->b, t->b));
  auto descend = [&](const IccPtr& child, bool into_a) {
    if (!child) return;
    for (auto& r : icc_full_step(child)) {
      IccTerm copy = *t;
      (into_a ? copy.a : copy.b) = r;
      out.push_back(icc_make(std::move(copy)));
    }
  };
  descend(t->a, true);
  descend(t->b, false);
  return out;
}

// Fuel-bounded normalization, contracting the first redex each round.
inline std::optional<IccPtr> icc_normalize(IccPtr t, int fuel) {
  for (int i = 0; i < fuel; i++) {
    auto steps = icc_full_step(t);
    if (steps.empty()) return t;
    t = steps.front();
  }
  return std::nullopt;
}

inline std::string icc_print(const IccPtr& t, std::vector<std::string> scope = {}) {
  struct P {
    std::vector<std::string> scope;
    std::string go(const IccPtr& t, int level) {
      switch (t->tag) {
        case IccTerm::Tag::Var: {
          int i = static_cast<int>(scope.size()) - 1 - t->var;
          return i >= 0 ? scope[i] : "_v" + std::to_string(t->var);
        }
        case IccTerm::Tag::Sort:
          return t->sort;
        case IccTerm::Tag::Pi: {
          std::string x = fresh(t->hint);
          std::string dom = go(t->a, 0);
          scope.push_back(x);
          std::string body = go(t->b, 0);
          scope.pop_back();
          std::string s = t->relevant ? "Pi (" + x + ":" + dom + "). " + body
                                      : "Pi [" + x + ":" + dom + "]. " + body;
          return level > 0 ? "(" + s + ")" : s;
        }
        case IccTerm::Tag::Lam: {
          std::string x = fresh(t->hint);
          std::string dom = t->a ? ":" + go(t->a, 0) : "";
          scope.push_back(x);
          std::string body = go(t->b, 0);
          scope.pop_back();
          std::string s = t->relevant ? "\\(" + x + dom + ")." + body
                                      : "\\[" + x + dom + "]." + body;
          return level > 0 ? "(" + s + ")" : s;
        }
        case IccTerm::Tag::App: {
          std::string f = go(t->a, 1);
          std::string arg = go(t->b, 0);
          std::string s = t->relevant ? f + " (" + arg + ")" : f + " [" + arg + "]";
          return level > 1 ? "(" + s + ")" : s;
        }
      }
      return "?";
    }
    std::string fresh(const std::string& hint) {
      std::string base = hint.empty() ? "x" : hint;
      std::string n = base;
      bool taken;
      do {
        taken = false;
        for (auto& s : scope)
          if (s == n) {
            taken = true;
            n += "'";
            break;
          }
      } while (taken);
      return n;
    }
  };
  P p{std::move(scope)};
  return p.go(t, 0);
}

}  // namespace gradia
