#pragma once

#include <atomic>
#include <deque>

#include "gradia/ddc_indist.hpp"
#include "gradia/syntax.hpp"

namespace gradia {

// Maximal parallel reduct at observer l: every visible redex is contracted
// simultaneously, recursing under binders. Subterms in positions guarded by
// some l0 with l0 </= l stay untouched (CPar-Nleq); normal forms map to
// themselves (Par-Refl). The reduct does not depend on Phi, only on l.
inline TermPtr par_step(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                        Grade l) {
  (void)phi;
  bool see_ann = lat.leq(lat.top(), l);
  auto cond = [&](const TermPtr& t, Grade guard) {
    return lat.leq(guard, l) ? par_step(lat, phi, t, l) : t;
  };
  auto cond_slot = [&](const TermPtr& t) -> TermPtr {
    return (t && see_ann) ? par_step(lat, phi, t, l) : t;
  };
  switch (a->tag) {
    case Tag::Var:
    case Tag::Sort:
    case Tag::UnitTy:
    case Tag::UnitTm:
      return a;
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::Sum: {
      Term t = *a;
      t.a = par_step(lat, phi, a->a, l);
      t.b = par_step(lat, phi, a->b, l);
      return make_term(std::move(t));
    }
    case Tag::GLam: {
      Term t = *a;
      t.a = see_ann ? par_step(lat, phi, a->a, l) : a->a;
      t.b = par_step(lat, phi, a->b, l);
      return make_term(std::move(t));
    }
    case Tag::GApp: {
      if (a->a->tag == Tag::GLam && a->a->grade == a->grade)
        return subst(par_step(lat, phi, a->a->b, l), cond(a->b, a->grade));
      Term t = *a;
      t.a = par_step(lat, phi, a->a, l);
      t.b = cond(a->b, a->grade);
      return make_term(std::move(t));
    }
    case Tag::GPair: {
      Term t = *a;
      t.a = cond(a->a, a->grade);
      t.b = par_step(lat, phi, a->b, l);
      t.ann = cond_slot(a->ann);
      return make_term(std::move(t));
    }
    case Tag::LetPair: {
      if (a->a->tag == Tag::GPair && a->a->grade == a->grade) {
        TermPtr body = par_step(lat, phi, a->b, l);
        TermPtr snd = par_step(lat, phi, a->a->b, l);
        TermPtr fst = cond(a->a->a, a->grade);
        return subst(subst(body, shift(snd, 1), 0), fst, 0);
      }
      Term t = *a;
      t.a = par_step(lat, phi, a->a, l);
      t.b = par_step(lat, phi, a->b, l);
      t.ann = cond_slot(a->ann);
      return make_term(std::move(t));
    }
    case Tag::Inj1:
    case Tag::Inj2: {
      Term t = *a;
      t.a = par_step(lat, phi, a->a, l);
      t.ann = cond_slot(a->ann);
      return make_term(std::move(t));
    }
    case Tag::Case: {
      if (a->a->tag == Tag::Inj1)
        return gapp(par_step(lat, phi, a->b, l), par_step(lat, phi, a->a->a, l), lat.bot());
      if (a->a->tag == Tag::Inj2)
        return gapp(par_step(lat, phi, a->c, l), par_step(lat, phi, a->a->a, l), lat.bot());
      Term t = *a;
      t.a = par_step(lat, phi, a->a, l);
      t.b = par_step(lat, phi, a->b, l);
      t.c = par_step(lat, phi, a->c, l);
      return make_term(std::move(t));
    }
    default:
      return a;  // outside the dependent fragment: leave as is
  }
}

enum class Verdict { Equal, NotEqual, FuelExhausted };

struct JoinResult {
  Verdict verdict = Verdict::FuelExhausted;
  TermPtr witness_left, witness_right;  // indistinguishable reducts on Equal
  int steps_used = 0;

  bool equal() const { return verdict == Verdict::Equal; }
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Equal: return "Equal";
    case Verdict::NotEqual: return "NotEqual";
    case Verdict::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

// Definitional equality at l, decided by joinability: run the two parallel
// reduction chains and look for an indistinguishable pair among the
// intermediate reducts. The chains are compared pairwise over a sliding
// window of the last `window` reducts per side to bound memory; full chains
// are kept when debug_full_chains is set.
inline JoinResult def_eq(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                         const TermPtr& b, Grade l, int fuel,
                         const std::atomic<bool>* cancel = nullptr, int window = 8,
                         bool debug_full_chains = false) {
  JoinResult out;
  if (ddc_indist(lat, phi, a, b, l)) {
    out.verdict = Verdict::Equal;
    out.witness_left = a;
    out.witness_right = b;
    out.steps_used = 0;
    return out;
  }
  std::deque<TermPtr> left{a}, right{b};
  TermPtr la = a, rb = b;
  bool left_fixed = false, right_fixed = false;
  for (int round = 1; round <= fuel; round++) {
    if (cancel && cancel->load(std::memory_order_relaxed)) {
      out.steps_used = round - 1;
      return out;  // cooperative cancellation reports as fuel exhaustion
    }
    out.steps_used = round;
    if (!left_fixed) {
      TermPtr next = par_step(lat, phi, la, l);
      if (term_eq(next, la)) {
        left_fixed = true;
      } else {
        la = next;
        left.push_back(la);
        if (!debug_full_chains && static_cast<int>(left.size()) > window) left.pop_front();
        for (auto& r : right)
          if (ddc_indist(lat, phi, la, r, l)) {
            out.verdict = Verdict::Equal;
            out.witness_left = la;
            out.witness_right = r;
            return out;
          }
      }
    }
    if (!right_fixed) {
      TermPtr next = par_step(lat, phi, rb, l);
      if (term_eq(next, rb)) {
        right_fixed = true;
      } else {
        rb = next;
        right.push_back(rb);
        if (!debug_full_chains && static_cast<int>(right.size()) > window) right.pop_front();
        for (auto& lterm : left)
          if (ddc_indist(lat, phi, lterm, rb, l)) {
            out.verdict = Verdict::Equal;
            out.witness_left = lterm;
            out.witness_right = rb;
            return out;
          }
      }
    }
    if (left_fixed && right_fixed) {
      out.verdict = Verdict::NotEqual;
      return out;
    }
  }
  return out;  // FuelExhausted
}

inline bool is_head_form(const TermPtr& a) {
  switch (a->tag) {
    case Tag::Sort:
    case Tag::UnitTy:
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::Sum:
      return true;
    default:
      return false;
  }
}

// Consistent head forms: only a pair of distinct head constructors is
// inconsistent; anything that can still step is consistent with everything.
inline bool consistent(const TermPtr& a, const TermPtr& b) {
  if (!is_head_form(a) || !is_head_form(b)) return true;
  if (a->tag != b->tag) return false;
  if (a->tag == Tag::Sort) return a->sort == b->sort;
  return true;
}

}  // namespace gradia
