#pragma once

#include "gradia/syntax.hpp"

namespace gradia {

// Grading and indexed indistinguishability for the dependent calculi.
//
// Guarded positions follow the conditional rules: an observer l sees a
// subterm guarded at l0 only when l0 <= l. Guards appear at application
// arguments and first pair components (at the node's grade) and at pure
// typing annotations: lambda domains, ascriptions and let-pair motives,
// which are guarded at top. Pi and Sigma domains are unguarded; the types
// themselves are observable at the level they are formed at.

inline bool has_var(const TermPtr& t, int idx) {
  if (!t || t->fv_bound <= idx) return false;
  if (t->tag == Tag::Var) return t->var == idx;
  bool found = false;
  auto visit = [&](const TermPtr& ch, int binders) {
    if (!found && ch) found = has_var(ch, idx + binders);
  };
  visit(t->a, child_binders(*t, 0));
  visit(t->b, child_binders(*t, 1));
  visit(t->c, child_binders(*t, 2));
  visit(t->ann, child_binders(*t, 3));
  return found;
}

inline bool well_scoped(const TermPtr& t, int depth) { return t->fv_bound <= depth; }

inline bool ddc_grade(const Lattice& lat, const GradeContext& phi, const TermPtr& a, Grade l);

namespace ddc_detail {

// Conditional grading: graded at l when k <= l, else at l \/ k (for
// annotation slots k = top, where grading degenerates to scoping).
inline bool cond_grade(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                       Grade k, Grade l) {
  if (!a) return true;
  return ddc_grade(lat, phi, a, lat.join(l, k));
}

}  // namespace ddc_detail

inline bool ddc_grade(const Lattice& lat, const GradeContext& phi, const TermPtr& a, Grade l) {
  using ddc_detail::cond_grade;
  if (l == lat.top()) return well_scoped(a, phi.size());
  switch (a->tag) {
    case Tag::Var:
      return a->var < phi.size() && lat.leq(phi.lookup(a->var), l);
    case Tag::Sort:
    case Tag::UnitTy:
    case Tag::UnitTm:
      return true;
    case Tag::Pi:
    case Tag::Sigma:
      return ddc_grade(lat, phi, a->a, l) &&
             ddc_grade(lat, phi.extended(a->hints[0], l), a->b, l);
    case Tag::GLam:
      return cond_grade(lat, phi, a->a, lat.top(), l) &&
             ddc_grade(lat, phi.extended(a->hints[0], lat.join(a->grade, l)), a->b, l);
    case Tag::GApp:
      return ddc_grade(lat, phi, a->a, l) && cond_grade(lat, phi, a->b, a->grade, l);
    case Tag::GPair:
      return cond_grade(lat, phi, a->a, a->grade, l) && ddc_grade(lat, phi, a->b, l) &&
             cond_grade(lat, phi, a->ann, lat.top(), l);
    case Tag::LetPair: {
      GradeContext inner =
          phi.extended(a->hints[0], lat.join(a->grade, l)).extended(a->hints[1], l);
      bool motive_ok =
          !a->ann ||
          cond_grade(lat, phi.extended(a->hints.size() > 2 ? a->hints[2] : "z", l),
                     a->ann, lat.top(), l);
      return ddc_grade(lat, phi, a->a, l) && ddc_grade(lat, inner, a->b, l) && motive_ok;
    }
    case Tag::Sum:
      return ddc_grade(lat, phi, a->a, l) && ddc_grade(lat, phi, a->b, l);
    case Tag::Inj1:
    case Tag::Inj2:
      return ddc_grade(lat, phi, a->a, l) && cond_grade(lat, phi, a->ann, lat.top(), l);
    case Tag::Case:
      return ddc_grade(lat, phi, a->a, l) && ddc_grade(lat, phi, a->b, l) &&
             ddc_grade(lat, phi, a->c, l);
    default:
      return false;
  }
}

inline bool ddc_indist(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                       const TermPtr& b, Grade l);

namespace ddc_detail {

// Conditional indistinguishability CEq: recurse when the guard is visible,
// otherwise accept any well-graded pair.
inline bool cond_indist(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                        const TermPtr& b, Grade k, Grade l) {
  if (!a && !b) return true;
  if (lat.leq(k, l)) {
    if (!a || !b) return false;
    return ddc_indist(lat, phi, a, b, l);
  }
  Grade joined = lat.join(l, k);
  return (!a || ddc_grade(lat, phi, a, joined)) && (!b || ddc_grade(lat, phi, b, joined));
}

}  // namespace ddc_detail

inline bool ddc_indist(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                       const TermPtr& b, Grade l) {
  using ddc_detail::cond_indist;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Var:
      return a->var == b->var && a->var < phi.size() && lat.leq(phi.lookup(a->var), l);
    case Tag::Sort:
      return a->sort == b->sort;
    case Tag::UnitTy:
    case Tag::UnitTm:
      return true;
    case Tag::Pi:
    case Tag::Sigma:
      return a->grade == b->grade && ddc_indist(lat, phi, a->a, b->a, l) &&
             ddc_indist(lat, phi.extended(a->hints[0], l), a->b, b->b, l);
    case Tag::GLam:
      return a->grade == b->grade &&
             cond_indist(lat, phi, a->a, b->a, lat.top(), l) &&
             ddc_indist(lat, phi.extended(a->hints[0], lat.join(a->grade, l)), a->b, b->b, l);
    case Tag::GApp:
      return a->grade == b->grade && ddc_indist(lat, phi, a->a, b->a, l) &&
             cond_indist(lat, phi, a->b, b->b, a->grade, l);
    case Tag::GPair:
      return a->grade == b->grade && cond_indist(lat, phi, a->a, b->a, a->grade, l) &&
             ddc_indist(lat, phi, a->b, b->b, l) &&
             cond_indist(lat, phi, a->ann, b->ann, lat.top(), l);
    case Tag::LetPair: {
      if (a->grade != b->grade) return false;
      GradeContext inner =
          phi.extended(a->hints[0], lat.join(a->grade, l)).extended(a->hints[1], l);
      GradeContext mctx = phi.extended(a->hints.size() > 2 ? a->hints[2] : "z", l);
      return ddc_indist(lat, phi, a->a, b->a, l) && ddc_indist(lat, inner, a->b, b->b, l) &&
             cond_indist(lat, mctx, a->ann, b->ann, lat.top(), l);
    }
    case Tag::Sum:
      return ddc_indist(lat, phi, a->a, b->a, l) && ddc_indist(lat, phi, a->b, b->b, l);
    case Tag::Inj1:
    case Tag::Inj2:
      return ddc_indist(lat, phi, a->a, b->a, l) &&
             cond_indist(lat, phi, a->ann, b->ann, lat.top(), l);
    case Tag::Case:
      return ddc_indist(lat, phi, a->a, b->a, l) && ddc_indist(lat, phi, a->b, b->b, l) &&
             ddc_indist(lat, phi, a->c, b->c, l);
    default:
      return false;
  }
}

// Grade-indexed erasure: replaces what an l-user cannot see with unit.
// Application arguments and first pair components guarded above l become
// unit; annotation slots guarded above l are dropped (lambda domains keep a
// Unit placeholder). At top the function is the identity.
inline TermPtr erase(const Lattice& lat, const TermPtr& a, Grade l) {
  bool keep_ann = lat.leq(lat.top(), l);
  switch (a->tag) {
    case Tag::Var:
    case Tag::Sort:
    case Tag::UnitTy:
    case Tag::UnitTm:
      return a;
    case Tag::GLam: {
      Term t = *a;
      t.a = keep_ann ? erase(lat, a->a, l) : unit_ty();
      t.b = erase(lat, a->b, l);
      return make_term(std::move(t));
    }
    case Tag::GApp: {
      Term t = *a;
      t.a = erase(lat, a->a, l);
      t.b = lat.leq(a->grade, l) ? erase(lat, a->b, l) : unit_tm();
      return make_term(std::move(t));
    }
    case Tag::GPair: {
      Term t = *a;
      t.a = lat.leq(a->grade, l) ? erase(lat, a->a, l) : unit_tm();
      t.b = erase(lat, a->b, l);
      t.ann = keep_ann && a->ann ? erase(lat, a->ann, l) : nullptr;
      return make_term(std::move(t));
    }
    case Tag::Inj1:
    case Tag::Inj2: {
      Term t = *a;
      t.a = erase(lat, a->a, l);
      t.ann = keep_ann && a->ann ? erase(lat, a->ann, l) : nullptr;
      return make_term(std::move(t));
    }
    case Tag::LetPair: {
      Term t = *a;
      t.a = erase(lat, a->a, l);
      t.b = erase(lat, a->b, l);
      t.ann = keep_ann && a->ann ? erase(lat, a->ann, l) : nullptr;
      return make_term(std::move(t));
    }
    default: {
      // Pi, Sigma, Sum, Case: fully homomorphic
      return map_children(*a, [&](const TermPtr& ch, int) { return erase(lat, ch, l); });
    }
  }
}

}  // namespace gradia
