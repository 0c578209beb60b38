#pragma once

#include "gradia/harness.hpp"
#include "gradia/sdc.hpp"

namespace gradia {

// Type-directed random generation of well-typed terms. Inhabitants are built
// by inverting the typing rules with a soft size budget; every emitted tuple
// re-checks. Generation is biased toward redexes so that the operational
// suites actually step.

struct GeneratedTerm {
  Context omega;
  TermPtr term;
  Grade level{};
  TermPtr type;
};

class SdcGen {
 public:
  SdcGen(const Lattice& lat, bool sealing = false) : lat_(lat), sealing_(sealing) {}

  TermPtr gen_type(Rng& rng, int budget) {
    if (budget <= 1 || rng.chance(40)) return unit_ty();
    switch (rng.pick(4)) {
      case 0:
        return tmonad(random_grade(rng), gen_type(rng, budget - 1));
      case 1:
        return arrow(gen_type(rng, budget / 2), gen_type(rng, budget / 2));
      case 2:
        return prod(gen_type(rng, budget / 2), gen_type(rng, budget / 2));
      default:
        return sum(gen_type(rng, budget / 2), gen_type(rng, budget / 2));
    }
  }

  Grade random_grade(Rng& rng) {
    auto all = lat_.all();
    return all[rng.pick(static_cast<int>(all.size()))];
  }

  // A term of the given type at observer l under omega; nullopt only on
  // pathological budget exhaustion (callers retry).
  std::optional<TermPtr> gen(Rng& rng, const Context& omega, const TermPtr& ty, Grade l,
                             int budget) {
    if (depth_ > 64) return std::nullopt;
    depth_++;
    auto out = gen_inner(rng, omega, ty, l, budget);
    depth_--;
    return out;
  }

  std::optional<GeneratedTerm> gen_closed(Rng& rng, Grade l, int budget) {
    TermPtr ty = gen_type(rng, 3 + rng.pick(3));
    auto t = gen(rng, {}, ty, l, budget);
    if (!t) return std::nullopt;
    return emit({}, *t, l, ty);
  }

  std::optional<GeneratedTerm> gen_open(Rng& rng, Grade l, int budget, int free_vars) {
    Context omega;
    for (int i = 0; i < free_vars; i++)
      omega = omega.extended("v" + std::to_string(i), random_grade(rng),
                             gen_type(rng, 2 + rng.pick(2)));
    TermPtr ty = gen_type(rng, 3 + rng.pick(3));
    auto t = gen(rng, omega, ty, l, budget);
    if (!t) return std::nullopt;
    return emit(std::move(omega), *t, l, ty);
  }

  // every emitted tuple re-checks; a generator bug surfaces as GenerationStuck
  std::optional<GeneratedTerm> emit(Context omega, TermPtr t, Grade l, TermPtr ty) {
    TypeResult chk = sealing_ ? seal_check(lat_, omega, t, l) : sdc_check(lat_, omega, t, l);
    if (!chk.ok() || !term_eq(chk.type, ty)) return std::nullopt;
    return GeneratedTerm{std::move(omega), std::move(t), l, std::move(ty)};
  }

 private:
  std::optional<TermPtr> gen_inner(Rng& rng, const Context& omega, const TermPtr& ty,
                                   Grade l, int budget) {
    // a context variable of the right type, visible at l
    if (rng.chance(35)) {
      std::vector<int> hits;
      for (int i = 0; i < omega.size(); i++) {
        const auto& b = omega.lookup(i);
        if (lat_.leq(b.grade, l) && term_eq(shift(b.type, i + 1), ty)) hits.push_back(i);
      }
      if (!hits.empty()) {
        int i = hits[rng.pick(static_cast<int>(hits.size()))];
        return var(i, omega.lookup(i).hint);
      }
    }
    // an eliminator that immediately computes: beta, bind-beta, proj, case
    if (budget > 4 && rng.chance(35)) {
      switch (rng.pick(sealing_ ? 3 : 4)) {
        case 0: {  // (\x:A. body) arg
          TermPtr a = gen_type(rng, 2);
          auto arg = gen(rng, omega, a, l, budget / 3);
          auto body = gen(rng, omega.extended("x", l, a), shift(ty, 1), l, budget / 2);
          if (arg && body) return app(lam(a, *body), *arg);
          break;
        }
        case 1: {  // pi1 (pair)
          TermPtr other = gen_type(rng, 2);
          bool first = rng.chance(50);
          auto p = gen(rng, omega, first ? prod(ty, other) : prod(other, ty), l,
                       budget - 2);
          if (p) return first ? proj1(*p) : proj2(*p);
          break;
        }
        case 2: {  // case (inj ...) of branches
          TermPtr a = gen_type(rng, 2), b = gen_type(rng, 2);
          auto scrut = gen(rng, omega, sum(a, b), l, budget / 3);
          auto b1 = gen(rng, omega, arrow(a, ty), l, budget / 3);
          auto b2 = gen(rng, omega, arrow(b, ty), l, budget / 3);
          if (scrut && b1 && b2) return case_of(*scrut, *b1, *b2);
          break;
        }
        case 3: {  // bind^g x = eta^g ... in body
          Grade g = random_grade(rng);
          TermPtr a = gen_type(rng, 2);
          auto rhs = gen(rng, omega, tmonad(g, a), l, budget / 3);
          auto body =
              gen(rng, omega.extended("x", lat_.join(l, g), a), shift(ty, 1), l, budget / 2);
          if (rhs && body) return bind(g, *rhs, *body);
          break;
        }
      }
    }
    // introduction form directed by the target type
    switch (ty->tag) {
      case Tag::UnitTy:
        return unit_tm();
      case Tag::SimpleArrow: {
        auto body = gen(rng, omega.extended("x", l, ty->a), shift(ty->b, 1), l, budget - 1);
        if (!body) return std::nullopt;
        return lam(ty->a, *body);
      }
      case Tag::SimpleProd: {
        auto x = gen(rng, omega, ty->a, l, budget / 2);
        auto y = gen(rng, omega, ty->b, l, budget / 2);
        if (!x || !y) return std::nullopt;
        return pair(*x, *y);
      }
      case Tag::Sum: {
        bool left = rng.chance(50);
        auto body = gen(rng, omega, left ? ty->a : ty->b, l, budget - 4);
        if (!body) return std::nullopt;
        return left ? inj1(*body, ty) : inj2(*body, ty);
      }
      case Tag::TMonad: {
        auto body = gen(rng, omega, ty->a, lat_.join(l, ty->grade), budget - 1);
        if (!body) return std::nullopt;
        return sealing_ ? seal(ty->grade, *body) : ret(ty->grade, *body);
      }
      default:
        return std::nullopt;
    }
  }

  const Lattice& lat_;
  bool sealing_;
  int depth_ = 0;
};

// DDC generation: an SDC backbone embedded through the translation, then
// optionally wrapped in irrelevantly-graded applications (the phantom
// pattern). Everything re-checks before being emitted.
class DdcGen {
 public:
  explicit DdcGen(const DdcConfig& cfg) : cfg_(cfg), sdc_(*cfg.lattice) {}

  std::optional<GeneratedTerm> gen_closed(Rng& rng, Grade l, int budget) {
    const Lattice& lat = *cfg_.lattice;
    if (!lat.leq(l, lat.c())) return std::nullopt;
    auto base = sdc_.gen_closed(rng, l, budget);
    if (!base) return std::nullopt;
    TermPtr term, ty;
    try {
      term = sdc_to_ddct(lat, base->term);
      ty = sdc_type_to_ddct(lat, base->type);
    } catch (const TranslateError&) {
      return std::nullopt;
    }
    // phantom wrappers: apply a constant function to an argument graded
    // above the eventual observer
    int wraps = rng.pick(3);
    for (int i = 0; i < wraps; i++) {
      Grade g = rng.chance(60) ? lat.top() : lat.c();
      TermPtr arg_ty = rng.chance(50) ? unit_ty() : TermPtr(sum(unit_ty(), unit_ty()));
      auto arg = sdc_.gen(rng, {}, arg_ty, lat.leq(g, lat.c()) ? g : lat.c(), 4);
      TermPtr arg_tm;
      try {
        arg_tm = arg ? sdc_to_ddct(lat, *arg) : unit_tm();
      } catch (const TranslateError&) {
        arg_tm = unit_tm();
      }
      if (arg_ty->tag == Tag::UnitTy && !arg) arg_tm = unit_tm();
      term = gapp(glam(g, arg_ty, shift(term, 1), "ph"), arg_tm, g);
    }
    auto recheck = ddc_check(cfg_, {}, term, l);
    if (!recheck.ok()) return std::nullopt;
    return GeneratedTerm{{}, term, l, recheck.type};
  }

  std::optional<GeneratedTerm> gen_open(Rng& rng, Grade l, int budget, int free_vars) {
    const Lattice& lat = *cfg_.lattice;
    auto base = sdc_.gen_open(rng, l, budget, free_vars);
    if (!base) return std::nullopt;
    try {
      Context omega = sdc_context_to_ddct(lat, base->omega);
      TermPtr term = sdc_to_ddct(lat, base->term);
      auto recheck = ddc_check(cfg_, omega, term, l);
      if (!recheck.ok()) return std::nullopt;
      return GeneratedTerm{omega, term, l, recheck.type};
    } catch (const TranslateError&) {
      return std::nullopt;
    }
  }

  SdcGen& sdc() { return sdc_; }

 private:
  const DdcConfig& cfg_;
  SdcGen sdc_;
};

// --- indistinguishable-pair generation -----------------------------------------

// Mutation rewrites subterms in positions the conditional rules mark
// unobservable at k: eta/seal bodies in the simple calculi, application
// arguments and first pair components in the dependent one.

namespace mutate_detail {

inline TermPtr closed_filler(Rng& rng, const Lattice& lat, Fragment frag) {
  switch (rng.pick(5)) {
    case 0:
      return unit_tm();
    case 1:
      return frag == Fragment::Ddc ? TermPtr(glam(lat.bot(), unit_ty(), var(0)))
                                   : TermPtr(lam(unit_ty(), var(0)));
    case 2:
      return frag == Fragment::Ddc ? TermPtr(gpair(unit_tm(), lat.bot(), unit_tm()))
                                   : TermPtr(pair(unit_tm(), unit_tm()));
    case 3:
      return inj1(unit_tm(), frag == Fragment::Ddc ? nullptr
                                                   : TermPtr(sum(unit_ty(), unit_ty())));
    default:
      return frag == Fragment::Ddc
                 ? TermPtr(gapp(glam(lat.bot(), unit_ty(), var(0)), unit_tm(), lat.bot()))
                 : TermPtr(app(lam(unit_ty(), var(0)), unit_tm()));
  }
}

// Counts positions whose guard is invisible at k.
inline int count_points(const Lattice& lat, const TermPtr& t, Grade k, Fragment frag) {
  int n = 0;
  bool guard_here = false;
  if (frag == Fragment::Ddc) {
    guard_here = (t->tag == Tag::GApp || t->tag == Tag::GPair) && !lat.leq(t->grade, k);
  } else {
    guard_here = (t->tag == Tag::Return || t->tag == Tag::Seal) && !lat.leq(t->grade, k);
  }
  if (guard_here) n++;
  auto visit = [&](const TermPtr& ch) {
    if (ch) n += count_points(lat, ch, k, frag);
  };
  visit(t->a);
  visit(t->b);
  visit(t->c);
  return n;
}

inline TermPtr replace_nth(Rng& rng, const Lattice& lat, const TermPtr& t, Grade k,
                           Fragment frag, int& n) {
  bool guard_here = false;
  if (frag == Fragment::Ddc) {
    guard_here = (t->tag == Tag::GApp || t->tag == Tag::GPair) && !lat.leq(t->grade, k);
  } else {
    guard_here = (t->tag == Tag::Return || t->tag == Tag::Seal) && !lat.leq(t->grade, k);
  }
  if (guard_here) {
    if (n == 0) {
      n = -1;
      Term copy = *t;
      TermPtr filler = closed_filler(rng, lat, frag);  // closed: scope-independent
      // guarded slot: GApp argument is child b, the others child a
      if (t->tag == Tag::GApp)
        copy.b = filler;
      else
        copy.a = filler;
      return make_term(std::move(copy));
    }
    n--;
  }
  Term copy = *t;
  bool changed = false;
  auto walk = [&](TermPtr& slot, const TermPtr& ch) {
    if (!ch || n < 0 || changed) return;
    TermPtr r = replace_nth(rng, lat, ch, k, frag, n);
    if (n < 0) {
      slot = r;
      changed = true;
    }
  };
  walk(copy.a, t->a);
  if (!changed) walk(copy.b, t->b);
  if (!changed) walk(copy.c, t->c);
  if (!changed) return t;
  return make_term(std::move(copy));
}

}  // namespace mutate_detail

// Rewrites one unobservable-at-k subterm with fresh closed garbage; returns
// nullopt when every position is visible. The result is indistinguishable
// from the input at k whenever the input is well-graded.
inline std::optional<TermPtr> mutate_unobservable(Rng& rng, const Lattice& lat,
                                                  const TermPtr& t, Grade k, Fragment frag) {
  int total = mutate_detail::count_points(lat, t, k, frag);
  if (total == 0) return std::nullopt;
  int n = rng.pick(total);
  TermPtr out = mutate_detail::replace_nth(rng, lat, t, k, frag, n);
  return out;
}

}  // namespace gradia
