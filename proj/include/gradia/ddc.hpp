#pragma once

#include <atomic>

#include "gradia/equality.hpp"
#include "gradia/sdc.hpp"

namespace gradia {

// Instance data for the dependent checker: the lattice (with its designated
// C), the PTS signature and the fuel bound shared by weak-head normalization
// and conversion.
struct DdcConfig {
  const Lattice* lattice = nullptr;
  PtsSignature pts;
  int fuel = 1000;
  const std::atomic<bool>* cancel = nullptr;

  Grade c() const { return lattice->c(); }
};

inline bool ddc_value(const TermPtr& a) {
  switch (a->tag) {
    case Tag::Sort:
    case Tag::UnitTy:
    case Tag::Pi:
    case Tag::Sigma:
    case Tag::Sum:  // value types
    case Tag::UnitTm:
    case Tag::GLam:
    case Tag::GPair:
    case Tag::Inj1:
    case Tag::Inj2:
      return true;
    default:
      return false;
  }
}

// Deterministic CBN step; nullopt on values and stuck terms.
inline std::optional<TermPtr> ddc_step(const Lattice& lat, const TermPtr& a) {
  switch (a->tag) {
    case Tag::GApp: {
      if (auto f = ddc_step(lat, a->a)) return gapp(*f, a->b, a->grade);
      if (a->a->tag == Tag::GLam && a->a->grade == a->grade) return subst(a->a->b, a->b);
      return std::nullopt;
    }
    case Tag::Case: {
      if (auto s = ddc_step(lat, a->a)) return case_of(*s, a->b, a->c);
      if (a->a->tag == Tag::Inj1) return gapp(a->b, a->a->a, lat.bot());
      if (a->a->tag == Tag::Inj2) return gapp(a->c, a->a->a, lat.bot());
      return std::nullopt;
    }
    case Tag::LetPair: {
      if (auto s = ddc_step(lat, a->a)) {
        Term t = *a;
        t.a = *s;
        return make_term(std::move(t));
      }
      if (a->a->tag == Tag::GPair && a->a->grade == a->grade) {
        TermPtr with_y = subst(a->b, shift(a->a->b, 1), 0);
        return subst(with_y, a->a->a, 0);
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

namespace ddc_detail {

struct Checker {
  const DdcConfig& cfg;
  Trace* trace;

  const Lattice& lat() const { return *cfg.lattice; }

  TypeResult err(std::string rule, const std::string& path, std::string msg,
                 std::string expected = "", std::string found = "") {
    return TypeResult::fail({std::move(rule), path, std::move(expected), std::move(found),
                             std::move(msg)});
  }

  std::string show(const TermPtr& t, const Context& omega) {
    return print(t, lat(), sdc_detail::ctx_names(omega));
  }

  void note(const Context& omega, const char* rule, const TermPtr& a, Grade l) {
    if (!trace) return;
    trace->note(std::string(rule) + ": " + sdc_detail::show_ctx(lat(), omega) + " |- " +
                show(a, omega) + " :^" + lat().name(l));
  }

  struct Depth {
    Trace* t;
    explicit Depth(Trace* t) : t(t) {
      if (t) t->depth++;
    }
    ~Depth() {
      if (t) t->depth--;
    }
  };

  // Fuel-bounded weak-head normalization; exhaustion is its own error and is
  // never reported as a shape mismatch.
  std::optional<TermPtr> whnf(TermPtr t, const std::string& path, TypeResult& fail_out) {
    for (int i = 0; i < cfg.fuel; i++) {
      auto next = ddc_step(lat(), t);
      if (!next) return t;
      t = *next;
    }
    if (!ddc_step(lat(), t)) return t;
    fail_out = err("FuelExhausted", path, "weak-head normalization ran out of fuel");
    return std::nullopt;
  }

  // Conversion at grade C by joinability.
  bool convert(const Context& omega, const TermPtr& got, const TermPtr& want,
               const std::string& path, TypeResult& fail_out) {
    GradeContext phi = GradeContext::of(omega);
    JoinResult r = def_eq(lat(), phi, got, want, cfg.c(), cfg.fuel, cfg.cancel);
    if (r.verdict == Verdict::Equal) return true;
    if (r.verdict == Verdict::FuelExhausted) {
      fail_out = err("FuelExhausted", path, "conversion ran out of fuel");
      return false;
    }
    fail_out = err("ConversionFailed", path, "types are not definitionally equal at C",
                   show(want, omega), show(got, omega));
    return false;
  }

  // The truncated-at-top judgment: a demanded level of top checks at C under
  // C /\ Omega; any other level checks directly.
  TypeResult check_truncated(const Context& omega, const TermPtr& a, Grade demanded,
                             const std::string& path) {
    if (demanded == lat().top() && !(lat().top() == cfg.c())) {
      Context truncated = truncate_context(lat(), omega, cfg.c());
      if (trace) {
        trace->note("CT-Top: truncate to C /\\ Omega = " +
                    sdc_detail::show_ctx(lat(), truncated));
      }
      return check(truncated, a, cfg.c(), path);
    }
    return check(omega, a, demanded, path);
  }

  // Demands that `ty` is well-formed at the truncated top judgment, i.e.
  // classifiable by some sort; returns that sort name.
  std::optional<std::string> type_wf(const Context& omega, const TermPtr& ty,
                                     const std::string& path, TypeResult& fail_out) {
    TypeResult k = check_truncated(omega, ty, lat().top(), path);
    if (!k.ok()) {
      fail_out = k;
      return std::nullopt;
    }
    auto head = whnf(k.type, path, fail_out);
    if (!head) return std::nullopt;
    if ((*head)->tag != Tag::Sort) {
      fail_out = err("NotAType", path, "expression is not classified by a sort", "a sort",
                     show(*head, omega));
      return std::nullopt;
    }
    return (*head)->sort;
  }

  TypeResult check(const Context& omega, const TermPtr& a, Grade l, const std::string& path) {
    if (!lat().leq(l, cfg.c()))
      return err("LevelAboveC", path, "no judgment is derivable above C",
                 "level <= " + lat().name(cfg.c()), lat().name(l));
    switch (a->tag) {
      case Tag::Var: {
        note(omega, "T-Var", a, l);
        if (a->var >= omega.size())
          return err("T-Var", path, "unbound variable index " + std::to_string(a->var));
        const ContextBinding& b = omega.lookup(a->var);
        if (!lat().leq(b.grade, l))
          return err("VarGradeTooHigh", path,
                     "variable '" + b.hint + "' is graded above the observer",
                     "grade <= " + lat().name(l), lat().name(b.grade));
        return TypeResult::success(shift(b.type, a->var + 1));
      }
      case Tag::Sort: {
        note(omega, "T-Type", a, l);
        auto s2 = cfg.pts.axiom(a->sort);
        if (!s2) return err("NoAxiom", path, "sort '" + a->sort + "' has no axiom");
        return TypeResult::success(sort(*s2));
      }
      case Tag::UnitTy:
        note(omega, "T-TyUnit", a, l);
        return TypeResult::success(sort(cfg.pts.sorts.front()));
      case Tag::UnitTm:
        note(omega, "T-TmUnit", a, l);
        return TypeResult::success(unit_ty());
      case Tag::Pi:
      case Tag::Sigma: {
        bool is_pi = a->tag == Tag::Pi;
        note(omega, is_pi ? "T-Pi" : "T-WSigma", a, l);
        Depth d(trace);
        TypeResult fail_out;
        TypeResult ta = check(omega, a->a, l, path + ".domain");
        if (!ta.ok()) return ta;
        auto s1 = whnf(ta.type, path + ".domain", fail_out);
        if (!s1) return fail_out;
        if ((*s1)->tag != Tag::Sort)
          return err("NotAType", path + ".domain", "domain is not a type", "a sort",
                     show(*s1, omega));
        TypeResult tb =
            check(omega.extended(a->hints[0], l, a->a), a->b, l, path + ".codomain");
        if (!tb.ok()) return tb;
        auto s2 = whnf(tb.type, path + ".codomain", fail_out);
        if (!s2) return fail_out;
        if ((*s2)->tag != Tag::Sort)
          return err("NotAType", path + ".codomain", "codomain is not a type", "a sort",
                     print(*s2, lat()));
        auto s3 = cfg.pts.rule((*s1)->sort, (*s2)->sort);
        if (!s3)
          return err("NoRule", path,
                     "no rule for (" + (*s1)->sort + ", " + (*s2)->sort + ")");
        return TypeResult::success(sort(*s3));
      }
      case Tag::GLam: {
        note(omega, "T-AbsC", a, l);
        Depth d(trace);
        TypeResult body = check(omega.extended(a->hints[0], lat().join(a->grade, l), a->a),
                                a->b, l, path + ".body");
        if (!body.ok()) return body;
        TermPtr pity = pi(a->grade, a->a, body.type, a->hints[0]);
        TypeResult fail_out;
        if (!type_wf(omega, pity, path + ".pi", fail_out)) return fail_out;
        return TypeResult::success(pity);
      }
      case Tag::GApp: {
        note(omega, "T-AppC", a, l);
        Depth d(trace);
        TypeResult fun = check(omega, a->a, l, path + ".fun");
        if (!fun.ok()) return fun;
        TypeResult fail_out;
        auto head = whnf(fun.type, path + ".fun", fail_out);
        if (!head) return fail_out;
        if ((*head)->tag != Tag::Pi)
          return err("T-AppC", path, "application head is not a function", "a Pi type",
                     show(*head, omega));
        if ((*head)->grade != a->grade)
          return err("T-AppC", path, "application grade disagrees with the Pi type",
                     lat().name((*head)->grade), lat().name(a->grade));
        Grade demanded = lat().join(a->grade, l);
        TypeResult arg = check_truncated(omega, a->b, demanded, path + ".arg");
        if (!arg.ok()) return arg;
        if (!convert(omega, arg.type, (*head)->a, path + ".arg", fail_out)) return fail_out;
        return TypeResult::success(subst((*head)->b, a->b));
      }
      case Tag::GPair: {
        note(omega, "T-WPairC", a, l);
        Depth d(trace);
        TypeResult fail_out;
        Grade demanded = lat().join(a->grade, l);
        if (a->ann) {
          if (!type_wf(omega, a->ann, path + ".ascription", fail_out)) return fail_out;
          auto sig = whnf(a->ann, path + ".ascription", fail_out);
          if (!sig) return fail_out;
          if ((*sig)->tag != Tag::Sigma)
            return err("T-WPairC", path, "pair ascription is not a Sigma type",
                       "a Sigma type", show(*sig, omega));
          if ((*sig)->grade != a->grade)
            return err("T-WPairC", path, "pair grade disagrees with the Sigma type",
                       lat().name((*sig)->grade), lat().name(a->grade));
          TypeResult fst = check_truncated(omega, a->a, demanded, path + ".fst");
          if (!fst.ok()) return fst;
          if (!convert(omega, fst.type, (*sig)->a, path + ".fst", fail_out)) return fail_out;
          TypeResult snd = check(omega, a->b, l, path + ".snd");
          if (!snd.ok()) return snd;
          TermPtr want = subst((*sig)->b, a->a);
          if (!convert(omega, snd.type, want, path + ".snd", fail_out)) return fail_out;
          return TypeResult::success(a->ann);
        }
        TypeResult fst = check_truncated(omega, a->a, demanded, path + ".fst");
        if (!fst.ok()) return fst;
        TypeResult snd = check(omega, a->b, l, path + ".snd");
        if (!snd.ok()) return snd;
        TermPtr sig = sigma(a->grade, fst.type, shift(snd.type, 1));
        if (!type_wf(omega, sig, path, fail_out)) return fail_out;
        return TypeResult::success(sig);
      }
      case Tag::LetPair: {
        note(omega, a->ann ? "T-LetPairCA" : "T-LetPairC", a, l);
        Depth d(trace);
        TypeResult fail_out;
        TypeResult ts = check(omega, a->a, l, path + ".scrutinee");
        if (!ts.ok()) return ts;
        auto sig = whnf(ts.type, path + ".scrutinee", fail_out);
        if (!sig) return fail_out;
        if ((*sig)->tag != Tag::Sigma)
          return err("T-LetPairC", path, "let-pair scrutinee is not a pair", "a Sigma type",
                     show(*sig, omega));
        if ((*sig)->grade != a->grade)
          return err("T-LetPairC", path, "pattern grade disagrees with the Sigma type",
                     lat().name((*sig)->grade), lat().name(a->grade));
        Context inner = omega.extended(a->hints[0], lat().join(a->grade, l), (*sig)->a)
                            .extended(a->hints[1], l, (*sig)->b);
        if (a->ann) {
          // the motive is refined by the pattern match
          Context mctx = omega.extended(a->hints[2], cfg.c(), ts.type);
          TypeResult mk = check_truncated(mctx, a->ann, lat().top(), path + ".motive");
          if (!mk.ok()) return mk;
          auto msort = whnf(mk.type, path + ".motive", fail_out);
          if (!msort) return fail_out;
          if ((*msort)->tag != Tag::Sort)
            return err("NotAType", path + ".motive", "motive is not a type", "a sort",
                       show(*msort, omega));
          TypeResult body = check(inner, a->b, l, path + ".body");
          if (!body.ok()) return body;
          TermPtr pattern = gpair(var(1, a->hints[0]), a->grade, var(0, a->hints[1]));
          TermPtr expected = subst(shift(a->ann, 2, 1), pattern, 0);
          GradeContext phi = GradeContext::of(inner);
          JoinResult r = def_eq(lat(), phi, body.type, expected, cfg.c(), cfg.fuel,
                                cfg.cancel);
          if (r.verdict == Verdict::FuelExhausted)
            return err("FuelExhausted", path + ".body", "conversion ran out of fuel");
          if (r.verdict == Verdict::NotEqual)
            return err("ConversionFailed", path + ".body",
                       "body type does not match the refined motive",
                       print(expected, lat()), print(body.type, lat()));
          return TypeResult::success(subst(a->ann, a->a));
        }
        TypeResult body = check(inner, a->b, l, path + ".body");
        if (!body.ok()) return body;
        if (has_var(body.type, 0) || has_var(body.type, 1))
          return err("T-LetPairC", path,
                     "body type mentions a pattern variable; annotate a motive with "
                     "'return'");
        return TypeResult::success(shift(body.type, -2, 2));
      }
      case Tag::Sum: {
        note(omega, "T-Sum", a, l);
        Depth d(trace);
        TypeResult fail_out;
        TypeResult ta = check(omega, a->a, l, path + ".left");
        if (!ta.ok()) return ta;
        TypeResult tb = check(omega, a->b, l, path + ".right");
        if (!tb.ok()) return tb;
        auto s1 = whnf(ta.type, path + ".left", fail_out);
        if (!s1) return fail_out;
        auto s2 = whnf(tb.type, path + ".right", fail_out);
        if (!s2) return fail_out;
        if ((*s1)->tag != Tag::Sort || (*s2)->tag != Tag::Sort ||
            (*s1)->sort != (*s2)->sort)
          return err("T-Sum", path, "summands live in different sorts",
                     show(*s1, omega), show(*s2, omega));
        return TypeResult::success(*s1);
      }
      case Tag::Inj1:
      case Tag::Inj2: {
        bool first = a->tag == Tag::Inj1;
        const char* rule = first ? "T-InjOne" : "T-InjTwo";
        note(omega, rule, a, l);
        Depth d(trace);
        TypeResult fail_out;
        if (!a->ann)
          return err(rule, path,
                     "cannot synthesize the other summand; ascribe the sum type");
        if (!type_wf(omega, a->ann, path + ".ascription", fail_out)) return fail_out;
        auto sm = whnf(a->ann, path + ".ascription", fail_out);
        if (!sm) return fail_out;
        if ((*sm)->tag != Tag::Sum)
          return err(rule, path, "injection ascription is not a sum type", "a sum type",
                     show(*sm, omega));
        TypeResult body = check(omega, a->a, l, path + ".body");
        if (!body.ok()) return body;
        if (!convert(omega, body.type, first ? (*sm)->a : (*sm)->b, path + ".body",
                     fail_out))
          return fail_out;
        return TypeResult::success(a->ann);
      }
      case Tag::Case: {
        note(omega, "T-CaseC", a, l);
        Depth d(trace);
        TypeResult fail_out;
        TypeResult ts = check(omega, a->a, l, path + ".scrutinee");
        if (!ts.ok()) return ts;
        auto sm = whnf(ts.type, path + ".scrutinee", fail_out);
        if (!sm) return fail_out;
        if ((*sm)->tag != Tag::Sum)
          return err("T-CaseC", path, "case scrutinee is not a sum", "a sum type",
                     show(*sm, omega));
        TermPtr res;
        for (int i = 0; i < 2; i++) {
          const TermPtr& branch = i == 0 ? a->b : a->c;
          const TermPtr& summand = i == 0 ? (*sm)->a : (*sm)->b;
          std::string bpath = path + (i == 0 ? ".branch1" : ".branch2");
          TypeResult tb = check(omega, branch, l, bpath);
          if (!tb.ok()) return tb;
          auto pt = whnf(tb.type, bpath, fail_out);
          if (!pt) return fail_out;
          if ((*pt)->tag != Tag::Pi)
            return err("T-CaseC", bpath, "case branch is not a function", "a Pi type",
                       show(*pt, omega));
          if ((*pt)->grade != lat().bot())
            return err("T-CaseC", bpath, "case branches consume the scrutinee at bot",
                       lat().name(lat().bot()), lat().name((*pt)->grade));
          if (!convert(omega, (*pt)->a, summand, bpath, fail_out)) return fail_out;
          if (has_var((*pt)->b, 0))
            return err("T-CaseC", bpath, "branch result type depends on its argument");
          TermPtr out = shift((*pt)->b, -1, 1);
          if (!res) {
            res = out;
          } else if (!convert(omega, out, res, bpath, fail_out)) {
            return fail_out;
          }
        }
        return TypeResult::success(res);
      }
      default:
        return err("NotInFragment", path, "constructor outside the dependent fragment");
    }
  }
};

}  // namespace ddc_detail

inline TypeResult ddc_check(const DdcConfig& cfg, const Context& omega, const TermPtr& a,
                            Grade l, Trace* trace = nullptr) {
  ddc_detail::Checker c{cfg, trace};
  return c.check(omega, a, l, "root");
}

// Checks `a` at the truncated-at-top judgment: Omega ||- a :^top A, the route
// the calculus offers in place of derivations at top.
inline TypeResult ddc_check_truncated_top(const DdcConfig& cfg, const Context& omega,
                                          const TermPtr& a, Trace* trace = nullptr) {
  ddc_detail::Checker c{cfg, trace};
  return c.check_truncated(omega, a, cfg.lattice->top(), "root");
}

}  // namespace gradia
