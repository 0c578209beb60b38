#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gradia/printer.hpp"
#include "gradia/syntax.hpp"

namespace gradia {

struct TypeError {
  std::string rule;      // first failing rule, in rule order
  std::string path;      // subterm path from the root
  std::string expected;
  std::string found;
  std::string message;

  std::string render() const {
    std::string out = rule + ": " + message;
    if (!expected.empty()) out += " (expected " + expected + ", found " + found + ")";
    if (!path.empty()) out += " at " + path;
    return out;
  }
};

struct TypeResult {
  TermPtr type;
  std::optional<TypeError> error;

  bool ok() const { return type != nullptr; }
  static TypeResult success(TermPtr t) { return {std::move(t), std::nullopt}; }
  static TypeResult fail(TypeError e) { return {nullptr, std::move(e)}; }
};

// Derivation trace: one line per rule instance, truncation detours included.
struct Trace {
  std::vector<std::string> lines;
  int depth = 0;

  void note(const std::string& s) { lines.push_back(std::string(2 * depth, ' ') + s); }
  std::string render() const {
    std::string out;
    for (auto& l : lines) out += l + "\n";
    return out;
  }
};

namespace sdc_detail {

inline std::string show_ctx(const Lattice& lat, const Context& omega) {
  std::string out;
  for (size_t i = 0; i < omega.bindings.size(); i++) {
    if (i) out += ", ";
    auto& b = omega.bindings[i];
    std::vector<std::string> outer;
    for (size_t j = 0; j < i; j++) outer.push_back(omega.bindings[j].hint);
    out += b.hint + ":^" + lat.name(b.grade) + " " + print(b.type, lat, outer);
  }
  return out.empty() ? "<empty>" : out;
}

inline std::vector<std::string> ctx_names(const Context& omega) {
  std::vector<std::string> out;
  for (auto& b : omega.bindings) out.push_back(b.hint);
  return out;
}

struct Checker {
  const Lattice& lat;
  Trace* trace;

  TypeResult err(std::string rule, const std::string& path, std::string msg,
                 std::string expected = "", std::string found = "") {
    return TypeResult::fail({std::move(rule), path, std::move(expected), std::move(found),
                             std::move(msg)});
  }

  void note_rule(const char* rule, const Context& omega, const TermPtr& a, Grade l) {
    if (!trace) return;
    trace->note(std::string(rule) + ": " + show_ctx(lat, omega) + " |- " +
                print(a, lat, ctx_names(omega)) + " :^" + lat.name(l));
  }

  // Synthesizes the unique A with Omega |- a :^l A. Rules are syntax-directed
  // once l is fixed; lambda binders carry their domains, so no unification.
  TypeResult check(const Context& omega, const TermPtr& a, Grade l, const std::string& path) {
    struct Guard {
      Trace* t;
      explicit Guard(Trace* t) : t(t) {
        if (t) t->depth++;
      }
      ~Guard() {
        if (t) t->depth--;
      }
    };
    switch (a->tag) {
      case Tag::Var: {
        note_rule("SDC-Var", omega, a, l);
        if (a->var >= omega.size())
          return err("SDC-Var", path, "unbound variable index " + std::to_string(a->var));
        const ContextBinding& b = omega.lookup(a->var);
        if (!lat.leq(b.grade, l))
          return err("SDC-Var", path,
                     "variable '" + b.hint + "' is graded above the observer",
                     "grade <= " + lat.name(l), lat.name(b.grade));
        return TypeResult::success(shift(b.type, a->var + 1));
      }
      case Tag::UnitTm:
        note_rule("SDC-Unit", omega, a, l);
        return TypeResult::success(unit_ty());
      case Tag::Lam: {
        note_rule("SDC-Abs", omega, a, l);
        Guard g(trace);
        TypeResult body =
            check(omega.extended(a->hints[0], l, a->a), a->b, l, path + ".body");
        if (!body.ok()) return body;
        return TypeResult::success(arrow(a->a, body.type));
      }
      case Tag::App: {
        note_rule("SDC-App", omega, a, l);
        Guard g(trace);
        TypeResult fun = check(omega, a->a, l, path + ".fun");
        if (!fun.ok()) return fun;
        if (fun.type->tag != Tag::SimpleArrow)
          return err("SDC-App", path, "application head is not a function",
                     "an arrow type", print(fun.type, lat, ctx_names(omega)));
        TypeResult arg = check(omega, a->b, l, path + ".arg");
        if (!arg.ok()) return arg;
        if (!term_eq(arg.type, fun.type->a))
          return err("SDC-App", path, "argument type mismatch",
                     print(fun.type->a, lat, ctx_names(omega)),
                     print(arg.type, lat, ctx_names(omega)));
        return TypeResult::success(fun.type->b);
      }
      case Tag::Pair: {
        note_rule("SDC-Pair", omega, a, l);
        Guard g(trace);
        TypeResult x = check(omega, a->a, l, path + ".fst");
        if (!x.ok()) return x;
        TypeResult y = check(omega, a->b, l, path + ".snd");
        if (!y.ok()) return y;
        return TypeResult::success(prod(x.type, y.type));
      }
      case Tag::Proj1:
      case Tag::Proj2: {
        bool first = a->tag == Tag::Proj1;
        note_rule(first ? "SDC-ProjOne" : "SDC-ProjTwo", omega, a, l);
        Guard g(trace);
        TypeResult p = check(omega, a->a, l, path + ".pair");
        if (!p.ok()) return p;
        if (p.type->tag != Tag::SimpleProd)
          return err(first ? "SDC-ProjOne" : "SDC-ProjTwo", path,
                     "projection from a non-product", "a product type",
                     print(p.type, lat, ctx_names(omega)));
        return TypeResult::success(first ? p.type->a : p.type->b);
      }
      case Tag::Inj1:
      case Tag::Inj2: {
        bool first = a->tag == Tag::Inj1;
        const char* rule = first ? "SDC-InjOne" : "SDC-InjTwo";
        note_rule(rule, omega, a, l);
        Guard g(trace);
        if (!a->ann)
          return err(rule, path,
                     "cannot synthesize the other summand; ascribe the sum type");
        if (a->ann->tag != Tag::Sum)
          return err(rule, path, "injection ascription is not a sum type", "a sum type",
                     print(a->ann, lat, ctx_names(omega)));
        TypeResult body = check(omega, a->a, l, path + ".body");
        if (!body.ok()) return body;
        const TermPtr& want = first ? a->ann->a : a->ann->b;
        if (!term_eq(body.type, want))
          return err(rule, path, "injected term does not match the ascribed summand",
                     print(want, lat, ctx_names(omega)),
                     print(body.type, lat, ctx_names(omega)));
        return TypeResult::success(a->ann);
      }
      case Tag::Case: {
        note_rule("SDC-Case", omega, a, l);
        Guard g(trace);
        TypeResult s = check(omega, a->a, l, path + ".scrutinee");
        if (!s.ok()) return s;
        if (s.type->tag != Tag::Sum)
          return err("SDC-Case", path, "case scrutinee is not a sum", "a sum type",
                     print(s.type, lat, ctx_names(omega)));
        TypeResult b1 = check(omega, a->b, l, path + ".branch1");
        if (!b1.ok()) return b1;
        TypeResult b2 = check(omega, a->c, l, path + ".branch2");
        if (!b2.ok()) return b2;
        if (b1.type->tag != Tag::SimpleArrow || !term_eq(b1.type->a, s.type->a))
          return err("SDC-Case", path, "first branch must consume the left summand",
                     print(arrow(s.type->a, unit_ty()), lat, ctx_names(omega)) + "-like",
                     print(b1.type, lat, ctx_names(omega)));
        if (b2.type->tag != Tag::SimpleArrow || !term_eq(b2.type->a, s.type->b))
          return err("SDC-Case", path, "second branch must consume the right summand",
                     print(arrow(s.type->b, unit_ty()), lat, ctx_names(omega)) + "-like",
                     print(b2.type, lat, ctx_names(omega)));
        if (!term_eq(b1.type->b, b2.type->b))
          return err("SDC-Case", path, "branch result types differ",
                     print(b1.type->b, lat, ctx_names(omega)),
                     print(b2.type->b, lat, ctx_names(omega)));
        return TypeResult::success(b1.type->b);
      }
      case Tag::Return: {
        // the body must be visible inside an l0-secure box: check at l \/ l0
        note_rule("SDC-Return", omega, a, l);
        Guard g(trace);
        TypeResult body = check(omega, a->a, lat.join(l, a->grade), path + ".body");
        if (!body.ok()) return body;
        return TypeResult::success(tmonad(a->grade, body.type));
      }
      case Tag::Bind: {
        note_rule("SDC-Bind", omega, a, l);
        Guard g(trace);
        TypeResult rhs = check(omega, a->a, l, path + ".rhs");
        if (!rhs.ok()) return rhs;
        if (rhs.type->tag != Tag::TMonad || rhs.type->grade != a->grade)
          return err("SDC-Bind", path, "bind scrutinee is not a matching modal box",
                     "T^" + lat.name(a->grade) + " _",
                     print(rhs.type, lat, ctx_names(omega)));
        TypeResult body = check(
            omega.extended(a->hints[0], lat.join(l, a->grade), rhs.type->a), a->b, l,
            path + ".body");
        if (!body.ok()) return body;
        return TypeResult::success(body.type);  // simple types never mention term variables
      }
      default:
        return err("SDC", path, "constructor outside the SDC fragment");
    }
  }
};

}  // namespace sdc_detail

inline TypeResult sdc_check(const Lattice& lat, const Context& omega, const TermPtr& a,
                            Grade l, Trace* trace = nullptr) {
  sdc_detail::Checker c{lat, trace};
  return c.check(omega, a, l, "root");
}

// --- operational semantics ---------------------------------------------------

// CBN values: constructors are lazy, so pairs, injections and boxes are values
// with arbitrary components.
inline bool sdc_value(const TermPtr& a) {
  switch (a->tag) {
    case Tag::UnitTm:
    case Tag::Lam:
    case Tag::Pair:
    case Tag::Inj1:
    case Tag::Inj2:
    case Tag::Return:
      return true;
    default:
      return false;
  }
}

// One deterministic CBN step; nullopt for values and stuck terms. Progress is
// asserted only for well-typed closed terms.
inline std::optional<TermPtr> sdc_step(const TermPtr& a) {
  switch (a->tag) {
    case Tag::App: {
      if (auto f = sdc_step(a->a)) return app(*f, a->b);
      if (a->a->tag == Tag::Lam) return subst(a->a->b, a->b);
      return std::nullopt;
    }
    case Tag::Proj1:
    case Tag::Proj2: {
      if (auto s = sdc_step(a->a))
        return node1(a->tag, *s);
      if (a->a->tag == Tag::Pair) return a->tag == Tag::Proj1 ? a->a->a : a->a->b;
      return std::nullopt;
    }
    case Tag::Case: {
      if (auto s = sdc_step(a->a)) return case_of(*s, a->b, a->c);
      if (a->a->tag == Tag::Inj1) return app(a->b, a->a->a);
      if (a->a->tag == Tag::Inj2) return app(a->c, a->a->a);
      return std::nullopt;
    }
    case Tag::Bind: {
      if (auto s = sdc_step(a->a)) return bind(a->grade, *s, a->b, a->hints[0]);
      if (a->a->tag == Tag::Return && a->a->grade == a->grade) return subst(a->b, a->a->a);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

// --- grading and indexed indistinguishability --------------------------------

// Well-gradedness: the diagonal of indistinguishability. Var demands the
// binding grade below the observer; boxed bodies are graded at l \/ l0.
inline bool sdc_grade(const Lattice& lat, const GradeContext& phi, const TermPtr& a, Grade l) {
  switch (a->tag) {
    case Tag::Var:
      return a->var < phi.size() && lat.leq(phi.lookup(a->var), l);
    case Tag::UnitTm:
      return true;
    case Tag::Lam:
      return sdc_grade(lat, phi.extended(a->hints[0], l), a->b, l);
    case Tag::App:
    case Tag::Pair:
      return sdc_grade(lat, phi, a->a, l) && sdc_grade(lat, phi, a->b, l);
    case Tag::Proj1:
    case Tag::Proj2:
    case Tag::Inj1:
    case Tag::Inj2:
      return sdc_grade(lat, phi, a->a, l);
    case Tag::Case:
      return sdc_grade(lat, phi, a->a, l) && sdc_grade(lat, phi, a->b, l) &&
             sdc_grade(lat, phi, a->c, l);
    case Tag::Return:
      return sdc_grade(lat, phi, a->a, lat.join(l, a->grade));
    case Tag::Bind:
      return sdc_grade(lat, phi, a->a, l) &&
             sdc_grade(lat, phi.extended(a->hints[0], lat.join(l, a->grade)), a->b, l);
    case Tag::Seal:
      return sdc_grade(lat, phi, a->a, lat.join(l, a->grade));
    case Tag::Unseal:
      return sdc_grade(lat, phi, a->a, l);
    default:
      return false;
  }
}

// Phi |- a ~_l b. Structural everywhere except under eta^l0, where the bodies
// fall into the conditional relation: compared at l when l0 <= l, otherwise
// arbitrary but well-graded at l \/ l0 (the well-graded reading of SEq-Nleq).
inline bool sdc_indist(const Lattice& lat, const GradeContext& phi, const TermPtr& a,
                       const TermPtr& b, Grade l) {
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Tag::Var:
      return a->var == b->var && a->var < phi.size() && lat.leq(phi.lookup(a->var), l);
    case Tag::UnitTm:
      return true;
    case Tag::Lam:
      return term_eq(a->a, b->a) &&
             sdc_indist(lat, phi.extended(a->hints[0], l), a->b, b->b, l);
    case Tag::App:
    case Tag::Pair:
      return sdc_indist(lat, phi, a->a, b->a, l) && sdc_indist(lat, phi, a->b, b->b, l);
    case Tag::Proj1:
    case Tag::Proj2:
      return sdc_indist(lat, phi, a->a, b->a, l);
    case Tag::Inj1:
    case Tag::Inj2:
      return term_eq(a->ann, b->ann) && sdc_indist(lat, phi, a->a, b->a, l);
    case Tag::Case:
      return sdc_indist(lat, phi, a->a, b->a, l) && sdc_indist(lat, phi, a->b, b->b, l) &&
             sdc_indist(lat, phi, a->c, b->c, l);
    case Tag::Return: {
      if (a->grade != b->grade) return false;
      Grade joined = lat.join(l, a->grade);
      if (lat.leq(a->grade, l)) return sdc_indist(lat, phi, a->a, b->a, l);
      return sdc_grade(lat, phi, a->a, joined) && sdc_grade(lat, phi, b->a, joined);
    }
    case Tag::Bind:
      return a->grade == b->grade && sdc_indist(lat, phi, a->a, b->a, l) &&
             sdc_indist(lat, phi.extended(a->hints[0], lat.join(l, a->grade)), a->b, b->b, l);
    case Tag::Seal: {
      if (a->grade != b->grade) return false;
      Grade joined = lat.join(l, a->grade);
      if (lat.leq(a->grade, l)) return sdc_indist(lat, phi, a->a, b->a, l);
      return sdc_grade(lat, phi, a->a, joined) && sdc_grade(lat, phi, b->a, joined);
    }
    case Tag::Unseal:
      return a->grade == b->grade && sdc_indist(lat, phi, a->a, b->a, l);
    default:
      return false;
  }
}

// --- the sealing calculus ----------------------------------------------------

namespace seal_detail {

struct Checker {
  const Lattice& lat;
  Trace* trace;

  // lambda^[] uses ordinary ungraded contexts: binding grades are ignored.
  TypeResult check(const Context& gamma, const TermPtr& a, Grade l, const std::string& path) {
    using sdc_detail::ctx_names;
    auto err = [&](std::string rule, std::string msg, std::string want = "",
                   std::string got = "") {
      return TypeResult::fail({std::move(rule), path, std::move(want), std::move(got),
                               std::move(msg)});
    };
    if (trace) {
      trace->note("Sealing: " + print(a, lat, ctx_names(gamma)) + " :^" + lat.name(l));
      trace->depth++;
    }
    struct Guard {
      Trace* t;
      ~Guard() {
        if (t) t->depth--;
      }
    } guard{trace};
    switch (a->tag) {
      case Tag::Var: {
        if (a->var >= gamma.size()) return err("Sealing-Var", "unbound variable");
        return TypeResult::success(shift(gamma.lookup(a->var).type, a->var + 1));
      }
      case Tag::UnitTm:
        return TypeResult::success(unit_ty());
      case Tag::Lam: {
        TypeResult body =
            check(gamma.extended(a->hints[0], lat.bot(), a->a), a->b, l, path + ".body");
        if (!body.ok()) return body;
        return TypeResult::success(arrow(a->a, body.type));
      }
      case Tag::App: {
        TypeResult fun = check(gamma, a->a, l, path + ".fun");
        if (!fun.ok()) return fun;
        if (fun.type->tag != Tag::SimpleArrow)
          return err("Sealing-App", "application head is not a function");
        TypeResult arg = check(gamma, a->b, l, path + ".arg");
        if (!arg.ok()) return arg;
        if (!term_eq(arg.type, fun.type->a))
          return err("Sealing-App", "argument type mismatch",
                     print(fun.type->a, lat, ctx_names(gamma)),
                     print(arg.type, lat, ctx_names(gamma)));
        return TypeResult::success(fun.type->b);
      }
      case Tag::Pair: {
        TypeResult x = check(gamma, a->a, l, path + ".fst");
        if (!x.ok()) return x;
        TypeResult y = check(gamma, a->b, l, path + ".snd");
        if (!y.ok()) return y;
        return TypeResult::success(prod(x.type, y.type));
      }
      case Tag::Proj1:
      case Tag::Proj2: {
        TypeResult p = check(gamma, a->a, l, path + ".pair");
        if (!p.ok()) return p;
        if (p.type->tag != Tag::SimpleProd)
          return err("Sealing-Proj", "projection from a non-product");
        return TypeResult::success(a->tag == Tag::Proj1 ? p.type->a : p.type->b);
      }
      case Tag::Inj1:
      case Tag::Inj2: {
        bool first = a->tag == Tag::Inj1;
        if (!a->ann || a->ann->tag != Tag::Sum)
          return err("Sealing-Inj", "injection needs a sum-type ascription");
        TypeResult body = check(gamma, a->a, l, path + ".body");
        if (!body.ok()) return body;
        if (!term_eq(body.type, first ? a->ann->a : a->ann->b))
          return err("Sealing-Inj", "injected term does not match the ascribed summand");
        return TypeResult::success(a->ann);
      }
      case Tag::Case: {
        TypeResult s = check(gamma, a->a, l, path + ".scrutinee");
        if (!s.ok()) return s;
        if (s.type->tag != Tag::Sum) return err("Sealing-Case", "scrutinee is not a sum");
        TypeResult b1 = check(gamma, a->b, l, path + ".branch1");
        if (!b1.ok()) return b1;
        TypeResult b2 = check(gamma, a->c, l, path + ".branch2");
        if (!b2.ok()) return b2;
        if (b1.type->tag != Tag::SimpleArrow || b2.type->tag != Tag::SimpleArrow ||
            !term_eq(b1.type->a, s.type->a) || !term_eq(b2.type->a, s.type->b) ||
            !term_eq(b1.type->b, b2.type->b))
          return err("Sealing-Case", "branch types do not fit the scrutinee");
        return TypeResult::success(b1.type->b);
      }
      case Tag::Seal: {
        TypeResult body = check(gamma, a->a, lat.join(l, a->grade), path + ".body");
        if (!body.ok()) return body;
        return TypeResult::success(tmonad(a->grade, body.type));
      }
      case Tag::Unseal: {
        TypeResult body = check(gamma, a->a, l, path + ".body");
        if (!body.ok()) return body;
        if (body.type->tag != Tag::TMonad || body.type->grade != a->grade)
          return err("Sealing-Unseal", "unseal of a non-matching box",
                     "T^" + lat.name(a->grade) + " _",
                     print(body.type, lat, ctx_names(gamma)));
        if (!lat.leq(a->grade, l))
          return TypeResult::fail({"UnsealClearance", path, "grade <= " + lat.name(l),
                                   lat.name(a->grade),
                                   "unseal requires clearance for the seal grade"});
        return TypeResult::success(body.type->a);
      }
      default:
        return err("Sealing", "constructor outside the sealing fragment");
    }
  }
};

}  // namespace seal_detail

inline TypeResult seal_check(const Lattice& lat, const Context& gamma, const TermPtr& a,
                             Grade l, Trace* trace = nullptr) {
  seal_detail::Checker c{lat, trace};
  return c.check(gamma, a, l, "root");
}

// Gamma^l: every binding graded at l, as the translation theorem requires.
inline Context grade_everything(const Context& gamma, Grade l) {
  Context out = gamma;
  for (auto& b : out.bindings) b.grade = l;
  return out;
}

// --- full (non-deterministic) reduction --------------------------------------

namespace full_detail {

inline std::optional<TermPtr> contract_root(const Lattice& lat, const TermPtr& t,
                                            Fragment frag) {
  switch (t->tag) {
    case Tag::App:
      if (t->a->tag == Tag::Lam) return subst(t->a->b, t->b);
      return std::nullopt;
    case Tag::GApp:
      if (t->a->tag == Tag::GLam && t->a->grade == t->grade) return subst(t->a->b, t->b);
      return std::nullopt;
    case Tag::Proj1:
      if (t->a->tag == Tag::Pair) return t->a->a;
      return std::nullopt;
    case Tag::Proj2:
      if (t->a->tag == Tag::Pair) return t->a->b;
      return std::nullopt;
    case Tag::Case:
      if (t->a->tag == Tag::Inj1 || t->a->tag == Tag::Inj2) {
        const TermPtr& branch = t->a->tag == Tag::Inj1 ? t->b : t->c;
        if (frag == Fragment::Ddc || frag == Fragment::DdcPi)
          return gapp(branch, t->a->a, lat.bot());
        return app(branch, t->a->a);
      }
      return std::nullopt;
    case Tag::Bind:
      if (t->a->tag == Tag::Return && t->a->grade == t->grade) return subst(t->b, t->a->a);
      return std::nullopt;
    case Tag::Unseal:
      if (t->a->tag == Tag::Seal && t->a->grade == t->grade) return t->a->a;
      return std::nullopt;
    case Tag::LetPair:
      if (t->a->tag == Tag::GPair && t->a->grade == t->grade) {
        TermPtr with_y = subst(t->b, shift(t->a->b, 1), 0);
        return subst(with_y, t->a->a, 0);
      }
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

inline void collect(const Lattice& lat, const TermPtr& t, Fragment frag,
                    std::vector<TermPtr>& out);

inline void collect_child(const Lattice& lat, const TermPtr& t, Fragment frag, int which,
                          std::vector<TermPtr>& out) {
  const TermPtr& child = which == 0 ? t->a : which == 1 ? t->b : which == 2 ? t->c : t->ann;
  if (!child) return;
  std::vector<TermPtr> reduced;
  collect(lat, child, frag, reduced);
  for (auto& r : reduced) {
    Term copy = *t;
    (which == 0 ? copy.a : which == 1 ? copy.b : which == 2 ? copy.c : copy.ann) = r;
    out.push_back(make_term(std::move(copy)));
  }
}

// Outermost first, then children left to right; the order makes the
// backward-simulation search reproducible.
inline void collect(const Lattice& lat, const TermPtr& t, Fragment frag,
                    std::vector<TermPtr>& out) {
  if (auto r = contract_root(lat, t, frag)) out.push_back(*r);
  for (int which = 0; which < 4; which++) collect_child(lat, t, frag, which, out);
}

}  // namespace full_detail

// Every one-step contraction of any redex anywhere in the term, binders and
// annotations included.
inline std::vector<TermPtr> full_step(const Lattice& lat, const TermPtr& a,
                                      Fragment frag = Fragment::Sdc) {
  std::vector<TermPtr> out;
  full_detail::collect(lat, a, frag, out);
  return out;
}

}  // namespace gradia
