#include <catch2/catch_amalgamated.hpp>

#include "gradia/generate.hpp"
#include "gradia/harness.hpp"
#include "gradia/parser.hpp"
#include "gradia/printer.hpp"

using namespace gradia;

namespace {

Lattice li() {
  return load_lattice("elements: bot, C, top\norder: bot <= C, C <= top\nc: C\n");
}

// --- a named-variable reference implementation of substitution -------------
//
// The indexed terms are converted to a named form (every binder freshly
// named), substitution is carried out on names, and the result converted
// back. Capture cannot happen because binder names are globally unique.

struct NamedSubst {
  int counter = 0;

  std::string fresh() { return "n" + std::to_string(counter++); }

  // indexed -> named: scope maps indices to names; binder names land in
  // hints in child order (LetPair: x, y from the body, then z from the motive)
  TermPtr to_named(const TermPtr& t, std::vector<std::string>& scope) {
    if (t->tag == Tag::Var) {
      REQUIRE(t->var < static_cast<int>(scope.size()));
      return var(-1, scope[scope.size() - 1 - t->var]);
    }
    Term out = *t;
    std::vector<std::string> hints;
    auto conv = [&](const TermPtr& ch, int binders, TermPtr& slot) {
      if (!ch) return;
      std::vector<std::string> names;
      for (int b = 0; b < binders; b++) names.push_back(fresh());
      for (auto& n : names) scope.push_back(n);
      slot = to_named(ch, scope);
      for (int b = 0; b < binders; b++) scope.pop_back();
      for (auto& n : names) hints.push_back(n);
    };
    conv(t->a, child_binders(*t, 0), out.a);
    conv(t->b, child_binders(*t, 1), out.b);
    conv(t->c, child_binders(*t, 2), out.c);
    conv(t->ann, child_binders(*t, 3), out.ann);
    out.hints = hints;
    return make_term(std::move(out));
  }

  TermPtr named_subst(const TermPtr& t, const std::string& name, const TermPtr& s) {
    if (t->tag == Tag::Var) return t->hints[0] == name ? s : t;
    Term out = *t;
    out.a = t->a ? named_subst(t->a, name, s) : nullptr;
    out.b = t->b ? named_subst(t->b, name, s) : nullptr;
    out.c = t->c ? named_subst(t->c, name, s) : nullptr;
    out.ann = t->ann ? named_subst(t->ann, name, s) : nullptr;
    return make_term(std::move(out));
  }

  TermPtr to_indexed(const TermPtr& t, std::vector<std::string>& scope,
                     const std::vector<std::string>& free_names) {
    if (t->tag == Tag::Var) {
      for (int i = static_cast<int>(scope.size()) - 1; i >= 0; i--)
        if (scope[i] == t->hints[0])
          return var(static_cast<int>(scope.size()) - 1 - i);
      for (size_t i = 0; i < free_names.size(); i++)
        if (free_names[i] == t->hints[0])
          return var(static_cast<int>(scope.size() + free_names.size() - 1 - i));
      FAIL("unbound name " + t->hints[0]);
      return t;
    }
    Term out = *t;
    size_t hint_at = 0;
    auto conv = [&](const TermPtr& ch, int binders, TermPtr& slot) {
      if (!ch) return;
      for (int b = 0; b < binders; b++) scope.push_back(t->hints[hint_at++]);
      slot = to_indexed(ch, scope, free_names);
      for (int b = 0; b < binders; b++) scope.pop_back();
    };
    conv(t->a, child_binders(*t, 0), out.a);
    conv(t->b, child_binders(*t, 1), out.b);
    conv(t->c, child_binders(*t, 2), out.c);
    conv(t->ann, child_binders(*t, 3), out.ann);
    return make_term(std::move(out));
  }
};

// subst(body, arg) computed by the named-variable route
TermPtr oracle_subst(const TermPtr& body, const TermPtr& arg,
                     const std::vector<std::string>& free_names) {
  NamedSubst ns;
  std::vector<std::string> scope = free_names;
  scope.push_back("TARGET");
  TermPtr named_body = ns.to_named(body, scope);
  scope.pop_back();
  TermPtr named_arg = ns.to_named(arg, scope);
  TermPtr named_result = ns.named_subst(named_body, "TARGET", named_arg);
  std::vector<std::string> empty;
  return ns.to_indexed(named_result, empty, free_names);
}

}  // namespace

TEST_CASE("parse builds indexed terms") {
  Lattice l = li();
  TermPtr id = parse("\\x:^top Type. \\y:^bot x. y", l, Fragment::Ddc);
  TermPtr want = glam(l.top(), sort("Type"), glam(l.bot(), var(0), var(0)));
  CHECK(term_eq(id, want));
  CHECK(term_eq(parse("unit", l, Fragment::Sdc), unit_tm()));
  Grade H = l.top();
  TermPtr b = parse("bind^top x = unit in x", l, Fragment::Sdc);
  CHECK(term_eq(b, bind(H, unit_tm(), var(0))));
}

TEST_CASE("parse errors carry positions") {
  Lattice l = li();
  CHECK_THROWS_AS(parse("\\x:^wrong Unit. x", l, Fragment::Ddc), ParseError);
  CHECK_THROWS_AS(parse("y", l, Fragment::Sdc), ParseError);
  CHECK_THROWS_AS(parse("(", l, Fragment::Sdc), ParseError);
  try {
    parse("unit unit\n  )", l, Fragment::Sdc);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("grade superscripts default to bot") {
  Lattice l = li();
  TermPtr t = parse("\\x:Unit. x", l, Fragment::Ddc);
  CHECK(t->grade == l.bot());
}

TEST_CASE("print round-trips the core surface forms") {
  Lattice l = li();
  for (const char* src : {
           "\\x:^top Type. \\y:^bot x. y",
           "Pi x:^top Type. Pi y:^bot x. x",
           "let (x^C, y) = (unit^C, unit) in x",
           "let (p^C, q) = (unit^C, unit) return z. Unit in p",
           "(inj1 unit : Unit + Unit)",
           "case (inj1 unit : Unit + Unit) of \\x:^bot Unit. x ; \\x:^bot Unit. x",
           "((unit^top, unit) : Sigma x:^top Unit. Unit)",
       }) {
    TermPtr t = parse(src, l, Fragment::Ddc);
    CHECK(term_eq(parse(print(t, l), l, Fragment::Ddc), t));
  }
  for (const char* src : {
           "\\x:T^C Unit * Unit. bind^C y = pi1 x in eta^C y",
           "eta^top (inj2 unit : Unit + T^bot Unit)",
           "case pi2 (unit, (inj1 unit : Unit + Unit)) of \\x:Unit. unit ; \\y:Unit. y",
       }) {
    TermPtr t = parse(src, l, Fragment::Sdc);
    CHECK(term_eq(parse(print(t, l), l, Fragment::Sdc), t));
  }
  TermPtr s = parse("unseal^C (seal^C unit)", l, Fragment::Seal);
  CHECK(term_eq(parse(print(s, l), l, Fragment::Seal), s));
}

TEST_CASE("print round-trips a generated corpus") {
  Lattice l = li();
  // enumerated terms, all fragments, plus randomly generated well-typed ones
  int checked = 0;
  for (Fragment frag : {Fragment::Sdc, Fragment::Seal, Fragment::Ddc}) {
    Enumerator en(l, frag);
    for (auto& t : en.all_terms(4, 2)) {
      std::vector<std::string> frees = {"u", "v"};
      TermPtr back = parse(print(t, l, frees), l, frag, default_sort_names(), frees);
      REQUIRE(term_eq(back, t));
      checked++;
    }
  }
  SdcGen gen(l);
  for (int i = 0; i < 300; i++) {
    Rng rng = Rng::for_trial(7, i);
    auto g = gen.gen_closed(rng, l.bot(), 18);
    if (!g) continue;
    TermPtr back = parse(print(g->term, l), l, Fragment::Sdc);
    REQUIRE(term_eq(back, g->term));
    checked++;
  }
  CHECK(checked > 1000);
}

TEST_CASE("subst agrees with the named-variable oracle") {
  Lattice l = li();
  CHECK(term_eq(subst(var(0), unit_tm()), unit_tm()));
  // subst touches only index 0
  TermPtr t = app(var(0), var(1));
  CHECK(term_eq(subst(t, unit_tm()), app(unit_tm(), var(0))));

  std::vector<std::string> frees = {"f0", "f1"};
  Enumerator en(l, Fragment::Sdc);
  auto bodies = en.all_terms(4, 3);  // up to two free vars beyond the target
  auto args = en.all_terms(3, 2);
  int done = 0;
  Rng rng(99);
  for (int i = 0; i < 1000; i++) {
    const TermPtr& body = bodies[rng.pick(static_cast<int>(bodies.size()))];
    const TermPtr& arg = args[rng.pick(static_cast<int>(args.size()))];
    // body sees TARGET at index 0 and f1,f0 above; arg sees f1,f0
    TermPtr direct = subst(body, arg);
    TermPtr named = oracle_subst(body, arg, frees);
    REQUIRE(term_eq(direct, named));
    done++;
  }
  CHECK(done == 1000);

  // under a binder, with index shifting
  Lattice two = load_lattice("elements: bot, top\norder: bot <= top");
  TermPtr under = glam(two.bot(), unit_ty(), var(1));
  TermPtr c = glam(two.bot(), unit_ty(), var(1));  // mentions a free var
  TermPtr expect = glam(two.bot(), unit_ty(), shift(c, 1));
  CHECK(term_eq(subst(under, c), expect));
}

TEST_CASE("contexts and truncation") {
  Lattice l = li();
  Context omega;
  omega = omega.extended("x", l.top(), unit_ty()).extended("y", l.bot(), unit_ty());
  CHECK(omega.lookup(0).hint == "y");
  CHECK(omega.lookup(1).hint == "x");
  Context trunc = truncate_context(l, omega, l.c());
  CHECK(trunc.lookup(1).grade == l.c());       // top /\ C = C
  CHECK(trunc.lookup(0).grade == l.bot());     // bot /\ C = bot
  GradeContext phi = GradeContext::of(omega);
  CHECK(phi.lookup(1) == l.top());
}

TEST_CASE("pts signatures") {
  PtsSignature tit = PtsSignature::type_in_type();
  CHECK(tit.axiom("Type") == "Type");
  CHECK(tit.rule("Type", "Type") == "Type");
  PtsSignature coc = PtsSignature::coc();
  coc.validate();
  CHECK(coc.axiom("Kind").has_value());
  PtsSignature parsed = load_pts(
      "sorts: Type, Kind\naxioms: Type : Kind, Kind : Kind\n"
      "rules: (Type, Type, Type), (Kind, Type, Type)\n");
  CHECK(parsed.rule("Kind", "Type") == "Type");
  CHECK_THROWS(load_pts("sorts: A, B\naxioms: A : B\nrules: (A, A, A)\n"));  // B lacks axiom
}
