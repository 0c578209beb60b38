#include <catch2/catch_amalgamated.hpp>

#include "gradia/ddc.hpp"
#include "gradia/generate.hpp"
#include "gradia/parser.hpp"
#include "gradia/printer.hpp"

using namespace gradia;

namespace {
Lattice li() {
  return load_lattice("elements: bot, C, top\norder: bot <= C, C <= top\nc: C\n");
}
TermPtr bool_ty() { return sum(unit_ty(), unit_ty()); }
}  // namespace

TEST_CASE("the polymorphic identity at type-in-type") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  TermPtr id = parse("\\x:^top Type. \\y:^bot x. y", l, Fragment::Ddc);
  auto r = ddc_check(cfg, {}, id, l.bot());
  REQUIRE(r.ok());
  CHECK(print(r.type, l) == "Pi x:^top Type. Pi y:^bot x. x");
  // the same judgment holds at C, and the type is well-formed at the
  // truncated-at-top judgment (regularity)
  CHECK(ddc_check(cfg, {}, id, l.c()).ok());
  auto reg = ddc_check_truncated_top(cfg, {}, r.type);
  REQUIRE(reg.ok());
  CHECK(reg.type->tag == Tag::Sort);
}

TEST_CASE("no judgment is derivable above C") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  auto r = ddc_check(cfg, {}, unit_tm(), l.top());
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->rule == "LevelAboveC");
  // the truncated route works instead
  CHECK(ddc_check_truncated_top(cfg, {}, unit_tm()).ok());
}

TEST_CASE("application grades must match the Pi type") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  TermPtr f = glam(l.top(), unit_ty(), unit_tm());
  CHECK(ddc_check(cfg, {}, gapp(f, unit_tm(), l.top()), l.bot()).ok());
  auto r = ddc_check(cfg, {}, gapp(f, unit_tm(), l.bot()), l.bot());
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->rule == "T-AppC");
}

TEST_CASE("irrelevant arguments may use any variable (truncation)") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  // x:^top Bool |- (\y:^top Bool. unit) x^top :^bot Unit
  Context omega = Context{}.extended("x", l.top(), bool_ty());
  TermPtr t = gapp(glam(l.top(), bool_ty(), unit_tm()), var(0, "x"), l.top());
  auto r = ddc_check(cfg, omega, t, l.bot());
  REQUIRE(r.ok());
  CHECK(term_eq(r.type, unit_ty()));
  // the same variable used relevantly is rejected
  TermPtr bad = gapp(glam(l.bot(), bool_ty(), unit_tm()), var(0, "x"), l.bot());
  auto r2 = ddc_check(cfg, omega, bad, l.bot());
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error->rule == "VarGradeTooHigh");
}

TEST_CASE("strong irrelevant sigma: projections respect the grade") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  Grade C = l.c(), T = l.top();
  // pi1^C of a C-graded pair is available at C
  TermPtr pc = let_pair(C, gpair(unit_tm(), C, unit_tm()), var(1, "x"));
  auto ok = ddc_check(cfg, {}, pc, C);
  REQUIRE(ok.ok());
  CHECK(term_eq(ok.type, unit_ty()));
  // at bot the first component is invisible
  auto low = ddc_check(cfg, {}, pc, l.bot());
  REQUIRE_FALSE(low.ok());
  CHECK(low.error->rule == "VarGradeTooHigh");
  // pi1^top of a top-graded pair cannot be observed even at C
  TermPtr pt = let_pair(T, gpair(unit_tm(), T, unit_tm()), var(1, "x"));
  auto r = ddc_check(cfg, {}, pt, C);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->rule == "VarGradeTooHigh");
  // the second projection is always available
  TermPtr snd = let_pair(T, gpair(unit_tm(), T, unit_tm()), var(0, "y"));
  CHECK(ddc_check(cfg, {}, snd, l.bot()).ok());
}

TEST_CASE("let-pair motives refine the scrutinee") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  Grade B = l.bot();
  // let (x^bot, y) = p in x with a motive mentioning z re-checks
  TermPtr scrut = gpair(unit_tm(), B, unit_tm());
  TermPtr with_motive = let_pair(B, scrut, var(1, "x"), unit_ty());
  auto r = ddc_check(cfg, {}, with_motive, B);
  REQUIRE(r.ok());
  CHECK(term_eq(r.type, unit_ty()));
  // without a motive, a body type that mentions a pattern variable is refused
  TermPtr sig = sigma(B, sort("Type"), var(0));
  TermPtr p = gpair(unit_ty(), B, unit_tm(), sig);
  TermPtr dependent = let_pair(B, p, var(0, "y"));
  auto r2 = ddc_check(cfg, {}, dependent, B);
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error->message.find("motive") != std::string::npos);
  // the same elimination goes through with an explicit motive
  TermPtr motive = let_pair(B, var(0, "z"), var(1, "x"));  // pi1^bot z
  TermPtr annotated = let_pair(B, p, var(0, "y"), motive);
  auto r3 = ddc_check(cfg, {}, annotated, B);
  REQUIRE(r3.ok());
  CHECK(term_eq(r3.type, let_pair(B, p, var(1, "x"))));
}

TEST_CASE("conversion uses definitional equality at C") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  Grade B = l.bot(), T = l.top();
  // f : Pi p:^top (Pi x:^top Bool. Type). p 0^top -> p 1^top  (the ida shape)
  // realized on a concrete phantom: (\x:^top Bool. Unit)
  TermPtr phantom = glam(T, bool_ty(), unit_ty());
  TermPtr zero = inj1(unit_tm(), bool_ty());
  TermPtr one = inj2(unit_tm(), bool_ty());
  TermPtr dom = gapp(phantom, zero, T);   // phantom 0^top
  TermPtr cod = gapp(phantom, one, T);    // phantom 1^top
  TermPtr idp = glam(B, dom, var(0, "x"));
  // idp : phantom 0 -> phantom 1 by conversion at C, via an ascribed pair
  TermPtr want = pi(B, dom, shift(cod, 1));
  TermPtr packed = gpair(idp, B, unit_tm(), sigma(B, want, unit_ty()));
  auto r = ddc_check(cfg, {}, packed, B);
  REQUIRE(r.ok());
  // with C = top the same conversion is refused: the arguments differ
  Lattice two = load_lattice("elements: bot, top\norder: bot <= top\n");
  DdcConfig cfg2{&two, PtsSignature::type_in_type(), 1000};
  Grade T2 = two.top(), B2 = two.bot();
  TermPtr phantom2 = glam(T2, bool_ty(), unit_ty());
  TermPtr dom2 = gapp(phantom2, inj1(unit_tm(), bool_ty()), T2);
  TermPtr cod2 = gapp(phantom2, inj2(unit_tm(), bool_ty()), T2);
  TermPtr idp2 = glam(B2, dom2, var(0, "x"));
  TermPtr packed2 =
      gpair(idp2, B2, unit_tm(), sigma(B2, pi(B2, dom2, shift(cod2, 1)), unit_ty()));
  // DDC^T conversion is beta-conversion, and both sides reduce to Unit
  CHECK(ddc_check(cfg2, {}, packed2, B2).ok());
}

TEST_CASE("cbn steps for the dependent fragment") {
  Lattice l = li();
  Grade B = l.bot();
  TermPtr redex = gapp(glam(B, unit_ty(), var(0)), unit_tm(), B);
  auto s = ddc_step(l, redex);
  REQUIRE(s.has_value());
  CHECK(term_eq(*s, unit_tm()));
  TermPtr lp = let_pair(B, gpair(unit_tm(), B, inj1(unit_tm(), bool_ty())),
                        gpair(var(0, "y"), B, var(1, "x")));
  auto s2 = ddc_step(l, lp);
  REQUIRE(s2.has_value());
  CHECK(term_eq(*s2, gpair(inj1(unit_tm(), bool_ty()), B, unit_tm())));
  // types are values
  CHECK_FALSE(ddc_step(l, pi(B, unit_ty(), unit_ty())).has_value());
  CHECK(ddc_value(pi(B, unit_ty(), unit_ty())));
  TermPtr case_redex =
      case_of(inj2(unit_tm(), bool_ty()), glam(B, unit_ty(), var(0)),
              glam(B, unit_ty(), unit_tm()));
  auto s3 = ddc_step(l, case_redex);
  REQUIRE(s3.has_value());
  CHECK(term_eq(*s3, gapp(glam(B, unit_ty(), unit_tm()), unit_tm(), B)));
}

TEST_CASE("grading and indistinguishability for DDC") {
  Lattice l = li();
  Grade C = l.c(), T = l.top(), B = l.bot();
  TermPtr zero = inj1(unit_tm(), bool_ty());
  TermPtr one = inj2(unit_tm(), bool_ty());
  // (f 0^top) ~_C (f 1^top)
  GradeContext phi = GradeContext{}.extended("f", B);
  CHECK(ddc_indist(l, phi, gapp(var(0), zero, T), gapp(var(0), one, T), C));
  CHECK_FALSE(ddc_indist(l, phi, gapp(var(0), zero, B), gapp(var(0), one, B), C));
  // pairs: the first component is guarded
  CHECK(ddc_indist(l, {}, gpair(zero, T, unit_tm()), gpair(one, T, unit_tm()), C));
  // reflexivity on well-graded terms
  TermPtr t = glam(T, sort("Type"), glam(B, var(0), var(0)));
  CHECK(ddc_grade(l, {}, t, B));
  CHECK(ddc_indist(l, {}, t, t, B));
  // typing implies grading
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  DdcGen gen(cfg);
  int done = 0;
  for (int i = 0; i < 300; i++) {
    Rng rng = Rng::for_trial(17, i);
    auto g = gen.gen_closed(rng, B, 14);
    if (!g) continue;
    CHECK(ddc_grade(l, {}, g->term, B));
    done++;
  }
  CHECK(done > 150);
}

TEST_CASE("indistinguishability at top is structural equality") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  DdcGen gen(cfg);
  int compared = 0;
  for (int i = 0; i < 1200 && compared < 1000; i++) {
    Rng rng = Rng::for_trial(23, i);
    auto g = gen.gen_closed(rng, l.bot(), 12);
    if (!g) continue;
    auto m = mutate_unobservable(rng, l, g->term, l.bot(), Fragment::Ddc);
    TermPtr other = m ? *m : g->term;
    CHECK(ddc_indist(l, {}, g->term, other, l.top()) == term_eq(g->term, other));
    compared++;
  }
  CHECK(compared >= 900);
}

TEST_CASE("erasure: definition cases and laws") {
  Lattice l = li();
  Grade B = l.bot(), T = l.top();
  TermPtr zero = inj1(unit_tm(), bool_ty());
  // |(a^top, b)|_bot = (unit^top, |b|_bot)
  TermPtr p = gpair(zero, T, zero);
  TermPtr ep = erase(l, p, B);
  CHECK(ep->tag == Tag::GPair);
  CHECK(term_eq(ep->a, unit_tm()));
  CHECK(ep->grade == T);
  // |x|_l = x
  CHECK(term_eq(erase(l, var(3), B), var(3)));
  // erasure at top is the identity
  TermPtr t = glam(T, sort("Type"), gapp(glam(B, var(0), var(0)), unit_tm(), B));
  CHECK(term_eq(erase(l, t, T), t));
  // application arguments vanish below their grade
  TermPtr ap = gapp(var(0), zero, T);
  CHECK(term_eq(erase(l, ap, B), gapp(var(0), unit_tm(), T)));
  CHECK(term_eq(erase(l, ap, T), ap));
}

TEST_CASE("erasure simulation and canonical elements on generated terms") {
  Lattice two = load_lattice("elements: bot, top\norder: bot <= top\n");
  DdcConfig cfg{&two, PtsSignature::type_in_type(), 1000};
  DdcGen gen(cfg);
  int done = 0;
  for (int i = 0; i < 400; i++) {
    Rng rng = Rng::for_trial(29, i);
    auto g = gen.gen_closed(rng, two.bot(), 14);
    if (!g) continue;
    done++;
    TermPtr a = g->term;
    for (int s = 0; s < 40; s++) {
      REQUIRE(ddc_indist(two, {}, a, erase(two, a, two.bot()), two.bot()));
      auto next = ddc_step(two, a);
      TermPtr ea = erase(two, a, two.bot());
      auto enext = ddc_step(two, ea);
      REQUIRE(next.has_value() == enext.has_value());
      REQUIRE(ddc_value(a) == ddc_value(ea));
      if (!next) break;
      REQUIRE(term_eq(*enext, erase(two, *next, two.bot())));
      a = *next;
    }
    if (auto m = mutate_unobservable(rng, two, g->term, two.bot(), Fragment::Ddc)) {
      REQUIRE(ddc_indist(two, {}, g->term, *m, two.bot()));
      REQUIRE(term_eq(erase(two, g->term, two.bot()), erase(two, *m, two.bot())));
    }
  }
  CHECK(done > 200);
}

TEST_CASE("regularity: synthesized types re-check against a sort") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  DdcGen gen(cfg);
  int done = 0;
  for (int i = 0; i < 250; i++) {
    Rng rng = Rng::for_trial(41, i);
    Grade lv = rng.chance(50) ? l.bot() : l.c();
    auto g = gen.gen_closed(rng, lv, 14);
    if (!g) continue;
    auto reg = ddc_check_truncated_top(cfg, {}, g->type);
    REQUIRE(reg.ok());
    REQUIRE(reg.type->tag == Tag::Sort);
    done++;
  }
  CHECK(done > 150);
}

TEST_CASE("beta closure: one CBN step joins within two rounds") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  DdcGen gen(cfg);
  int stepped = 0;
  for (int i = 0; i < 250 && stepped < 120; i++) {
    Rng rng = Rng::for_trial(43, i);
    auto g = gen.gen_closed(rng, l.bot(), 14);
    if (!g) continue;
    auto next = ddc_step(l, g->term);
    if (!next) continue;
    for (Grade at : {l.bot(), l.c()}) {
      auto r = def_eq(l, {}, g->term, *next, at, 10);
      REQUIRE(r.equal());
      REQUIRE(r.steps_used <= 2);
    }
    stepped++;
  }
  CHECK(stepped >= 100);
}

TEST_CASE("pts errors are named") {
  Lattice l = li();
  PtsSignature pts;
  pts.sorts = {"Type", "Kind"};
  pts.axioms = {{"Type", "Kind"}, {"Kind", "Kind"}};
  pts.rules = {{"Type", "Type", "Type"}};
  DdcConfig cfg{&l, pts, 1000};
  // Kind : Kind has an axiom but (Kind, Type) has no rule
  TermPtr bad = pi(l.bot(), sort("Type"), unit_ty());
  auto r = ddc_check(cfg, {}, bad, l.bot());
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->rule == "NoRule");
  PtsSignature one = PtsSignature::type_in_type();
  DdcConfig cfg2{&l, one, 1000};
  auto r2 = ddc_check(cfg2, {}, sort("Kind"), l.bot());
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error->rule == "NoAxiom");
}

TEST_CASE("fuel exhaustion is distinct from mismatch") {
  Lattice l = li();
  Grade B = l.bot();
  // the scrutinee's ascribed type takes three weak-head steps to expose its
  // Sigma; with fuel 1 this is an exhaustion, never a shape mismatch
  TermPtr idty = glam(B, sort("Type"), var(0));
  TermPtr chain = sigma(B, unit_ty(), unit_ty());
  for (int i = 0; i < 3; i++) chain = gapp(idty, chain, B);
  TermPtr scrut = gpair(unit_tm(), B, unit_tm(), chain);
  TermPtr t = let_pair(B, scrut, var(0, "y"));
  DdcConfig low{&l, PtsSignature::type_in_type(), 1};
  auto r = ddc_check(low, {}, t, B);
  REQUIRE_FALSE(r.ok());
  CHECK(r.error->rule == "FuelExhausted");
  DdcConfig enough{&l, PtsSignature::type_in_type(), 16};
  auto r2 = ddc_check(enough, {}, t, B);
  REQUIRE(r2.ok());
  CHECK(term_eq(r2.type, unit_ty()));
}

TEST_CASE("derivation traces show the truncation detour") {
  Lattice l = li();
  DdcConfig cfg{&l, PtsSignature::type_in_type(), 1000};
  TermPtr id = parse("\\x:^top Type. \\y:^bot x. y", l, Fragment::Ddc);
  Trace tr;
  REQUIRE(ddc_check(cfg, {}, id, l.bot(), &tr).ok());
  std::string rendered = tr.render();
  CHECK(rendered.find("T-AbsC") != std::string::npos);
  CHECK(rendered.find("CT-Top") != std::string::npos);
  CHECK(rendered.find("C /\\ Omega") != std::string::npos);
}
