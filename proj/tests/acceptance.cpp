// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Expects the corpus directory as argv[1].

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gradia/ddc.hpp"
#include "gradia/generate.hpp"
#include "gradia/harness.hpp"
#include "gradia/parser.hpp"
#include "gradia/printer.hpp"
#include "gradia/suites.hpp"
#include "gradia/translate.hpp"

using namespace gradia;

namespace {

std::string g_corpus;
int g_failures = 0;

std::string slurp(const std::string& rel) {
  std::ifstream in(g_corpus + "/" + rel);
  if (!in) throw std::runtime_error("missing corpus file " + rel);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion(int n, const std::string& what, bool ok, const std::string& note = "") {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what;
  if (!note.empty()) std::cout << " [" << note << "]";
  std::cout << "\n";
  if (!ok) g_failures++;
}

struct Instances {
  Lattice two = load_lattice(slurp("lattices/two.lat"));
  Lattice li = load_lattice(slurp("lattices/li.lat"));
  Lattice lmh = load_lattice(slurp("lattices/lmh.lat"));
};

// --- criterion 1: golden corpus ------------------------------------------------

int g1_checked = 0;

bool expect_type(const Lattice& lat, const PtsSignature& pts, const std::string& file,
                 Fragment frag, const std::string& level, const std::string& want) {
  g1_checked++;
  TermPtr t = parse(slurp("golden/" + file), lat, frag, pts.sorts);
  Grade l = *lat.lookup(level);
  TypeResult r;
  if (frag == Fragment::Ddc) {
    DdcConfig cfg{&lat, pts, 1000};
    r = ddc_check(cfg, {}, t, l);
  } else if (frag == Fragment::Seal) {
    r = seal_check(lat, {}, t, l);
  } else {
    r = sdc_check(lat, {}, t, l);
  }
  if (!r.ok()) {
    std::cout << "  golden " << file << ": expected a type, got " << r.error->render()
              << "\n";
    return false;
  }
  std::string got = print(r.type, lat);
  if (got != want) {
    std::cout << "  golden " << file << ": expected '" << want << "', got '" << got
              << "'\n";
    return false;
  }
  return true;
}

bool expect_error(const Lattice& lat, const PtsSignature& pts, const std::string& file,
                  Fragment frag, const std::string& level, const std::string& rule) {
  g1_checked++;
  TermPtr t = parse(slurp("golden/" + file), lat, frag, pts.sorts);
  Grade l = *lat.lookup(level);
  TypeResult r;
  if (frag == Fragment::Ddc) {
    DdcConfig cfg{&lat, pts, 1000};
    r = ddc_check(cfg, {}, t, l);
  } else if (frag == Fragment::Seal) {
    r = seal_check(lat, {}, t, l);
  } else {
    r = sdc_check(lat, {}, t, l);
  }
  if (r.ok()) {
    std::cout << "  golden " << file << ": expected rejection (" << rule
              << "), got type " << print(r.type, lat) << "\n";
    return false;
  }
  if (r.error->rule != rule) {
    std::cout << "  golden " << file << ": expected rule " << rule << ", got "
              << r.error->rule << "\n";
    return false;
  }
  return true;
}

bool golden_corpus(const Instances& in) {
  PtsSignature tit = PtsSignature::type_in_type();
  PtsSignature coc = load_pts(slurp("pts/coc.pts"));
  bool ok = true;
  const std::string boolty = "Unit + Unit";

  // the opening security judgment, at observer M
  ok &= expect_type(in.lmh, tit, "sec_good.sdc", Fragment::Sdc, "M", boolty);
  ok &= expect_error(in.lmh, tit, "sec_bad.sdc", Fragment::Sdc, "M", "SDC-Var");

  // the polymorphic identity and an application of it
  ok &= expect_type(in.li, tit, "id.ddc", Fragment::Ddc, "bot",
                    "Pi x:^top Type. Pi y:^bot x. x");
  ok &= expect_type(in.li, tit, "id_applied.ddc", Fragment::Ddc, "bot", boolty);

  // eta^H True ~_L eta^H False, but not at H
  {
    g1_checked++;
    TermPtr tt = parse(slurp("golden/etaH_true.sdc"), in.two, Fragment::Sdc);
    TermPtr ff = parse(slurp("golden/etaH_false.sdc"), in.two, Fragment::Sdc);
    bool low = sdc_indist(in.two, {}, tt, ff, in.two.bot());
    bool high = sdc_indist(in.two, {}, tt, ff, in.two.top());
    if (!(low && !high)) {
      std::cout << "  golden eta indistinguishability: low=" << low << " high=" << high
                << "\n";
      ok = false;
    }
  }

  // sealing: accepted at top, clearance error at bot; translation preserves
  ok &= expect_type(in.two, tit, "unseal.seal", Fragment::Seal, "top", "Unit");
  ok &= expect_error(in.two, tit, "unseal_bad.seal", Fragment::Seal, "bot",
                     "UnsealClearance");
  {
    g1_checked++;
    TermPtr a = parse(slurp("golden/unseal.seal"), in.two, Fragment::Seal);
    TermPtr abar = seal_to_sdc(a);
    auto r = sdc_check(in.two, {}, abar, in.two.top());
    if (!r.ok() || print(r.type, in.two) != "Unit") {
      std::cout << "  golden unseal translation failed to re-check\n";
      ok = false;
    }
    auto reducts = full_step(in.two, abar, Fragment::Sdc);
    if (reducts.empty() || !term_eq(reducts[0], unit_tm())) {
      std::cout << "  golden unseal translation does not simulate\n";
      ok = false;
    }
  }

  // strong irrelevant sigma: projection grades
  ok &= expect_type(in.li, tit, "proj_c.ddc", Fragment::Ddc, "C", "Unit");
  ok &= expect_error(in.li, tit, "proj_c.ddc", Fragment::Ddc, "bot", "VarGradeTooHigh");
  ok &= expect_error(in.li, tit, "proj_top_bad.ddc", Fragment::Ddc, "C",
                     "VarGradeTooHigh");
  ok &= expect_type(in.li, tit, "proj_snd.ddc", Fragment::Ddc, "bot", "Unit");

  // phantom equality at C, inequality of head forms
  {
    g1_checked++;
    TermPtr p0 = parse(slurp("golden/phantom0.ddc"), in.li, Fragment::Ddc);
    TermPtr p1 = parse(slurp("golden/phantom1.ddc"), in.li, Fragment::Ddc);
    auto r = def_eq(in.li, {}, p0, p1, in.li.c(), 1000);
    if (!r.equal()) {
      std::cout << "  golden phantom: expected Equal, got " << verdict_name(r.verdict)
                << "\n";
      ok = false;
    }
    auto r2 = def_eq(in.li, {},
                     parse(slurp("golden/nat_like.ddc"), in.li, Fragment::Ddc),
                     parse(slurp("golden/unit_ty.ddc"), in.li, Fragment::Ddc),
                     in.li.c(), 1000);
    if (r2.verdict != Verdict::NotEqual) {
      std::cout << "  golden Nat/Unit analogue: expected NotEqual, got "
                << verdict_name(r2.verdict) << "\n";
      ok = false;
    }
  }

  // the negative variable golden
  ok &= expect_error(in.two, tit, "bad_var.sdc", Fragment::Sdc, "bot", "SDC-Var");
  ok &= expect_type(in.two, tit, "bad_var.sdc", Fragment::Sdc, "top", "Unit");

  // conversion through weak-head normalization
  ok &= expect_type(in.li, tit, "conv_beta.ddc", Fragment::Ddc, "bot",
                    "Pi y:^bot (\\x:^bot Type. x) Unit^bot. (\\x:^bot Type. x) Unit^bot");

  // ida: accepted under the irrelevance lattice, rejected when C = top
  ok &= expect_type(
      in.li, tit, "ida.ddc", Fragment::Ddc, "bot",
      "Pi f:^bot (Pi x:^top Unit + Unit. Type). Sigma g:^bot (Pi w:^bot f (inj1 unit : "
      "Unit + Unit)^top. f (inj2 unit : Unit + Unit)^top). Unit");
  ok &= expect_error(in.two, tit, "ida.ddc", Fragment::Ddc, "bot", "ConversionFailed");

  // modal round trip, case elimination, CoC formation
  ok &= expect_type(in.two, tit, "modal.sdc", Fragment::Sdc, "bot",
                    "T^top (Unit + Unit) -> T^top (Unit + Unit)");
  ok &= expect_type(in.two, tit, "case_bool.sdc", Fragment::Sdc, "bot", boolty);
  ok &= expect_type(in.li, coc, "coc_pi.ddc", Fragment::Ddc, "bot", "Type");

  // evaluation goldens
  {
    g1_checked++;
    TermPtr t = parse(slurp("golden/eval_beta.ddc"), in.li, Fragment::Ddc);
    auto s = ddc_step(in.li, t);
    if (!s || print(*s, in.li) != "(inj2 unit : Unit + Unit)") {
      // the redex substitutes the ascribed injection
      std::cout << "  golden eval_beta: got "
                << (s ? print(*s, in.li) : std::string("<stuck>")) << "\n";
      ok = false;
    }
    TermPtr lp = parse(slurp("golden/eval_letpair.ddc"), in.li, Fragment::Ddc);
    auto s2 = ddc_step(in.li, lp);
    if (!s2 || !term_eq(*s2, unit_tm())) {
      std::cout << "  golden eval_letpair failed\n";
      ok = false;
    }
  }

  // erasure golden: the invisible argument becomes unit
  {
    g1_checked++;
    TermPtr t = parse(slurp("golden/erase_me.ddc"), in.li, Fragment::Ddc);
    TermPtr e = erase(in.li, t, in.li.bot());
    if (e->tag != Tag::GApp || !term_eq(e->b, unit_tm())) {
      std::cout << "  golden erase_me: " << print(e, in.li) << "\n";
      ok = false;
    }
  }

  // embedding golden
  {
    g1_checked++;
    TermPtr t = parse(slurp("golden/embed_me.sdc"), in.two, Fragment::Sdc);
    TermPtr img = sdc_to_ddct(in.two, t);
    if (img->tag != Tag::LetPair ||
        print(img, in.two) !=
            "let (x^top, y_) = (unit^top, unit) in unit") {
      std::cout << "  golden embed_me: " << print(img, in.two) << "\n";
      ok = false;
    }
  }
  return ok;
}

// --- criterion 2: oracle equivalence -------------------------------------------

bool oracle_equivalence(const Instances& in) {
  const Lattice& l = in.two;
  Enumerator en(l, Fragment::Sdc);
  Oracle oracle(l, Fragment::Sdc);
  // contexts with up to two free variables over the two-point lattice
  std::vector<Context> contexts;
  contexts.push_back({});
  contexts.push_back(Context{}.extended("x", l.top(), sum(unit_ty(), unit_ty())));
  contexts.push_back(Context{}.extended("x", l.bot(), tmonad(l.top(), unit_ty())));
  contexts.push_back(Context{}
                         .extended("x", l.top(), sum(unit_ty(), unit_ty()))
                         .extended("y", l.bot(), tmonad(l.top(), unit_ty())));
  long long checked = 0, agreed = 0, typed = 0;
  for (auto& omega : contexts) {
    int depth = omega.size();
    for (int size = 1; size <= 7; size++) {
      for (auto& t : en.terms(size, depth)) {
        for (auto gr : l.all()) {
          checked++;
          auto fast = sdc_check(l, omega, t, gr);
          auto slow = oracle.check(omega, t, gr);
          bool same = fast.ok() == slow.has_value() &&
                      (!fast.ok() || term_eq(fast.type, *slow));
          if (same) {
            agreed++;
            if (fast.ok()) typed++;
          } else if (agreed == checked - 1) {
            std::cout << "  first disagreement: " << print(t, l, {"x", "y"}) << " at "
                      << l.name(gr) << "\n";
          }
        }
      }
    }
  }
  std::cout << "  " << checked << " judgments compared, " << typed << " derivable\n";
  return agreed == checked && checked > 100000;
}

// --- helpers for the statistical criteria --------------------------------------

SuiteReport run_until(const std::string& name, GenConfig cfg, int required_passed) {
  SuiteReport total;
  total.name = name;
  total.seed = cfg.seed;
  for (int round = 0; round < 8 && total.passed < required_passed; round++) {
    SuiteReport r = run_suite(name, cfg);
    total.trials += r.trials;
    total.passed += r.passed;
    total.failed += r.failed;
    total.skipped += r.skipped;
    for (auto& c : r.counterexamples) total.counterexamples.push_back(c);
    cfg.seed += 7919;  // fresh stream per top-up round
    cfg.trials = std::max(100, (required_passed - total.passed) + 200);
  }
  return total;
}

std::string stats(const SuiteReport& r) {
  std::ostringstream os;
  os << r.passed << " passed";
  if (r.failed) os << ", " << r.failed << " FAILED";
  if (r.skipped) os << ", " << r.skipped << " vacuous";
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  g_corpus = argc > 1 ? argv[1] : "corpus";
  Instances in;
  PtsSignature coc = load_pts(slurp("pts/coc.pts"));

  // 1. golden corpus
  {
    auto start = std::chrono::steady_clock::now();
    bool ok = golden_corpus(in);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    criterion(1, "golden corpus (" + std::to_string(g1_checked) + " checks)",
              ok && ms < 2000.0,
              "runtime " + std::to_string(static_cast<int>(ms)) + " ms, budget 2000 ms");
  }

  // 2. oracle equivalence on all SDC terms of size <= 7
  {
    auto start = std::chrono::steady_clock::now();
    bool ok = oracle_equivalence(in);
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    criterion(2, "oracle equivalence, SDC size <= 7, two-point lattice",
              ok && ms < 300000.0,
              "runtime " + std::to_string(static_cast<int>(ms / 1000)) + " s, budget 300 s");
  }

  // 3. non-interference: 10,000 pairs per calculus
  {
    GenConfig cfg;
    cfg.seed = 101;
    cfg.lattice = &in.lmh;
    cfg.fragment = Fragment::Sdc;
    cfg.trials = 10500;
    cfg.max_size = 18;
    SuiteReport sdc = run_until("noninterference", cfg, 10000);
    cfg.lattice = &in.li;
    cfg.fragment = Fragment::Ddc;
    cfg.max_size = 16;
    SuiteReport ddc = run_until("noninterference", cfg, 10000);
    for (auto& ce : sdc.counterexamples) std::cout << ce << "\n";
    for (auto& ce : ddc.counterexamples) std::cout << ce << "\n";
    criterion(3, "non-interference, 10,000 tandem pairs per calculus",
              sdc.failed == 0 && ddc.failed == 0 && sdc.passed >= 10000 &&
                  ddc.passed >= 10000,
              "sdc: " + stats(sdc) + "; ddc: " + stats(ddc));
  }

  // 4. erasure: 5,000 well-typed closed DDC^T terms
  {
    GenConfig cfg;
    cfg.seed = 202;
    cfg.lattice = &in.two;
    cfg.fragment = Fragment::Ddc;
    cfg.trials = 5200;
    cfg.max_size = 16;
    SuiteReport r = run_until("erasure", cfg, 5000);
    for (auto& ce : r.counterexamples) std::cout << ce << "\n";
    criterion(4, "erasure simulation + canonical element + indistinguishability",
              r.failed == 0 && r.passed >= 5000, stats(r));
  }

  // 5. preservation + progress: 10,000 closed terms per calculus
  {
    GenConfig cfg;
    cfg.seed = 303;
    cfg.max_size = 16;
    bool ok = true;
    std::string note;
    for (Fragment frag : {Fragment::Sdc, Fragment::Ddc}) {
      cfg.fragment = frag;
      cfg.lattice = frag == Fragment::Sdc ? &in.lmh : &in.li;
      cfg.trials = 10300;
      SuiteReport r = run_until("progress", cfg, 10000);
      for (auto& ce : r.counterexamples) std::cout << ce << "\n";
      ok = ok && r.failed == 0 && r.passed >= 10000;
      note += std::string(frag == Fragment::Sdc ? "sdc: " : "; ddc: ") + stats(r);
    }
    criterion(5, "preservation + progress, 10,000 closed terms per calculus", ok, note);
  }

  // 6. metatheory mutation: 2,000 instances per lemma per calculus
  {
    bool ok = true;
    std::string note;
    for (const char* name :
         {"narrowing", "upgrading", "subsumption", "weakening", "substitution"}) {
      for (Fragment frag : {Fragment::Sdc, Fragment::Ddc}) {
        GenConfig cfg;
        cfg.seed = 404;
        cfg.max_size = 14;
        cfg.fragment = frag;
        cfg.lattice = frag == Fragment::Sdc ? &in.lmh : &in.li;
        cfg.trials = 2100;
        SuiteReport r = run_until(name, cfg, 2000);
        for (auto& ce : r.counterexamples) std::cout << ce << "\n";
        if (r.failed != 0 || r.passed < 2000) {
          ok = false;
          note += std::string(name) + "/" +
                  (frag == Fragment::Sdc ? "sdc" : "ddc") + ": " + stats(r) + "; ";
        }
      }
    }
    criterion(6, "narrowing/upgrading/subsumption/weakening/substitution x2000", ok,
              note.empty() ? "all lemmas at 2000+ instances" : note);
  }

  // 7. translation suite, exact on enumerated terms up to size 6
  {
    GenConfig cfg;
    cfg.seed = 505;
    cfg.lattice = &in.li;
    cfg.max_size = 6;
    cfg.fragment = Fragment::Sdc;
    SuiteReport r = run_suite("translation-sim", cfg);
    for (auto& ce : r.counterexamples) std::cout << ce << "\n";
    criterion(7, "translation simulations on all terms of size <= 6",
              r.failed == 0 && r.passed > 1000, stats(r));
  }

  // 8. consistency fuzz: 10,000 def_eq queries at C, CoC instance, fuel 1000
  {
    GenConfig cfg;
    cfg.seed = 606;
    cfg.lattice = &in.li;
    cfg.pts = coc;
    cfg.fragment = Fragment::Ddc;
    cfg.trials = 10300;
    cfg.max_size = 14;
    SuiteReport r = run_until("defeq-consistency", cfg, 10000);
    for (auto& ce : r.counterexamples) std::cout << ce << "\n";
    criterion(8, "defeq consistency fuzz, 10,000 queries, no fuel exhaustion",
              r.failed == 0 && r.passed >= 10000, stats(r));
  }

  std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED") << " ("
            << (8 - g_failures) << "/8)\n";
  return g_failures == 0 ? 0 : 1;
}
