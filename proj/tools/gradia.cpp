// gradia: batch front-end for the graded calculi.
//
// Subcommands: check, eval, erase, eq, translate, suite, noninterfere.
// Exit codes: 0 ok, 1 type error, 2 parse error, 3 fuel exhausted,
// 4 bad lattice/pts config, 5 property-suite failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "gradia/ddc.hpp"
#include "gradia/parser.hpp"
#include "gradia/printer.hpp"
#include "gradia/sdc.hpp"
#include "gradia/suites.hpp"
#include "gradia/translate.hpp"

using namespace gradia;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTypeError = 1;
constexpr int kExitParseError = 2;
constexpr int kExitFuel = 3;
constexpr int kExitConfig = 4;
constexpr int kExitSuite = 5;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Options {
  std::string lattice_path, pts_path;
  std::string level = "bot";
  int fuel = 1000;
  bool trace = false;
  bool timing = false;
  std::string system;  // sdc | seal | ddc; empty = by extension
  uint64_t seed = 1;
  int trials = 200;
  std::string report_dir;
};

Fragment fragment_for(const Options& opt, const std::string& path) {
  std::string sys = opt.system;
  if (sys.empty()) {
    auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".sdc") sys = "sdc";
    else if (ext == ".seal") sys = "seal";
    else sys = "ddc";
  }
  if (sys == "sdc") return Fragment::Sdc;
  if (sys == "seal") return Fragment::Seal;
  if (sys == "ddc") return Fragment::Ddc;
  throw CLI::ValidationError("--system must be sdc, seal or ddc");
}

struct Instance {
  Lattice lattice;
  PtsSignature pts;
};

Instance load_instance(const Options& opt) {
  Lattice lat = opt.lattice_path.empty()
                    ? load_lattice("elements: bot, top\norder: bot <= top")
                    : load_lattice(read_file(opt.lattice_path));
  PtsSignature pts = opt.pts_path.empty() ? PtsSignature::type_in_type()
                                          : load_pts(read_file(opt.pts_path));
  return {std::move(lat), std::move(pts)};
}

Grade resolve_level(const Lattice& lat, const std::string& name) {
  auto g = lat.lookup(name);
  if (!g) throw std::runtime_error("level '" + name + "' is not in the lattice");
  return *g;
}

struct CheckOutput {
  std::string text;
  int code = kExitOk;
};

CheckOutput check_one(const Instance& inst, const Options& opt, const std::string& path) {
  CheckOutput out;
  Fragment frag = fragment_for(opt, path);
  Grade level = resolve_level(inst.lattice, opt.level);
  TermPtr term;
  try {
    term = parse(read_file(path), inst.lattice, frag, inst.pts.sorts.empty()
                                                          ? default_sort_names()
                                                          : inst.pts.sorts);
  } catch (const ParseError& e) {
    out.text = path + ": parse error: " + e.what();
    out.code = kExitParseError;
    return out;
  }
  Trace trace;
  Trace* tr = opt.trace ? &trace : nullptr;
  TypeResult r;
  if (frag == Fragment::Ddc) {
    DdcConfig cfg{&inst.lattice, inst.pts, opt.fuel};
    // requests at top are routed through truncation
    r = (level == inst.lattice.top() && !(inst.lattice.c() == inst.lattice.top()))
            ? ddc_check_truncated_top(cfg, {}, term, tr)
            : ddc_check(cfg, {}, term, level, tr);
  } else if (frag == Fragment::Seal) {
    r = seal_check(inst.lattice, {}, term, level, tr);
  } else {
    r = sdc_check(inst.lattice, {}, term, level, tr);
  }
  if (opt.trace) out.text += trace.render();
  if (r.ok()) {
    out.text += path + ": " + print(r.type, inst.lattice);
  } else {
    out.text += path + ": error: " + r.error->render();
    out.code = r.error->rule == "FuelExhausted" ? kExitFuel : kExitTypeError;
  }
  return out;
}

int cmd_check(const Options& opt, const std::vector<std::string>& files) {
  Instance inst = load_instance(opt);
  // files are checked concurrently; output stays in input order
  std::vector<std::future<CheckOutput>> futures;
  futures.reserve(files.size());
  for (auto& f : files)
    futures.push_back(std::async(files.size() > 1 ? std::launch::async
                                                  : std::launch::deferred,
                                 [&, f] { return check_one(inst, opt, f); }));
  int code = kExitOk;
  for (auto& fut : futures) {
    CheckOutput r = fut.get();
    std::cout << r.text << "\n";
    if (r.code != kExitOk && code == kExitOk) code = r.code;
  }
  return code;
}

int cmd_eval(const Options& opt, const std::string& file) {
  Instance inst = load_instance(opt);
  Fragment frag = fragment_for(opt, file);
  TermPtr term;
  try {
    term = parse(read_file(file), inst.lattice, frag, inst.pts.sorts);
  } catch (const ParseError& e) {
    std::cout << "parse error: " << e.what() << "\n";
    return kExitParseError;
  }
  for (int i = 0; i < opt.fuel; i++) {
    auto next = frag == Fragment::Ddc ? ddc_step(inst.lattice, term) : sdc_step(term);
    if (!next) {
      std::cout << print(term, inst.lattice) << "\n";
      return kExitOk;
    }
    term = *next;
  }
  std::cout << "fuel exhausted after " << opt.fuel << " steps\n";
  return kExitFuel;
}

int cmd_erase(const Options& opt, const std::string& file) {
  Instance inst = load_instance(opt);
  Grade level = resolve_level(inst.lattice, opt.level);
  TermPtr term;
  try {
    term = parse(read_file(file), inst.lattice, Fragment::Ddc, inst.pts.sorts);
  } catch (const ParseError& e) {
    std::cout << "parse error: " << e.what() << "\n";
    return kExitParseError;
  }
  std::cout << print(erase(inst.lattice, term, level), inst.lattice) << "\n";
  return kExitOk;
}

int cmd_eq(const Options& opt, const std::string& f1, const std::string& f2) {
  Instance inst = load_instance(opt);
  Grade level = resolve_level(inst.lattice, opt.level);
  TermPtr a, b;
  try {
    a = parse(read_file(f1), inst.lattice, Fragment::Ddc, inst.pts.sorts);
    b = parse(read_file(f2), inst.lattice, Fragment::Ddc, inst.pts.sorts);
  } catch (const ParseError& e) {
    std::cout << "parse error: " << e.what() << "\n";
    return kExitParseError;
  }
  JoinResult r = def_eq(inst.lattice, {}, a, b, level, opt.fuel);
  std::cout << verdict_name(r.verdict) << "\n";
  if (opt.trace && r.verdict == Verdict::Equal) {
    std::cout << "  left  ~ " << print(r.witness_left, inst.lattice) << "\n";
    std::cout << "  right ~ " << print(r.witness_right, inst.lattice) << "\n";
  }
  return r.verdict == Verdict::FuelExhausted ? kExitFuel : kExitOk;
}

int cmd_translate(const Options& opt, const std::string& from, const std::string& to,
                  const std::string& file, bool star_erase) {
  Instance inst = load_instance(opt);
  try {
    if (from == "seal" && to == "sdc") {
      TermPtr a = parse(read_file(file), inst.lattice, Fragment::Seal, inst.pts.sorts);
      std::cout << print(seal_to_sdc(a), inst.lattice) << "\n";
      return kExitOk;
    }
    if (from == "sdc" && (to == "ddc" || to == "ddct")) {
      TermPtr a = parse(read_file(file), inst.lattice, Fragment::Sdc, inst.pts.sorts);
      std::cout << print(sdc_to_ddct(inst.lattice, a), inst.lattice) << "\n";
      return kExitOk;
    }
    if (from == "ddc" && to == "icc") {
      TermPtr a = parse(read_file(file), inst.lattice, Fragment::Ddc, inst.pts.sorts);
      IccPtr t = ddc_to_icc(inst.lattice, a, inst.lattice.c());
      if (star_erase) {
        auto e = icc_star_erase(t);
        if (!e) {
          std::cout << "error: star erasure undefined (implicit binder used relevantly)\n";
          return kExitTypeError;
        }
        std::cout << icc_print(*e) << "\n";
      } else {
        std::cout << icc_print(t) << "\n";
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    std::cout << "parse error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const TranslateError& e) {
    std::cout << "error: " << e.what() << "\n";
    return kExitTypeError;
  }
  std::cout << "unsupported translation " << from << " -> " << to << "\n";
  return kExitConfig;
}

int cmd_suite(const Options& opt, const std::string& name) {
  Instance inst = load_instance(opt);
  GenConfig cfg;
  cfg.seed = opt.seed;
  cfg.lattice = &inst.lattice;
  cfg.pts = inst.pts;
  cfg.trials = opt.trials;
  cfg.fragment = opt.system == "ddc" ? Fragment::Ddc : Fragment::Sdc;
  SuiteReport report = run_suite(name, cfg);
  std::cout << report.summary(opt.timing) << "\n";
  for (auto& ce : report.counterexamples) std::cout << ce << "\n";
  if (!opt.report_dir.empty()) {
    std::filesystem::create_directories(opt.report_dir);
    std::ofstream out(std::filesystem::path(opt.report_dir) / (name + ".report"));
    out << report.detail();
  }
  return report.ok() ? kExitOk : kExitSuite;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graded dependency calculi: check, run, erase, compare, translate"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags are accepted after subcommands too

  Options opt;
  app.add_option("--lattice", opt.lattice_path, "lattice config file");
  app.add_option("--pts", opt.pts_path, "PTS signature file (or 'type-in-type'/'coc')");
  app.add_option("--level", opt.level, "observer grade (default bot)");
  app.add_option("--fuel", opt.fuel, "fuel for evaluation and conversion");
  app.add_flag("--trace", opt.trace, "dump the derivation tree");
  app.add_flag("--timing", opt.timing, "include wall time in summaries");
  app.add_option("--system", opt.system, "sdc | seal | ddc (default: by extension)");
  app.add_option("--seed", opt.seed, "property-suite seed");
  app.add_option("--trials", opt.trials, "property-suite trials");
  app.add_option("--report-dir", opt.report_dir, "where to write suite detail files");

  std::vector<std::string> files;
  auto* check = app.add_subcommand("check", "type-check files");
  check->add_option("files", files, "input files")->required();

  std::string file;
  auto* eval = app.add_subcommand("eval", "CBN-evaluate a file");
  eval->add_option("file", file, "input file")->required();

  auto* erase_cmd = app.add_subcommand("erase", "erase at --level");
  erase_cmd->add_option("file", file, "input file")->required();

  std::string file2;
  auto* eq = app.add_subcommand("eq", "definitional equality at --level");
  eq->add_option("left", file, "left term file")->required();
  eq->add_option("right", file2, "right term file")->required();

  std::string from, to;
  bool star = false;
  auto* tr = app.add_subcommand("translate", "translate between calculi");
  tr->add_option("--from", from, "seal | sdc | ddc")->required();
  tr->add_option("--to", to, "sdc | ddc | icc")->required();
  tr->add_flag("--star-erase", star, "apply ICC* erasure to the result");
  tr->add_option("file", file, "input file")->required();

  std::string suite_name;
  auto* suite = app.add_subcommand("suite", "run a property suite");
  suite->add_option("name", suite_name, "suite name")->required();

  auto* ni = app.add_subcommand("noninterfere", "run the non-interference suite");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return cmd_check(opt, files);
    if (eval->parsed()) return cmd_eval(opt, file);
    if (erase_cmd->parsed()) return cmd_erase(opt, file);
    if (eq->parsed()) return cmd_eq(opt, file, file2);
    if (tr->parsed()) return cmd_translate(opt, from, to, file, star);
    if (suite->parsed()) return cmd_suite(opt, suite_name);
    if (ni->parsed()) return cmd_suite(opt, "noninterference");
  } catch (const LatticeError& e) {
    std::cerr << "lattice error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string what = e.what();
    if (what.find("pts") != std::string::npos) return kExitConfig;
    return kExitConfig;
  }
  return kExitOk;
}
