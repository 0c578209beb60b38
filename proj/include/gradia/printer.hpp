#pragma once

#include <string>
#include <vector>

#include "gradia/syntax.hpp"

namespace gradia {

namespace print_detail {

// Precedence levels, loosest first: 0 binder forms, 1 arrow, 2 sum,
// 3 product, 4 application, 5 unary prefix, 6 atom.
class Printer {
 public:
  Printer(const Lattice& lat, std::vector<std::string> free_names)
      : lat_(lat), scope_(std::move(free_names)) {}

  std::string run(const TermPtr& t, int level) { return go(t, level); }

 private:
  std::string sup(Grade g) { return "^" + lat_.name(g); }

  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    std::string name = base;
    while (taken(name)) name += "'";
    return name;
  }
  bool taken(const std::string& n) const {
    for (auto& s : scope_)
      if (s == n) return true;
    return false;
  }

  std::string wrap(bool cond, std::string s) { return cond ? "(" + std::move(s) + ")" : std::move(s); }

  std::string binder_hint(const Term& t, size_t i, const char* fallback) {
    return i < t.hints.size() && !t.hints[i].empty() ? t.hints[i] : fallback;
  }

  std::string go(const TermPtr& t, int level) {
    const Term& n = *t;
    switch (n.tag) {
      case Tag::Var: {
        int i = static_cast<int>(scope_.size()) - 1 - n.var;
        if (i >= 0) return scope_[i];
        return "_v" + std::to_string(n.var - static_cast<int>(scope_.size()));
      }
      case Tag::Sort: return n.sort;
      case Tag::UnitTy: return "Unit";
      case Tag::UnitTm: return "unit";
      case Tag::SimpleArrow:
        return wrap(level > 1, go(n.a, 2) + " -> " + go(n.b, 1));
      case Tag::Sum:
        return wrap(level > 2, go(n.a, 2) + " + " + go(n.b, 3));
      case Tag::SimpleProd:
        return wrap(level > 3, go(n.a, 3) + " * " + go(n.b, 4));
      case Tag::TMonad:
        return wrap(level > 5, "T" + sup(n.grade) + " " + go(n.a, 6));
      case Tag::Lam: {
        std::string x = fresh(binder_hint(n, 0, "x"));
        std::string dom = go(n.a, 1);
        scope_.push_back(x);
        std::string body = go(n.b, 0);
        scope_.pop_back();
        return wrap(level > 0, "\\" + x + ":" + dom + ". " + body);
      }
      case Tag::GLam: {
        std::string x = fresh(binder_hint(n, 0, "x"));
        std::string dom = go(n.a, 1);
        scope_.push_back(x);
        std::string body = go(n.b, 0);
        scope_.pop_back();
        return wrap(level > 0, "\\" + x + ":" + sup(n.grade) + " " + dom + ". " + body);
      }
      case Tag::Pi:
      case Tag::Sigma: {
        std::string x = fresh(binder_hint(n, 0, "x"));
        std::string dom = go(n.a, 1);
        scope_.push_back(x);
        std::string body = go(n.b, 0);
        scope_.pop_back();
        return wrap(level > 0, std::string(n.tag == Tag::Pi ? "Pi " : "Sigma ") + x + ":" +
                                   sup(n.grade) + " " + dom + ". " + body);
      }
      case Tag::App:
        return wrap(level > 4, go(n.a, 4) + " " + go(n.b, 6));
      case Tag::GApp:
        return wrap(level > 4, go(n.a, 4) + " " + go(n.b, 6) + sup(n.grade));
      case Tag::Pair:
        return "(" + go(n.a, 0) + ", " + go(n.b, 0) + ")";
      case Tag::GPair: {
        // first component at unary level so a trailing argument grade cannot
        // swallow the pair grade on reparse
        std::string inner = "(" + go(n.a, 5) + sup(n.grade) + ", " + go(n.b, 0) + ")";
        if (n.ann) return "(" + inner + " : " + go(n.ann, 0) + ")";
        return inner;
      }
      case Tag::Proj1:
        return wrap(level > 5, "pi1 " + go(n.a, 5));
      case Tag::Proj2:
        return wrap(level > 5, "pi2 " + go(n.a, 5));
      case Tag::Return:
        return wrap(level > 5, "eta" + sup(n.grade) + " " + go(n.a, 5));
      case Tag::Seal:
        return wrap(level > 5, "seal" + sup(n.grade) + " " + go(n.a, 5));
      case Tag::Unseal:
        return wrap(level > 5, "unseal" + sup(n.grade) + " " + go(n.a, 5));
      case Tag::Inj1:
      case Tag::Inj2: {
        std::string body = std::string(n.tag == Tag::Inj1 ? "inj1 " : "inj2 ") + go(n.a, 5);
        if (n.ann) return "(" + body + " : " + go(n.ann, 0) + ")";
        return wrap(level > 5, std::move(body));
      }
      case Tag::Bind: {
        std::string x = fresh(binder_hint(n, 0, "x"));
        std::string rhs = go(n.a, 0);
        scope_.push_back(x);
        std::string body = go(n.b, 0);
        scope_.pop_back();
        return wrap(level > 0, "bind" + sup(n.grade) + " " + x + " = " + rhs + " in " + body);
      }
      case Tag::LetPair: {
        std::string scrut = go(n.a, 0);
        std::string motive;
        if (n.ann) {
          std::string z = fresh(binder_hint(n, 2, "z"));
          scope_.push_back(z);
          motive = " return " + z + ". " + go(n.ann, 0);
          scope_.pop_back();
        }
        std::string x = fresh(binder_hint(n, 0, "x"));
        scope_.push_back(x);
        std::string y = fresh(binder_hint(n, 1, "y"));
        scope_.push_back(y);
        std::string body = go(n.b, 0);
        scope_.pop_back();
        scope_.pop_back();
        return wrap(level > 0, "let (" + x + sup(n.grade) + ", " + y + ") = " + scrut +
                                   motive + " in " + body);
      }
      case Tag::Case:
        return wrap(level > 0,
                    "case " + go(n.a, 1) + " of " + go(n.b, 1) + " ; " + go(n.c, 0));
    }
    return "?";
  }

  const Lattice& lat_;
  std::vector<std::string> scope_;
};

}  // namespace print_detail

// parse(print(t)) is structurally equal to t for well-scoped terms.
inline std::string print(const TermPtr& t, const Lattice& lattice,
                         std::vector<std::string> free_names = {}) {
  print_detail::Printer p(lattice, std::move(free_names));
  return p.run(t, 0);
}

}  // namespace gradia
