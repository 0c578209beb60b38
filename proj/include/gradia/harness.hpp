#pragma once

#include <map>
#include <unordered_map>

#include "gradia/ddc.hpp"
#include "gradia/translate.hpp"

namespace gradia {

// --- deterministic rng --------------------------------------------------------

// splitmix64; every trial derives its own stream from (seed, trial index) so
// results do not depend on scheduling or trial order.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}
  static Rng for_trial(uint64_t seed, uint64_t trial) {
    Rng r(seed ^ (0x9e3779b97f4a7c15ull * (trial + 1)));
    r.next();
    return r;
  }
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int pick(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<uint64_t>(n)); }
  bool chance(int percent) { return pick(100) < percent; }
};

// --- generation config ----------------------------------------------------------

struct GenConfig {
  uint64_t seed = 1;
  int max_size = 24;  // AST nodes
  const Lattice* lattice = nullptr;
  PtsSignature pts = PtsSignature::type_in_type();
  Fragment fragment = Fragment::Sdc;
  int trials = 100;
};

// --- exhaustive enumeration -----------------------------------------------------

// All alpha-canonical terms of a fragment up to a size bound; size counts AST
// nodes including annotation slots. Injection ascriptions are fixed to
// Unit + Unit so the space stays finite. Memoized per (size, binder depth).
class Enumerator {
 public:
  Enumerator(const Lattice& lat, Fragment frag) : lat_(lat), frag_(frag) {
    for (auto g : lat_.all()) grades_.push_back(g);
  }

  // Simple types (SDC / sealing) by exact size.
  const std::vector<TermPtr>& types(int size) {
    while (static_cast<int>(types_.size()) <= size) {
      int n = static_cast<int>(types_.size());
      std::vector<TermPtr> out;
      if (n == 1) out.push_back(unit_ty());
      if (n >= 2)
        for (auto g : grades_)
          for (auto& a : types(n - 1)) out.push_back(tmonad(g, a));
      if (n >= 3)
        for (int i = 1; i <= n - 2; i++)
          for (auto& a : types(i))
            for (auto& b : types(n - 1 - i)) {
              out.push_back(arrow(a, b));
              out.push_back(prod(a, b));
              out.push_back(sum(a, b));
            }
      types_.push_back(std::move(out));
    }
    return types_[size];
  }

  // Terms of exact size under `depth` binders.
  const std::vector<TermPtr>& terms(int size, int depth) {
    auto key = std::make_pair(size, depth);
    auto it = terms_.find(key);
    if (it != terms_.end()) return it->second;
    std::vector<TermPtr> out;
    bool dep = frag_ == Fragment::Ddc || frag_ == Fragment::DdcPi;
    int n = size;
    if (n >= 1) {
      if (frag_ != Fragment::DdcPi) out.push_back(unit_tm());
      if (dep) out.push_back(sort("Type"));
      for (int v = 0; v < depth; v++) out.push_back(var(v));
    }
    if (n >= 2 && !dep) {
      for (auto& a : terms(n - 1, depth)) {
        out.push_back(proj1(a));
        out.push_back(proj2(a));
        if (frag_ == Fragment::Sdc)
          for (auto g : grades_) out.push_back(ret(g, a));
        if (frag_ == Fragment::Seal)
          for (auto g : grades_) {
            out.push_back(seal(g, a));
            out.push_back(unseal(g, a));
          }
      }
    }
    if (n >= 5 && !dep) {
      // inj1 a : Unit + Unit   (ascription costs 3 nodes)
      for (auto& a : terms(n - 4, depth)) {
        out.push_back(inj1(a, sum(unit_ty(), unit_ty())));
        out.push_back(inj2(a, sum(unit_ty(), unit_ty())));
      }
    }
    if (n >= 3) {
      for (int i = 1; i <= n - 2; i++) {
        if (!dep) {
          for (auto& a : terms(i, depth))
            for (auto& b : terms(n - 1 - i, depth)) {
              out.push_back(app(a, b));
              out.push_back(pair(a, b));
            }
          for (auto& ty : types(i))
            for (auto& b : terms(n - 1 - i, depth + 1)) out.push_back(lam(ty, b));
          if (frag_ == Fragment::Sdc)
            for (auto g : grades_)
              for (auto& a : terms(i, depth))
                for (auto& b : terms(n - 1 - i, depth + 1)) out.push_back(bind(g, a, b));
        } else {
          for (auto g : grades_) {
            for (auto& a : terms(i, depth))
              for (auto& b : terms(n - 1 - i, depth)) out.push_back(gapp(a, b, g));
            for (auto& ty : terms(i, depth))
              for (auto& b : terms(n - 1 - i, depth + 1)) {
                out.push_back(glam(g, ty, b));
                out.push_back(pi(g, ty, b));
                if (frag_ == Fragment::Ddc) out.push_back(sigma(g, ty, b));
              }
            if (frag_ == Fragment::Ddc)
              for (auto& a : terms(i, depth))
                for (auto& b : terms(n - 1 - i, depth)) out.push_back(gpair(a, g, b));
          }
        }
      }
    }
    if (n >= 4 && frag_ == Fragment::Ddc) {
      for (int i = 1; i <= n - 3; i++)
        for (auto g : grades_)
          for (auto& a : terms(i, depth))
            for (auto& b : terms(n - 1 - i, depth + 2)) out.push_back(let_pair(g, a, b));
    }
    if (n >= 4) {
      for (int i = 1; i <= n - 3; i++)
        for (int j = 1; j <= n - 2 - i; j++)
          for (auto& a : terms(i, depth))
            for (auto& b : terms(j, depth))
              for (auto& c : terms(n - 1 - i - j, depth)) {
                if (frag_ != Fragment::DdcPi) out.push_back(case_of(a, b, c));
              }
    }
    return terms_.emplace(key, std::move(out)).first->second;
  }

  // All terms up to a size bound.
  std::vector<TermPtr> all_terms(int size_bound, int depth) {
    std::vector<TermPtr> out;
    for (int n = 1; n <= size_bound; n++)
      for (auto& t : terms(n, depth)) out.push_back(t);
    return out;
  }

 private:
  const Lattice& lat_;
  Fragment frag_;
  std::vector<Grade> grades_;
  std::vector<std::vector<TermPtr>> types_{{}};  // index 0 unused
  std::map<std::pair<int, int>, std::vector<TermPtr>> terms_;
};

// --- independent typing oracle -------------------------------------------------

// A deliberately naive premise-by-premise reading of the declarative rules,
// written apart from the production checkers; agreement between the two is
// itself the test. Memoized on (term identity, observer, context).
class Oracle {
 public:
  Oracle(const Lattice& lat, Fragment frag, const DdcConfig* ddc = nullptr)
      : lat_(lat), frag_(frag), ddc_(ddc) {}

  std::optional<TermPtr> check(const Context& omega, const TermPtr& a, Grade l) {
    std::string key = ctx_key(omega) + "|" + std::to_string(a->hash) + "@" +
                      std::to_string(reinterpret_cast<uintptr_t>(a.get())) + "^" +
                      std::to_string(l.id);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto out = frag_ == Fragment::Ddc ? derive_ddc(omega, a, l) : derive_simple(omega, a, l);
    memo_.emplace(std::move(key), out);
    return out;
  }

 private:
  std::string ctx_key(const Context& omega) {
    std::string k;
    for (auto& b : omega.bindings)
      k += std::to_string(b.grade.id) + ":" + std::to_string(b.type->hash) + ",";
    return k;
  }

  // SDC / sealing rules, read off the figures one premise at a time.
  std::optional<TermPtr> derive_simple(const Context& omega, const TermPtr& a, Grade l) {
    bool sealing = frag_ == Fragment::Seal;
    switch (a->tag) {
      case Tag::Var: {
        // SDC-Var: x :^k A in Omega and k <= l
        if (a->var < 0 || a->var >= omega.size()) return std::nullopt;
        const auto& binding = omega.lookup(a->var);
        if (!sealing && !lat_.leq(binding.grade, l)) return std::nullopt;
        return shift(binding.type, a->var + 1);
      }
      case Tag::UnitTm:
        return unit_ty();
      case Tag::Lam: {
        // SDC-Abs: Omega, x:^l A |- b :^l B   (sealing: grade unused)
        auto body = check(omega.extended("x", l, a->a), a->b, l);
        if (!body) return std::nullopt;
        return arrow(a->a, *body);
      }
      case Tag::App: {
        auto fun = check(omega, a->a, l);
        auto arg = check(omega, a->b, l);
        if (!fun || !arg) return std::nullopt;
        if ((*fun)->tag != Tag::SimpleArrow) return std::nullopt;
        if (!term_eq((*fun)->a, *arg)) return std::nullopt;
        return (*fun)->b;
      }
      case Tag::Pair: {
        auto x = check(omega, a->a, l);
        auto y = check(omega, a->b, l);
        if (!x || !y) return std::nullopt;
        return prod(*x, *y);
      }
      case Tag::Proj1:
      case Tag::Proj2: {
        auto p = check(omega, a->a, l);
        if (!p || (*p)->tag != Tag::SimpleProd) return std::nullopt;
        return a->tag == Tag::Proj1 ? (*p)->a : (*p)->b;
      }
      case Tag::Inj1:
      case Tag::Inj2: {
        if (!a->ann || a->ann->tag != Tag::Sum) return std::nullopt;
        auto body = check(omega, a->a, l);
        if (!body) return std::nullopt;
        if (!term_eq(*body, a->tag == Tag::Inj1 ? a->ann->a : a->ann->b))
          return std::nullopt;
        return a->ann;
      }
      case Tag::Case: {
        auto s = check(omega, a->a, l);
        auto b1 = check(omega, a->b, l);
        auto b2 = check(omega, a->c, l);
        if (!s || !b1 || !b2) return std::nullopt;
        if ((*s)->tag != Tag::Sum) return std::nullopt;
        if ((*b1)->tag != Tag::SimpleArrow || (*b2)->tag != Tag::SimpleArrow)
          return std::nullopt;
        if (!term_eq((*b1)->a, (*s)->a) || !term_eq((*b2)->a, (*s)->b)) return std::nullopt;
        if (!term_eq((*b1)->b, (*b2)->b)) return std::nullopt;
        return (*b1)->b;
      }
      case Tag::Return: {
        if (sealing) return std::nullopt;
        // SDC-Return: Omega |- a :^(l \/ l0) A
        auto body = check(omega, a->a, lat_.join(l, a->grade));
        if (!body) return std::nullopt;
        return tmonad(a->grade, *body);
      }
      case Tag::Bind: {
        if (sealing) return std::nullopt;
        auto rhs = check(omega, a->a, l);
        if (!rhs || (*rhs)->tag != Tag::TMonad || (*rhs)->grade != a->grade)
          return std::nullopt;
        auto body = check(omega.extended("x", lat_.join(l, a->grade), (*rhs)->a), a->b, l);
        return body;
      }
      case Tag::Seal: {
        if (!sealing) return std::nullopt;
        auto body = check(omega, a->a, lat_.join(l, a->grade));
        if (!body) return std::nullopt;
        return tmonad(a->grade, *body);
      }
      case Tag::Unseal: {
        if (!sealing) return std::nullopt;
        auto body = check(omega, a->a, l);
        if (!body || (*body)->tag != Tag::TMonad || (*body)->grade != a->grade)
          return std::nullopt;
        if (!lat_.leq(a->grade, l)) return std::nullopt;
        return (*body)->a;
      }
      default:
        return std::nullopt;
    }
  }

  // Head exposure by iterated parallel reduction at C; independent of the
  // checker's CBN weak-head path.
  std::optional<TermPtr> head_form(const TermPtr& t) {
    TermPtr cur = t;
    for (int i = 0; i < 64; i++) {
      switch (cur->tag) {
        case Tag::Sort:
        case Tag::UnitTy:
        case Tag::Pi:
        case Tag::Sigma:
        case Tag::Sum:
          return cur;
        default:
          break;
      }
      TermPtr next = par_step(lat_, {}, cur, ddc_->c());
      if (term_eq(next, cur)) return cur;
      cur = next;
    }
    return std::nullopt;
  }

  bool conv(const Context& omega, const TermPtr& x, const TermPtr& y) {
    return def_eq(lat_, GradeContext::of(omega), x, y, ddc_->c(), 10 * ddc_->fuel)
        .equal();
  }

  std::optional<TermPtr> derive_truncated(const Context& omega, const TermPtr& a,
                                          Grade demanded) {
    if (demanded == lat_.top() && !(lat_.top() == ddc_->c()))
      return check(truncate_context(lat_, omega, ddc_->c()), a, ddc_->c());
    return check(omega, a, demanded);
  }

  std::optional<std::string> sort_of(const Context& omega, const TermPtr& ty) {
    auto k = derive_truncated(omega, ty, lat_.top());
    if (!k) return std::nullopt;
    auto head = head_form(*k);
    if (!head || (*head)->tag != Tag::Sort) return std::nullopt;
    return (*head)->sort;
  }

  std::optional<TermPtr> derive_ddc(const Context& omega, const TermPtr& a, Grade l) {
    if (!lat_.leq(l, ddc_->c())) return std::nullopt;
    switch (a->tag) {
      case Tag::Var: {
        if (a->var < 0 || a->var >= omega.size()) return std::nullopt;
        const auto& binding = omega.lookup(a->var);
        if (!lat_.leq(binding.grade, l)) return std::nullopt;
        return shift(binding.type, a->var + 1);
      }
      case Tag::Sort: {
        auto s2 = ddc_->pts.axiom(a->sort);
        if (!s2) return std::nullopt;
        return sort(*s2);
      }
      case Tag::UnitTy:
        return sort(ddc_->pts.sorts.front());
      case Tag::UnitTm:
        return unit_ty();
      case Tag::Pi:
      case Tag::Sigma: {
        auto s1ty = check(omega, a->a, l);
        if (!s1ty) return std::nullopt;
        auto s1 = head_form(*s1ty);
        if (!s1 || (*s1)->tag != Tag::Sort) return std::nullopt;
        auto s2ty = check(omega.extended("x", l, a->a), a->b, l);
        if (!s2ty) return std::nullopt;
        auto s2 = head_form(*s2ty);
        if (!s2 || (*s2)->tag != Tag::Sort) return std::nullopt;
        auto s3 = ddc_->pts.rule((*s1)->sort, (*s2)->sort);
        if (!s3) return std::nullopt;
        return sort(*s3);
      }
      case Tag::GLam: {
        auto body = check(omega.extended("x", lat_.join(a->grade, l), a->a), a->b, l);
        if (!body) return std::nullopt;
        TermPtr pity = pi(a->grade, a->a, *body);
        if (!sort_of(omega, pity)) return std::nullopt;
        return pity;
      }
      case Tag::GApp: {
        auto fun = check(omega, a->a, l);
        if (!fun) return std::nullopt;
        auto head = head_form(*fun);
        if (!head || (*head)->tag != Tag::Pi || (*head)->grade != a->grade)
          return std::nullopt;
        auto arg = derive_truncated(omega, a->b, lat_.join(a->grade, l));
        if (!arg) return std::nullopt;
        if (!conv(omega, *arg, (*head)->a)) return std::nullopt;
        return subst((*head)->b, a->b);
      }
      case Tag::GPair: {
        Grade demanded = lat_.join(a->grade, l);
        if (a->ann) {
          if (!sort_of(omega, a->ann)) return std::nullopt;
          auto sig = head_form(a->ann);
          if (!sig || (*sig)->tag != Tag::Sigma || (*sig)->grade != a->grade)
            return std::nullopt;
          auto fst = derive_truncated(omega, a->a, demanded);
          if (!fst || !conv(omega, *fst, (*sig)->a)) return std::nullopt;
          auto snd = check(omega, a->b, l);
          if (!snd || !conv(omega, *snd, subst((*sig)->b, a->a))) return std::nullopt;
          return a->ann;
        }
        auto fst = derive_truncated(omega, a->a, demanded);
        auto snd = check(omega, a->b, l);
        if (!fst || !snd) return std::nullopt;
        TermPtr sig = sigma(a->grade, *fst, shift(*snd, 1));
        if (!sort_of(omega, sig)) return std::nullopt;
        return sig;
      }
      case Tag::LetPair: {
        auto ts = check(omega, a->a, l);
        if (!ts) return std::nullopt;
        auto sig = head_form(*ts);
        if (!sig || (*sig)->tag != Tag::Sigma || (*sig)->grade != a->grade)
          return std::nullopt;
        Context inner = omega.extended("x", lat_.join(a->grade, l), (*sig)->a)
                            .extended("y", l, (*sig)->b);
        auto body = check(inner, a->b, l);
        if (!body) return std::nullopt;
        if (a->ann) {
          Context mctx = omega.extended("z", ddc_->c(), *ts);
          auto ms = derive_truncated(mctx, a->ann, lat_.top());
          if (!ms) return std::nullopt;
          auto mh = head_form(*ms);
          if (!mh || (*mh)->tag != Tag::Sort) return std::nullopt;
          TermPtr pattern = gpair(var(1), a->grade, var(0));
          TermPtr expected = subst(shift(a->ann, 2, 1), pattern, 0);
          if (!def_eq(lat_, GradeContext::of(inner), *body, expected, ddc_->c(),
                      10 * ddc_->fuel)
                   .equal())
            return std::nullopt;
          return subst(a->ann, a->a);
        }
        if (has_var(*body, 0) || has_var(*body, 1)) return std::nullopt;
        return shift(*body, -2, 2);
      }
      case Tag::Sum: {
        auto t1 = check(omega, a->a, l);
        auto t2 = check(omega, a->b, l);
        if (!t1 || !t2) return std::nullopt;
        auto h1 = head_form(*t1), h2 = head_form(*t2);
        if (!h1 || !h2 || (*h1)->tag != Tag::Sort || (*h2)->tag != Tag::Sort ||
            (*h1)->sort != (*h2)->sort)
          return std::nullopt;
        return *h1;
      }
      case Tag::Inj1:
      case Tag::Inj2: {
        if (!a->ann) return std::nullopt;
        if (!sort_of(omega, a->ann)) return std::nullopt;
        auto sm = head_form(a->ann);
        if (!sm || (*sm)->tag != Tag::Sum) return std::nullopt;
        auto body = check(omega, a->a, l);
        if (!body) return std::nullopt;
        if (!conv(omega, *body, a->tag == Tag::Inj1 ? (*sm)->a : (*sm)->b))
          return std::nullopt;
        return a->ann;
      }
      case Tag::Case: {
        auto ts = check(omega, a->a, l);
        if (!ts) return std::nullopt;
        auto sm = head_form(*ts);
        if (!sm || (*sm)->tag != Tag::Sum) return std::nullopt;
        TermPtr result;
        for (int i = 0; i < 2; i++) {
          auto tb = check(omega, i == 0 ? a->b : a->c, l);
          if (!tb) return std::nullopt;
          auto pt = head_form(*tb);
          if (!pt || (*pt)->tag != Tag::Pi || (*pt)->grade != lat_.bot())
            return std::nullopt;
          if (!conv(omega, (*pt)->a, i == 0 ? (*sm)->a : (*sm)->b)) return std::nullopt;
          if (has_var((*pt)->b, 0)) return std::nullopt;
          TermPtr out = shift((*pt)->b, -1, 1);
          if (!result)
            result = out;
          else if (!conv(omega, out, result))
            return std::nullopt;
        }
        return result;
      }
      default:
        return std::nullopt;
    }
  }

  const Lattice& lat_;
  Fragment frag_;
  const DdcConfig* ddc_;
  std::unordered_map<std::string, std::optional<TermPtr>> memo_;
};

inline std::optional<TermPtr> oracle_check(const Lattice& lat, Fragment frag,
                                           const Context& omega, const TermPtr& a, Grade l,
                                           const DdcConfig* ddc = nullptr) {
  Oracle o(lat, frag, ddc);
  return o.check(omega, a, l);
}

// --- shrinking -------------------------------------------------------------------

// Local minimization: repeatedly try single-node deletions (replacing a node
// by an adjusted child or by unit) while the failure predicate stays true.
template <typename Pred>
TermPtr shrink_term(TermPtr t, Pred still_fails) {
  auto candidates = [](const TermPtr& n) {
    std::vector<TermPtr> out;
    auto childless = [&](const TermPtr& ch, int binders) {
      if (!ch) return;
      TermPtr lifted = ch;
      for (int i = 0; i < binders; i++) lifted = subst(lifted, unit_tm());
      out.push_back(lifted);
    };
    childless(n->a, child_binders(*n, 0));
    childless(n->b, child_binders(*n, 1));
    childless(n->c, child_binders(*n, 2));
    if (n->tag != Tag::UnitTm) out.push_back(unit_tm());
    return out;
  };
  // rebuild with the subtree at `path` replaced
  std::function<std::vector<TermPtr>(const TermPtr&)> all_replacements =
      [&](const TermPtr& n) {
        std::vector<TermPtr> out = candidates(n);
        auto recurse = [&](int which) {
          const TermPtr& ch = which == 0 ? n->a : which == 1 ? n->b : which == 2 ? n->c
                                                                                 : n->ann;
          if (!ch) return;
          for (auto& r : all_replacements(ch)) {
            Term copy = *n;
            (which == 0 ? copy.a : which == 1 ? copy.b : which == 2 ? copy.c : copy.ann) = r;
            out.push_back(make_term(std::move(copy)));
          }
        };
        for (int w = 0; w < 4; w++) recurse(w);
        return out;
      };
  bool progress = true;
  int rounds = 0;
  while (progress && rounds++ < 64) {
    progress = false;
    for (auto& cand : all_replacements(t)) {
      if (cand->size < t->size && still_fails(cand)) {
        t = cand;
        progress = true;
        break;
      }
    }
  }
  return t;
}

}  // namespace gradia
