#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gradia {

// An element of a finite lattice. Grades carry no structure of their own;
// all order/join/meet queries go through the owning Lattice.
struct Grade {
  uint8_t id = 0;

  friend bool operator==(Grade a, Grade b) { return a.id == b.id; }
  friend bool operator!=(Grade a, Grade b) { return a.id != b.id; }
};

struct LatticeError : std::runtime_error {
  enum class Kind { MissingBound, NotAntisymmetric, UnknownElement, BadConfig };
  Kind kind;
  LatticeError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// Finite lattice with table-driven leq/join/meet, a bottom, a top, and the
// designated compile-time grade C. Immutable after construction; one binary
// serves every instance by loading these as data.
class Lattice {
 public:
  static Lattice from_order(std::vector<std::string> names,
                            const std::vector<std::pair<int, int>>& leq_pairs,
                            std::optional<std::string> c_name = std::nullopt) {
    Lattice l;
    l.names_ = std::move(names);
    int n = static_cast<int>(l.names_.size());
    if (n == 0 || n > 64)
      throw LatticeError(LatticeError::Kind::BadConfig, "lattice must have 1..64 elements");
    l.leq_.assign(n * n, false);
    for (int i = 0; i < n; i++) l.leq_[i * n + i] = true;
    for (auto [a, b] : leq_pairs) l.leq_[a * n + b] = true;
    // reflexive-transitive closure
    for (int k = 0; k < n; k++)
      for (int i = 0; i < n; i++)
        if (l.leq_[i * n + k])
          for (int j = 0; j < n; j++)
            if (l.leq_[k * n + j]) l.leq_[i * n + j] = true;
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (i != j && l.leq_[i * n + j] && l.leq_[j * n + i])
          throw LatticeError(LatticeError::Kind::NotAntisymmetric,
                             "elements '" + l.names_[i] + "' and '" + l.names_[j] +
                                 "' are equivalent under the given order");
    // join/meet by exhaustive bound search
    l.join_.assign(n * n, 0);
    l.meet_.assign(n * n, 0);
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++) {
        l.join_[i * n + j] = l.search_bound(i, j, /*upper=*/true);
        l.meet_[i * n + j] = l.search_bound(i, j, /*upper=*/false);
      }
    l.bot_ = l.fold_all(/*upper=*/false);
    l.top_ = l.fold_all(/*upper=*/true);
    if (c_name) {
      int c = l.index_of(*c_name);
      if (c < 0)
        throw LatticeError(LatticeError::Kind::UnknownElement,
                           "designated grade C names unknown element '" + *c_name + "'");
      l.c_ = Grade{static_cast<uint8_t>(c)};
    } else {
      l.c_ = l.top_;  // C defaults to top: the DDC^T instance
    }
    l.validate_laws();
    return l;
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(Grade g) const { return names_[g.id]; }
  Grade bot() const { return bot_; }
  Grade top() const { return top_; }
  Grade c() const { return c_; }

  bool leq(Grade a, Grade b) const { return leq_[a.id * size() + b.id]; }
  Grade join(Grade a, Grade b) const { return Grade{join_[a.id * size() + b.id]}; }
  Grade meet(Grade a, Grade b) const { return Grade{meet_[a.id * size() + b.id]}; }

  // Resolves a grade by name; "bot"/"top" are reserved aliases for the
  // computed extremes even when no element carries that literal name.
  std::optional<Grade> lookup(const std::string& nm) const {
    int i = index_of(nm);
    if (i >= 0) return Grade{static_cast<uint8_t>(i)};
    if (nm == "bot") return bot_;
    if (nm == "top") return top_;
    return std::nullopt;
  }

  std::vector<Grade> all() const {
    std::vector<Grade> out;
    for (int i = 0; i < size(); i++) out.push_back(Grade{static_cast<uint8_t>(i)});
    return out;
  }

 private:
  Lattice() = default;

  int index_of(const std::string& nm) const {
    for (int i = 0; i < size(); i++)
      if (names_[i] == nm) return i;
    return -1;
  }

  uint8_t search_bound(int i, int j, bool upper) const {
    int n = size();
    int best = -1;
    for (int k = 0; k < n; k++) {
      bool is_bound = upper ? (leq_[i * n + k] && leq_[j * n + k])
                            : (leq_[k * n + i] && leq_[k * n + j]);
      if (!is_bound) continue;
      if (best < 0) {
        best = k;
        continue;
      }
      if (upper ? leq_[k * n + best] : leq_[best * n + k]) best = k;
    }
    if (best < 0)
      throw LatticeError(LatticeError::Kind::MissingBound,
                         std::string("no ") + (upper ? "upper" : "lower") + " bound for '" +
                             names_[i] + "' and '" + names_[j] + "'");
    // least/greatest among all bounds, not merely minimal
    for (int k = 0; k < n; k++) {
      bool is_bound = upper ? (leq_[i * n + k] && leq_[j * n + k])
                            : (leq_[k * n + i] && leq_[k * n + j]);
      if (is_bound && !(upper ? leq_[best * n + k] : leq_[k * n + best]))
        throw LatticeError(LatticeError::Kind::MissingBound,
                           std::string("no unique ") + (upper ? "join" : "meet") + " for '" +
                               names_[i] + "' and '" + names_[j] + "'");
    }
    return static_cast<uint8_t>(best);
  }

  Grade fold_all(bool upper) const {
    uint8_t acc = 0;
    for (int i = 1; i < size(); i++)
      acc = upper ? join_[acc * size() + i] : meet_[acc * size() + i];
    return Grade{acc};
  }

  void validate_laws() const {
    int n = size();
    auto g = [](int i) { return Grade{static_cast<uint8_t>(i)}; };
    for (int i = 0; i < n; i++) {
      if (!leq(bot_, g(i)) || !leq(g(i), top_))
        throw LatticeError(LatticeError::Kind::BadConfig, "bot/top are not extreme");
      if (join(g(i), g(i)) != g(i) || meet(g(i), g(i)) != g(i))
        throw LatticeError(LatticeError::Kind::BadConfig, "join/meet not idempotent");
      for (int j = 0; j < n; j++) {
        if (join(g(i), g(j)) != join(g(j), g(i)) || meet(g(i), g(j)) != meet(g(j), g(i)))
          throw LatticeError(LatticeError::Kind::BadConfig, "join/meet not commutative");
        // leq(x,y) <=> join(x,y)=y <=> meet(x,y)=x
        bool le = leq(g(i), g(j));
        if (le != (join(g(i), g(j)) == g(j)) || le != (meet(g(i), g(j)) == g(i)))
          throw LatticeError(LatticeError::Kind::BadConfig, "order does not agree with bounds");
        if (join(g(i), meet(g(i), g(j))) != g(i) || meet(g(i), join(g(i), g(j))) != g(i))
          throw LatticeError(LatticeError::Kind::BadConfig, "absorption fails");
        for (int k = 0; k < n; k++) {
          if (join(join(g(i), g(j)), g(k)) != join(g(i), join(g(j), g(k))) ||
              meet(meet(g(i), g(j)), g(k)) != meet(g(i), meet(g(j), g(k))))
            throw LatticeError(LatticeError::Kind::BadConfig, "join/meet not associative");
        }
      }
    }
  }

  std::vector<std::string> names_;
  std::vector<bool> leq_;       // size*size
  std::vector<uint8_t> join_;   // size*size
  std::vector<uint8_t> meet_;   // size*size
  Grade bot_, top_, c_;
};

namespace lattice_config {

inline std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& t : out) {
    size_t a = t.find_first_not_of(" \t\r");
    size_t b = t.find_last_not_of(" \t\r");
    t = (a == std::string::npos) ? "" : t.substr(a, b - a + 1);
  }
  return out;
}

}  // namespace lattice_config

// Parses the line-oriented lattice config:
//   elements: bot, C, top
//   order: bot <= C, C <= top
//   c: C
// The order lines give generating pairs; load takes their closure and checks
// every lattice law exhaustively before returning.
inline Lattice load_lattice(const std::string& text) {
  using lattice_config::split_list;
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::optional<std::string> cname;

  std::vector<std::string> lines = split_list(text, '\n');
  for (auto& raw : lines) {
    std::string line = raw;
    size_t dash = line.find("--");
    if (dash != std::string::npos) line = line.substr(0, dash);
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t colon = line.find(':');
    if (colon == std::string::npos)
      throw LatticeError(LatticeError::Kind::BadConfig, "expected 'key: value' line: " + line);
    std::string key = split_list(line.substr(0, colon), '\n')[0];
    key = key.substr(key.find_first_not_of(" \t"));
    key = key.substr(0, key.find_last_not_of(" \t") + 1);
    std::string val = line.substr(colon + 1);
    if (key == "elements") {
      for (auto& e : split_list(val, ','))
        if (!e.empty()) names.push_back(e);
    } else if (key == "order") {
      for (auto& p : split_list(val, ',')) {
        if (p.empty()) continue;
        size_t le = p.find("<=");
        if (le == std::string::npos)
          throw LatticeError(LatticeError::Kind::BadConfig, "order entry needs '<=': " + p);
        auto lhs = split_list(p.substr(0, le), ',')[0];
        auto rhs = split_list(p.substr(le + 2), ',')[0];
        auto trim = [](std::string s) {
          size_t x = s.find_first_not_of(" \t");
          size_t y = s.find_last_not_of(" \t");
          return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
        };
        pairs.emplace_back(trim(lhs), trim(rhs));
      }
    } else if (key == "c") {
      auto v = split_list(val, ',')[0];
      if (!v.empty()) cname = v;
    } else {
      throw LatticeError(LatticeError::Kind::BadConfig, "unknown config key '" + key + "'");
    }
  }
  if (names.empty())
    throw LatticeError(LatticeError::Kind::BadConfig, "config declares no elements");
  auto find = [&](const std::string& nm) {
    for (size_t i = 0; i < names.size(); i++)
      if (names[i] == nm) return static_cast<int>(i);
    throw LatticeError(LatticeError::Kind::UnknownElement, "unknown element '" + nm + "'");
  };
  std::vector<std::pair<int, int>> ipairs;
  for (auto& [l, r] : pairs) ipairs.emplace_back(find(l), find(r));
  return Lattice::from_order(std::move(names), ipairs, std::move(cname));
}

}  // namespace gradia
