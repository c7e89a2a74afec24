#pragma once

// The junction invariant rho(w) with membership in the cycle submonoid T_n,
// and the boundary-composition terms lambda with membership in U.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "polyw/error.hpp"
#include "polyw/words.hpp"

namespace polyw {

// ---------------------------------------------------------------------------
// rho

// An ordered pair (i, j) of signed generators with |i| != |j|, identified
// with (-j, -i). Stored as the lexicographically least of the two.
struct RhoPair {
  int i = 0;
  int j = 0;

  static RhoPair make(int i, int j) {
    if (i == 0 || j == 0 || std::abs(i) == std::abs(j)) {
      throw precondition_error("rho pair needs nonzero entries with distinct absolute values");
    }
    const std::pair<int, int> a{i, j}, b{-j, -i};
    const auto m = std::min(a, b);
    return {m.first, m.second};
  }
  RhoPair flipped() const { return {-j, -i}; }

  friend auto operator<=>(const RhoPair&, const RhoPair&) = default;
};

struct RhoElement {
  int rank = 1;
  std::vector<RhoPair> pairs;  // sorted, canonical

  static RhoElement make(int rank, const std::vector<std::pair<int, int>>& raw) {
    RhoElement r{rank, {}};
    for (auto [i, j] : raw) {
      if (std::abs(i) > rank || std::abs(j) > rank) throw rank_error("rho pair entry exceeds rank");
      r.pairs.push_back(RhoPair::make(i, j));
    }
    std::sort(r.pairs.begin(), r.pairs.end());
    return r;
  }

  std::size_t size() const { return pairs.size(); }
  friend bool operator==(const RhoElement&, const RhoElement&) = default;
};

// One pair per cyclically consecutive syllable junction; empty for one syllable.
inline RhoElement rho(const CyclicWord& w) {
  const Syllables s = syllable_decomposition(w);
  std::vector<std::pair<int, int>> raw;
  if (s.size() > 1) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const Syllable& x = s[i];
      const Syllable& y = s[i + 1];
      raw.emplace_back(x.exponent > 0 ? x.generator : -x.generator, y.exponent > 0 ? y.generator : -y.generator);
    }
  }
  return RhoElement::make(w.rank(), raw);
}

// Junction pairs in syllable order, before sorting: junction t sits between
// syllables t and t+1.
inline std::vector<RhoPair> rho_junctions(const CyclicWord& w) {
  const Syllables s = syllable_decomposition(w);
  std::vector<RhoPair> out;
  if (s.size() < 2) return out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Syllable& x = s[i];
    const Syllable& y = s[i + 1];
    out.push_back(RhoPair::make(x.exponent > 0 ? x.generator : -x.generator,
                                y.exponent > 0 ? y.generator : -y.generator));
  }
  return out;
}

// ---------------------------------------------------------------------------
// T_n membership

struct TnCycle {
  // c_1..c_r; pairwise distinct absolute values.
  std::vector<int> vertices;
  // elements[k] is the index in RhoElement::pairs used as (c_k, c_{k+1}).
  std::vector<std::size_t> elements;
  // flipped[k]: the stored pair is (-c_{k+1}, -c_k).
  std::vector<bool> flipped;
};

struct TnCertificate {
  std::vector<TnCycle> cycles;
};

inline bool verify_tn(const RhoElement& r, const TnCertificate& cert) {
  std::vector<bool> used(r.size(), false);
  for (const TnCycle& cy : cert.cycles) {
    const std::size_t n = cy.vertices.size();
    if (n < 2 || cy.elements.size() != n || cy.flipped.size() != n) return false;
    std::set<int> abs_seen;
    for (int v : cy.vertices) {
      if (v == 0 || std::abs(v) > r.rank || !abs_seen.insert(std::abs(v)).second) return false;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t e = cy.elements[k];
      if (e >= r.size() || used[e]) return false;
      used[e] = true;
      const RhoPair as_used{cy.vertices[k], cy.vertices[(k + 1) % n]};
      const RhoPair stored = cy.flipped[k] ? as_used.flipped() : as_used;
      if (!(stored == r.pairs[e])) return false;
    }
  }
  return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

namespace detail {

class TnSearch {
 public:
  explicit TnSearch(const RhoElement& r) : r_(r) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (types_.empty() || !(types_.back() == r.pairs[k])) {
        types_.push_back(r.pairs[k]);
        positions_.emplace_back();
      }
      positions_.back().push_back(k);
    }
    counts_.resize(types_.size());
    for (std::size_t t = 0; t < types_.size(); ++t) counts_[t] = static_cast<int>(positions_[t].size());
  }

  std::optional<TnCertificate> run() {
    std::vector<std::vector<std::pair<std::size_t, bool>>> chosen;
    if (!solve(chosen)) return std::nullopt;
    // Assign concrete element indices in order of use.
    std::vector<std::size_t> next(types_.size(), 0);
    TnCertificate cert;
    for (const auto& cy : chosen) {
      TnCycle out;
      for (auto [t, flip] : cy) {
        const RhoPair used = flip ? types_[t].flipped() : types_[t];
        out.vertices.push_back(used.i);
        out.elements.push_back(positions_[t][next[t]++]);
        out.flipped.push_back(flip);
      }
      cert.cycles.push_back(std::move(out));
    }
    return cert;
  }

 private:
  bool solve(std::vector<std::vector<std::pair<std::size_t, bool>>>& chosen) {
    auto first = std::find_if(counts_.begin(), counts_.end(), [](int c) { return c > 0; });
    if (first == counts_.end()) return true;
    if (failed_.count(counts_)) return false;
    const std::size_t t0 = static_cast<std::size_t>(first - counts_.begin());
    std::vector<std::pair<std::size_t, bool>> path{{t0, false}};
    --counts_[t0];
    const int start = types_[t0].i;
    std::set<int> used_abs{std::abs(types_[t0].i), std::abs(types_[t0].j)};
    const bool ok = extend(types_[t0].j, start, used_abs, path, chosen);
    ++counts_[t0];
    if (!ok) failed_.insert(counts_);
    return ok;
  }

  bool extend(int current, int start, std::set<int>& used_abs, std::vector<std::pair<std::size_t, bool>>& path,
              std::vector<std::vector<std::pair<std::size_t, bool>>>& chosen) {
    for (std::size_t t = 0; t < types_.size(); ++t) {
      if (counts_[t] == 0) continue;
      for (bool flip : {false, true}) {
        const RhoPair e = flip ? types_[t].flipped() : types_[t];
        if (e.i != current) continue;
        if (flip && types_[t].flipped() == types_[t]) continue;
        if (e.j == start) {
          --counts_[t];
          path.emplace_back(t, flip);
          chosen.push_back(path);
          if (solve(chosen)) return true;
          chosen.pop_back();
          path.pop_back();
          ++counts_[t];
        } else if (!used_abs.count(std::abs(e.j))) {
          --counts_[t];
          path.emplace_back(t, flip);
          used_abs.insert(std::abs(e.j));
          const bool ok = extend(e.j, start, used_abs, path, chosen);
          used_abs.erase(std::abs(e.j));
          path.pop_back();
          ++counts_[t];
          if (ok) return true;
        }
      }
    }
    return false;
  }

  const RhoElement& r_;
  std::vector<RhoPair> types_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<int> counts_;
  std::set<std::vector<int>> failed_;
};

}  // namespace detail

// Decomposes r into generator cycles, or returns nullopt when r is not in T_n.
// A nullopt answer is exhaustive.
inline std::optional<TnCertificate> tn_membership(const RhoElement& r, std::size_t cap = 256) {
  if (r.size() > cap) throw resource_error("rho element has " + std::to_string(r.size()) + " pairs, cap is " +
                                           std::to_string(cap));
  return detail::TnSearch(r).run();
}

// ---------------------------------------------------------------------------
// lambda terms and U membership

struct LambdaTerm {
  int sign = 1;
  std::vector<int> composition;  // least rotation, entries >= 1

  static LambdaTerm make(int sign, std::vector<int> comp) {
    if (comp.empty() || std::any_of(comp.begin(), comp.end(), [](int c) { return c < 1; })) {
      throw precondition_error("lambda composition must be nonempty with positive entries");
    }
    const std::size_t start = least_rotation(std::span<const int>(comp));
    return {sign < 0 ? -1 : 1, rotated(std::span<const int>(comp), start)};
  }

  int sum() const { return std::accumulate(composition.begin(), composition.end(), 0); }
  std::string str() const {
    std::string s = sign > 0 ? "+(" : "-(";
    for (std::size_t i = 0; i < composition.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(composition[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const LambdaTerm&, const LambdaTerm&) = default;
};

// Sorted multiset of terms.
using LambdaMultiset = std::vector<LambdaTerm>;

inline LambdaMultiset make_lambda(std::vector<LambdaTerm> terms) {
  std::sort(terms.begin(), terms.end());
  return terms;
}

// n copies of term.
inline LambdaMultiset repeat(const LambdaTerm& term, std::size_t n) { return LambdaMultiset(n, term); }

inline LambdaMultiset operator+(LambdaMultiset a, const LambdaMultiset& b) {
  a.insert(a.end(), b.begin(), b.end());
  return make_lambda(std::move(a));
}

inline std::vector<int> partial_sums(const std::vector<int>& c) {
  std::vector<int> out;
  int s = 0;
  for (int x : c) out.push_back(s += x);
  return out;
}

// True iff {off + C_1, off + C_1 + C_2, ...} and {D_1, D_1 + D_2, ...} are
// disjoint modulo m = sum(C) = sum(D).
inline bool offset_separates(const std::vector<int>& c, const std::vector<int>& d, int off) {
  const int m = std::accumulate(c.begin(), c.end(), 0);
  if (m != std::accumulate(d.begin(), d.end(), 0) || m <= 0) return false;
  std::vector<bool> hit(static_cast<std::size_t>(m), false);
  for (int s : partial_sums(d)) hit[static_cast<std::size_t>(s % m)] = true;
  for (int s : partial_sums(c)) {
    if (hit[static_cast<std::size_t>((((off + s) % m) + m) % m)]) return false;
  }
  return true;
}

inline std::optional<int> find_offset(const std::vector<int>& c, const std::vector<int>& d) {
  const int m = std::accumulate(c.begin(), c.end(), 0);
  for (int off = 0; off < m; ++off) {
    if (offset_separates(c, d, off)) return off;
  }
  return std::nullopt;
}

struct UPair {
  std::size_t first = 0;   // index of the C term in the multiset
  std::size_t second = 0;  // index of the D term
  bool same_sign = false;
  int offset = 0;          // meaningful for same-sign pairs
};

struct UCertificate {
  std::vector<UPair> pairs;
};

inline bool verify_u(const LambdaMultiset& terms, const UCertificate& cert) {
  std::vector<bool> used(terms.size(), false);
  for (const UPair& p : cert.pairs) {
    if (p.first >= terms.size() || p.second >= terms.size() || p.first == p.second) return false;
    if (used[p.first] || used[p.second]) return false;
    used[p.first] = used[p.second] = true;
    const LambdaTerm& c = terms[p.first];
    const LambdaTerm& d = terms[p.second];
    if (c.sum() != d.sum()) return false;
    if ((c.sign == d.sign) != p.same_sign) return false;
    if (p.same_sign && !offset_separates(c.composition, d.composition, p.offset)) return false;
  }
  return std::all_of(used.begin(), used.end(), [](bool b) { return b; });
}

namespace detail {

class USearch {
 public:
  explicit USearch(const LambdaMultiset& terms) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      if (types_.empty() || !(types_.back() == terms[k])) {
        types_.push_back(terms[k]);
        positions_.emplace_back();
      }
      positions_.back().push_back(k);
    }
    counts_.resize(types_.size());
    for (std::size_t t = 0; t < types_.size(); ++t) counts_[t] = static_cast<int>(positions_[t].size());
    const std::size_t n = types_.size();
    offsets_.assign(n, std::vector<std::optional<int>>(n));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a; b < n; ++b) {
        if (types_[a].sum() != types_[b].sum()) continue;
        if (types_[a].sign != types_[b].sign) {
          offsets_[a][b] = 0;
        } else if (auto off = find_offset(types_[a].composition, types_[b].composition)) {
          offsets_[a][b] = *off;
        }
      }
    }
  }

  std::optional<UCertificate> run() {
    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    if (!solve(chosen)) return std::nullopt;
    std::vector<std::size_t> next(types_.size(), 0);
    UCertificate cert;
    for (auto [a, b] : chosen) {
      UPair p;
      p.first = positions_[a][next[a]++];
      p.second = positions_[b][next[b]++];
      p.same_sign = types_[a].sign == types_[b].sign;
      p.offset = p.same_sign ? *offsets_[a][b] : 0;
      cert.pairs.push_back(p);
    }
    return cert;
  }

 private:
  bool solve(std::vector<std::pair<std::size_t, std::size_t>>& chosen) {
    auto first = std::find_if(counts_.begin(), counts_.end(), [](int c) { return c > 0; });
    if (first == counts_.end()) return true;
    if (failed_.count(counts_)) return false;
    const std::size_t a = static_cast<std::size_t>(first - counts_.begin());
    --counts_[a];
    for (std::size_t b = a; b < types_.size(); ++b) {
      if (counts_[b] == 0 || !offsets_[a][b]) continue;
      --counts_[b];
      chosen.emplace_back(a, b);
      if (solve(chosen)) return true;
      chosen.pop_back();
      ++counts_[b];
    }
    ++counts_[a];
    failed_.insert(counts_);
    return false;
  }

  std::vector<LambdaTerm> types_;
  std::vector<std::vector<std::size_t>> positions_;
  std::vector<int> counts_;
  std::vector<std::vector<std::optional<int>>> offsets_;
  std::set<std::vector<int>> failed_;
};

}  // namespace detail

// Perfect matching of the terms into generators of U, or nullopt (exhaustive).
inline std::optional<UCertificate> u_membership(const LambdaMultiset& terms, std::size_t cap = 100000) {
  if (terms.size() > cap) {
    throw resource_error("lambda multiset has " + std::to_string(terms.size()) + " terms, cap is " +
                         std::to_string(cap));
  }
  if (terms.size() % 2 != 0) return std::nullopt;
  if (!std::is_sorted(terms.begin(), terms.end())) throw precondition_error("lambda multiset must be sorted");
  return detail::USearch(terms).run();
}

struct ShortcutWitness {
  int condition = 1;             // 1: every entry > 1; 2: a dominant entry
  std::vector<int> composition;  // rotated so the dominant entry is first (condition 2)
  int offset = 1;
};

// Witness that 2 * term lies in U via the two sufficient conditions on a
// single composition, or nullopt when neither applies.
inline std::optional<ShortcutWitness> submonoid_shortcut(const LambdaTerm& term) {
  const std::vector<int>& c = term.composition;
  const int m = term.sum();
  if (std::all_of(c.begin(), c.end(), [](int x) { return x > 1; })) return ShortcutWitness{1, c, 1};
  for (std::size_t i0 = 0; i0 < c.size(); ++i0) {
    if (2 * c[i0] >= 2 + m) {
      std::vector<int> rot = rotated(std::span<const int>(c), i0);
      return ShortcutWitness{2, rot, m + 1 - rot[0]};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Hypothesis predicates

inline bool has_no_isolated_generators(const CyclicWord& w) {
  const Syllables s = syllable_decomposition(w);
  return std::all_of(s.items.begin(), s.items.end(), [](const Syllable& y) { return std::abs(y.exponent) > 1; });
}

// Alternating a/b syllables of a rank-2 word as (p_i, q_i) with w = prod a^{p_i} b^{q_i}.
struct AlternatingForm {
  std::vector<int> p;
  std::vector<int> q;
  std::size_t first_syllable = 0;  // syllable index of the first a-block
};

inline std::optional<AlternatingForm> alternating_form(const CyclicWord& w) {
  if (w.rank() != 2 || w.generator_count() != 2) return std::nullopt;
  const Syllables s = syllable_decomposition(w);
  AlternatingForm f;
  f.first_syllable = s[0].generator == 1 ? 0 : 1;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    f.p.push_back(s[f.first_syllable + i].exponent);
    f.q.push_back(s[f.first_syllable + i + 1].exponent);
  }
  return f;
}

inline int sgn(int x) { return (x > 0) - (x < 0); }

// For w = prod a^{p_i} b^{q_i} with l > 1, |p_i| > 1, |q_i| = 1: whether the
// sign sum vanishes. nullopt when w is not of that shape.
inline std::optional<bool> isolated_b_condition(const CyclicWord& w) {
  const auto f = alternating_form(w);
  if (!f || f->p.size() < 2) return std::nullopt;
  const std::size_t l = f->p.size();
  for (std::size_t i = 0; i < l; ++i) {
    if (std::abs(f->p[i]) < 2 || std::abs(f->q[i]) != 1) return std::nullopt;
  }
  int sum = 0;
  for (std::size_t i = 0; i < l; ++i) sum += sgn(f->p[i] * f->q[i]) + sgn(f->p[(i + 1) % l] * f->q[i]);
  return sum == 0;
}

inline int isolated_b_sign_sum(const CyclicWord& w) {
  const auto f = alternating_form(w);
  if (!f) throw not_applicable("word is not a rank-2 alternating word");
  const std::size_t l = f->p.size();
  int sum = 0;
  for (std::size_t i = 0; i < l; ++i) sum += sgn(f->p[i] * f->q[i]) + sgn(f->p[(i + 1) % l] * f->q[i]);
  return sum;
}

// Parameters of w = prod_{i=1}^l a^{p_i} b^-1 a^{q_i} b.
struct HeightOne {
  std::vector<int> ps;  // signed p_i
  std::vector<int> qs;  // signed q_i
  int p = 0;            // sum |p_i|
  int q = 0;            // sum |q_i|
  int p_prime = 0;      // #{i : |p_i| = 1}
  int q_prime = 0;
  int l = 0;
  // Syllable index of the a-block p_1.
  std::size_t first_syllable = 0;
};

// Height-one parameters when w is a simple height-one word in a with
// conjugator b; nullopt otherwise.
inline std::optional<HeightOne> is_simple_height_one(const CyclicWord& w) {
  const auto f = alternating_form(w);
  if (!f || f->q.size() % 2 != 0) return std::nullopt;
  const Syllables s = syllable_decomposition(w);
  const std::size_t L = s.size();
  for (std::size_t i = 0; i < f->q.size(); ++i) {
    if (std::abs(f->q[i]) != 1 || f->q[i] == f->q[(i + 1) % f->q.size()]) return std::nullopt;
  }
  // p-blocks follow b, q-blocks follow b^-1.
  std::size_t start = f->first_syllable;
  if (s[start + L - 1].exponent != 1) start += 2;
  HeightOne h;
  h.first_syllable = start % L;
  for (std::size_t i = 0; i < L; i += 4) {
    h.ps.push_back(s[start + i].exponent);
    h.qs.push_back(s[start + i + 2].exponent);
  }
  const auto same_sign = [](const std::vector<int>& v) {
    return std::all_of(v.begin(), v.end(), [&](int x) { return sgn(x) == sgn(v[0]); });
  };
  if (!same_sign(h.ps) || !same_sign(h.qs)) return std::nullopt;
  h.l = static_cast<int>(h.ps.size());
  for (int x : h.ps) {
    h.p += std::abs(x);
    h.p_prime += std::abs(x) == 1 ? 1 : 0;
  }
  for (int x : h.qs) {
    h.q += std::abs(x);
    h.q_prime += std::abs(x) == 1 ? 1 : 0;
  }
  return h;
}

inline bool height_one_inequalities(const HeightOne& h) {
  return static_cast<long long>(h.p) * h.p_prime <= static_cast<long long>(h.q) * h.q &&
         static_cast<long long>(h.q) * h.q_prime <= static_cast<long long>(h.p) * h.p;
}

// pp' <= q^2 and qq' <= p^2 for a simple height-one word; nullopt otherwise.
inline std::optional<bool> height_one_condition(const CyclicWord& w) {
  const auto h = is_simple_height_one(w);
  if (!h) return std::nullopt;
  return height_one_inequalities(*h);
}

}  // namespace polyw
