#pragma once

// Whitehead automorphisms: greedy length reduction, the orbit of a minimal
// word under length-preserving moves, equivalence and the diskbusting test.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "polyw/error.hpp"
#include "polyw/words.hpp"

namespace polyw {

struct WhiteheadMove {
  enum class Kind { first, second };

  Kind kind = Kind::second;
  // First kind: generator g goes to permutation[g-1]; generators in
  // `inverted` are then sent to their inverses.
  std::vector<int> permutation;
  std::vector<int> inverted;
  // Second kind: multiplier letter a and a subset A of letters, bit key(x)
  // set for x in A; a is in A and a^-1 is not.
  Letter multiplier;
  std::uint64_t subset = 0;

  bool contains(Letter x) const { return (subset >> x.key()) & 1U; }

  std::string str() const {
    std::string s;
    if (kind == Kind::first) {
      s = "perm[";
      for (std::size_t i = 0; i < permutation.size(); ++i) s += (i ? "," : "") + std::to_string(permutation[i]);
      s += "] inv{";
      for (std::size_t i = 0; i < inverted.size(); ++i) s += (i ? "," : "") + std::to_string(inverted[i]);
      return s + "}";
    }
    s = std::string("(") + letter_char(multiplier) + ", {";
    bool first = true;
    for (int k = 0; k < 64; ++k) {
      if ((subset >> k) & 1U) {
        if (!first) s += ",";
        first = false;
        s += letter_char(Letter(k / 2 + 1, k % 2 ? -1 : 1));
      }
    }
    return s + "})";
  }

  friend bool operator==(const WhiteheadMove&, const WhiteheadMove&) = default;
};

inline std::vector<Letter> apply_move_raw(std::span<const Letter> letters, const WhiteheadMove& m) {
  std::vector<Letter> out;
  out.reserve(letters.size() * 2);
  if (m.kind == WhiteheadMove::Kind::first) {
    for (Letter x : letters) {
      Letter y(m.permutation[static_cast<std::size_t>(x.generator() - 1)], x.sign());
      if (std::find(m.inverted.begin(), m.inverted.end(), y.generator()) != m.inverted.end()) y = y.inverse();
      out.push_back(y);
    }
    return free_reduce(std::span<const Letter>(out));
  }
  const Letter a = m.multiplier;
  for (Letter x : letters) {
    if (x.generator() == a.generator()) {
      out.push_back(x);
      continue;
    }
    const Letter g(x.generator(), 1);
    const bool pre = m.contains(g.inverse());
    const bool post = m.contains(g);
    if (x.sign() > 0) {
      if (pre) out.push_back(a.inverse());
      out.push_back(g);
      if (post) out.push_back(a);
    } else {
      if (post) out.push_back(a.inverse());
      out.push_back(g.inverse());
      if (pre) out.push_back(a);
    }
  }
  return free_reduce(std::span<const Letter>(out));
}

inline CyclicWord apply_move(const CyclicWord& w, const WhiteheadMove& m) {
  return CyclicWord::from_letters(w.rank(), apply_move_raw(w.letters(), m));
}

// Nontrivial second-kind moves in increasing encoding order. The identity
// (A = {a}) and inner automorphisms (A = all but a^-1) are skipped.
inline std::vector<WhiteheadMove> second_kind_moves(int rank) {
  std::vector<WhiteheadMove> out;
  const int letters = 2 * rank;
  for (int ak = 0; ak < letters; ++ak) {
    const Letter a(ak / 2 + 1, ak % 2 ? -1 : 1);
    const int inv_key = a.inverse().key();
    std::vector<int> free_keys;
    for (int k = 0; k < letters; ++k) {
      if (k != ak && k != inv_key) free_keys.push_back(k);
    }
    const std::uint64_t combos = std::uint64_t{1} << free_keys.size();
    for (std::uint64_t c = 1; c + 1 < combos; ++c) {
      std::uint64_t mask = std::uint64_t{1} << ak;
      for (std::size_t i = 0; i < free_keys.size(); ++i) {
        if ((c >> i) & 1U) mask |= std::uint64_t{1} << free_keys[i];
      }
      WhiteheadMove m;
      m.kind = WhiteheadMove::Kind::second;
      m.multiplier = a;
      m.subset = mask;
      out.push_back(m);
    }
  }
  return out;
}

inline std::vector<WhiteheadMove> first_kind_moves(int rank) {
  std::vector<WhiteheadMove> out;
  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 1);
  do {
    for (std::uint32_t inv = 0; inv < (1U << rank); ++inv) {
      WhiteheadMove m;
      m.kind = WhiteheadMove::Kind::first;
      m.permutation = perm;
      for (int g = 1; g <= rank; ++g) {
        if ((inv >> (g - 1)) & 1U) m.inverted.push_back(g);
      }
      out.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct MinimizationStep {
  WhiteheadMove move;
  CyclicWord result;
};

struct MinimizationTrace {
  CyclicWord start;
  std::vector<MinimizationStep> steps;
  CyclicWord final;
};

// Applies the most length-reducing second-kind move (least encoding on ties)
// until no move reduces the length.
inline MinimizationTrace minimize(const CyclicWord& w) {
  MinimizationTrace trace{w, {}, w};
  if (w.rank() > 8) throw resource_error("Whitehead minimization is limited to rank 8");
  const auto moves = second_kind_moves(w.rank());
  for (;;) {
    std::size_t best_len = trace.final.size();
    const WhiteheadMove* best = nullptr;
    std::vector<Letter> best_letters;
    for (const WhiteheadMove& m : moves) {
      std::vector<Letter> img = apply_move_raw(trace.final.letters(), m);
      // Cyclic length without building a CyclicWord.
      std::size_t lo = 0, hi = img.size();
      while (hi - lo >= 2 && img[lo] == img[hi - 1].inverse()) {
        ++lo;
        --hi;
      }
      if (hi - lo < best_len) {
        best_len = hi - lo;
        best = &m;
        best_letters = std::move(img);
      }
    }
    if (!best) break;
    CyclicWord next = CyclicWord::from_letters(w.rank(), best_letters);
    trace.steps.push_back({*best, next});
    trace.final = next;
  }
  return trace;
}

// Orbit element representative: least of w and its inverse.
inline CyclicWord orbit_key(const CyclicWord& w) { return std::min(w, w.inverse()); }

inline std::set<CyclicWord> minimal_orbit(const CyclicWord& w, std::size_t cap = 1'000'000) {
  std::vector<WhiteheadMove> moves = first_kind_moves(w.rank());
  const auto second = second_kind_moves(w.rank());
  moves.insert(moves.end(), second.begin(), second.end());
  std::set<CyclicWord> seen{orbit_key(w)};
  std::deque<CyclicWord> queue{orbit_key(w)};
  while (!queue.empty()) {
    const CyclicWord u = queue.front();
    queue.pop_front();
    for (const WhiteheadMove& m : moves) {
      std::vector<Letter> img = apply_move_raw(u.letters(), m);
      if (img.size() < u.size()) throw precondition_error("minimal_orbit needs a minimal word");
      const CyclicWord v = CyclicWord::from_letters(u.rank(), img);
      if (v.size() != u.size()) {
        if (v.size() < u.size()) throw precondition_error("minimal_orbit needs a minimal word");
        continue;
      }
      const CyclicWord k = orbit_key(v);
      if (seen.insert(k).second) {
        if (seen.size() > cap) throw resource_error("minimal orbit exceeds cap of " + std::to_string(cap));
        queue.push_back(k);
      }
    }
  }
  return seen;
}

inline bool equivalent(const CyclicWord& a, const CyclicWord& b, std::size_t cap = 1'000'000) {
  if (a.rank() != b.rank()) throw precondition_error("equivalence needs words of the same rank");
  const CyclicWord ma = minimize(a).final;
  const CyclicWord mb = minimize(b).final;
  if (ma.size() != mb.size()) return false;
  return minimal_orbit(ma, cap).count(orbit_key(mb)) > 0;
}

// False iff some word in the minimal orbit omits a generator.
inline bool is_diskbusting(const CyclicWord& w, std::size_t cap = 1'000'000) {
  if (w.rank() == 1) return false;
  const auto orbit = minimal_orbit(minimize(w).final, cap);
  return std::all_of(orbit.begin(), orbit.end(), [](const CyclicWord& u) { return u.generator_count() == u.rank(); });
}

}  // namespace polyw
