#pragma once

// Letters, words and cyclic words over a free group of finite rank, plus the
// text grammar used throughout the library and the CLI.
//
// Generators are numbered 1..rank and written a..z in text; an uppercase
// letter denotes the inverse generator.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polyw/error.hpp"

namespace polyw {

inline constexpr int max_rank = 26;

class Letter {
 public:
  constexpr Letter() = default;
  constexpr Letter(int generator, int sign) : value_(sign < 0 ? -generator : generator) {}

  static constexpr Letter from_signed(int v) { return Letter(v < 0 ? -v : v, v < 0 ? -1 : 1); }

  constexpr int generator() const { return value_ < 0 ? -value_ : value_; }
  constexpr int sign() const { return value_ < 0 ? -1 : 1; }
  // +g or -g.
  constexpr int signed_value() const { return value_; }
  constexpr Letter inverse() const { return from_signed(-value_); }

  // Position in the total order (generator, sign) with +1 before -1.
  constexpr int key() const { return 2 * (generator() - 1) + (value_ < 0 ? 1 : 0); }

  friend constexpr bool operator==(Letter, Letter) = default;
  friend constexpr std::strong_ordering operator<=>(Letter a, Letter b) { return a.key() <=> b.key(); }

 private:
  int value_ = 1;
};

inline char letter_char(Letter x) {
  char c = static_cast<char>('a' + x.generator() - 1);
  return x.sign() < 0 ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
}

inline void check_rank(int rank) {
  if (rank < 1 || rank > max_rank) {
    throw rank_error("rank must lie in 1.." + std::to_string(max_rank) + ", got " + std::to_string(rank));
  }
}

struct Word {
  int rank = 1;
  std::vector<Letter> letters;

  bool empty() const { return letters.empty(); }
  std::size_t size() const { return letters.size(); }
  friend bool operator==(const Word&, const Word&) = default;
};

inline std::vector<Letter> inverse_letters(std::span<const Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline std::vector<Letter> free_reduce(std::span<const Letter> letters) {
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter x : letters) {
    if (!out.empty() && out.back() == x.inverse()) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline Word free_reduce(const Word& w) { return Word{w.rank, free_reduce(std::span<const Letter>(w.letters))}; }

inline bool is_reduced(std::span<const Letter> letters) {
  for (std::size_t i = 1; i < letters.size(); ++i) {
    if (letters[i] == letters[i - 1].inverse()) return false;
  }
  return true;
}

inline std::string to_string(std::span<const Letter> letters) {
  std::string s;
  s.reserve(letters.size());
  for (Letter x : letters) s.push_back(letter_char(x));
  return s;
}

// Start index of the lexicographically least rotation (two-pointer method).
template <typename T>
std::size_t least_rotation(std::span<const T> s) {
  const std::size_t n = s.size();
  std::size_t i = 0, j = 1, k = 0;
  while (i < n && j < n && k < n) {
    const T& a = s[(i + k) % n];
    const T& b = s[(j + k) % n];
    if (a == b) {
      ++k;
      continue;
    }
    if (b < a) {
      i += k + 1;
    } else {
      j += k + 1;
    }
    if (i == j) ++j;
    k = 0;
  }
  return std::min(i, j) % (n == 0 ? 1 : n);
}

template <typename T>
std::vector<T> rotated(std::span<const T> s, std::size_t start) {
  std::vector<T> out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s[(start + i) % s.size()]);
  return out;
}

// A nontrivial cyclically reduced word stored in its least rotation.
class CyclicWord {
 public:
  // The word "a" in rank 1.
  CyclicWord() : letters_{Letter(1, 1)} {}

  // Cyclically reduces and canonicalizes; throws precondition_error on the identity.
  static CyclicWord from_letters(int rank, std::span<const Letter> letters) {
    check_rank(rank);
    for (Letter x : letters) {
      if (x.generator() > rank) {
        throw rank_error("generator " + std::to_string(x.generator()) + " exceeds rank " + std::to_string(rank));
      }
    }
    std::vector<Letter> r = free_reduce(letters);
    std::size_t lo = 0, hi = r.size();
    while (hi - lo >= 2 && r[lo] == r[hi - 1].inverse()) {
      ++lo;
      --hi;
    }
    if (lo == hi) throw precondition_error("the identity element has no cyclic word");
    std::vector<Letter> core(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
    const std::size_t start = least_rotation(std::span<const Letter>(core));
    return CyclicWord(rank, rotated(std::span<const Letter>(core), start));
  }

  int rank() const { return rank_; }
  std::span<const Letter> letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  // Cyclic indexing; any integer index is reduced modulo size().
  Letter operator[](long long i) const {
    const long long n = static_cast<long long>(letters_.size());
    return letters_[static_cast<std::size_t>(((i % n) + n) % n)];
  }

  bool uses_generator(int g) const {
    return std::any_of(letters_.begin(), letters_.end(), [g](Letter x) { return x.generator() == g; });
  }
  int generator_count() const {
    int count = 0;
    for (int g = 1; g <= rank_; ++g) count += uses_generator(g) ? 1 : 0;
    return count;
  }

  Word as_word() const { return Word{rank_, letters_}; }
  CyclicWord inverse() const { return from_letters(rank_, inverse_letters(letters_)); }

  // Compact form, e.g. "aabaB"; parse_word reads it back.
  std::string str() const { return to_string(letters_); }
  // Exponent form, e.g. "a^2 b a b^-1".
  std::string pretty() const;

  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;
  friend std::strong_ordering operator<=>(const CyclicWord& a, const CyclicWord& b) {
    if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
    if (auto c = a.letters_.size() <=> b.letters_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
  }

 private:
  CyclicWord(int rank, std::vector<Letter> letters) : rank_(rank), letters_(std::move(letters)) {}

  int rank_ = 1;
  std::vector<Letter> letters_;
};

inline CyclicWord cyclic_reduce(const Word& w) { return CyclicWord::from_letters(w.rank, w.letters); }

// ---------------------------------------------------------------------------
// Text grammar
//
//   word := term+        term := atom ("^" int | "^" atom)*
//   atom := letter | "(" word ")"
//
// u^v with an atom exponent is the right conjugate v^-1 u v.

namespace detail {

class WordParser {
 public:
  WordParser(std::string_view text, int rank) : text_(text), rank_(rank) {}

  std::vector<Letter> parse() {
    std::vector<Letter> w = sequence();
    skip_ws();
    if (pos_ != text_.size()) {
      throw parse_error(pos_, text_[pos_] == ')' ? "unbalanced ')'" : std::string("unexpected '") + text_[pos_] + "'");
    }
    return w;
  }

 private:
  static constexpr std::size_t max_letters = 10'000'000;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_atom_start() {
    skip_ws();
    return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '(');
  }

  std::vector<Letter> sequence() {
    if (!at_atom_start()) {
      throw parse_error(pos_, pos_ < text_.size() ? std::string("expected a letter or '(' but found '") +
                                                        text_[pos_] + "'"
                                                  : "expected a letter or '('");
    }
    std::vector<Letter> out;
    while (at_atom_start()) {
      std::vector<Letter> t = term();
      out.insert(out.end(), t.begin(), t.end());
      out = free_reduce(std::span<const Letter>(out));
    }
    return out;
  }

  std::vector<Letter> term() {
    std::vector<Letter> base = atom();
    for (;;) {
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '^') break;
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+' ||
                                  std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
        base = power(base, integer());
      } else if (at_atom_start()) {
        std::vector<Letter> v = atom();
        std::vector<Letter> out = inverse_letters(v);
        out.insert(out.end(), base.begin(), base.end());
        out.insert(out.end(), v.begin(), v.end());
        base = free_reduce(std::span<const Letter>(out));
      } else {
        throw parse_error(pos_, "expected an integer or an atom after '^'");
      }
    }
    return base;
  }

  std::vector<Letter> atom() {
    skip_ws();
    const char c = text_[pos_];
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      std::vector<Letter> inner = sequence();
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw parse_error(open, "unclosed '('");
      ++pos_;
      return inner;
    }
    const int g = std::tolower(static_cast<unsigned char>(c)) - 'a' + 1;
    if (g < 1 || g > max_rank) throw parse_error(pos_, std::string("invalid letter '") + c + "'");
    if (g > rank_) {
      throw rank_error("generator '" + std::string(1, c) + "' at position " + std::to_string(pos_) +
                       " exceeds rank " + std::to_string(rank_));
    }
    ++pos_;
    return {Letter(g, std::isupper(static_cast<unsigned char>(c)) ? -1 : 1)};
  }

  long long integer() {
    const std::size_t start = pos_;
    int sign = 1;
    if (text_[pos_] == '-' || text_[pos_] == '+') {
      sign = text_[pos_] == '-' ? -1 : 1;
      ++pos_;
    }
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      throw parse_error(pos_, "expected digits in exponent");
    }
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > static_cast<long long>(max_letters)) throw parse_error(start, "exponent too large");
      ++pos_;
    }
    if (v == 0) throw parse_error(start, "exponent must be nonzero");
    return sign * v;
  }

  std::vector<Letter> power(const std::vector<Letter>& u, long long k) {
    const std::vector<Letter> unit = k < 0 ? inverse_letters(u) : u;
    const long long times = k < 0 ? -k : k;
    if (static_cast<long long>(unit.size()) * times > static_cast<long long>(max_letters)) {
      throw parse_error(pos_, "expanded word too long");
    }
    std::vector<Letter> out;
    out.reserve(unit.size() * static_cast<std::size_t>(times));
    for (long long i = 0; i < times; ++i) out.insert(out.end(), unit.begin(), unit.end());
    return free_reduce(std::span<const Letter>(out));
  }

  std::string_view text_;
  int rank_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses text into a freely reduced word. Throws parse_error or rank_error.
inline Word parse_word(std::string_view text, int rank) {
  check_rank(rank);
  return Word{rank, detail::WordParser(text, rank).parse()};
}

inline CyclicWord parse_cyclic(std::string_view text, int rank) { return cyclic_reduce(parse_word(text, rank)); }

// Smallest rank whose generators cover every letter in the text (at least 2).
inline int infer_rank(std::string_view text) {
  int r = 2;
  for (char c : text) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      r = std::max(r, std::tolower(static_cast<unsigned char>(c)) - 'a' + 1);
    }
  }
  return std::min(r, max_rank);
}

// ---------------------------------------------------------------------------
// Syllables

struct Syllable {
  int generator = 1;
  int exponent = 1;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

struct Syllables {
  std::vector<Syllable> items;
  // Index into CyclicWord::letters() where items[0] starts.
  std::size_t offset = 0;

  std::size_t size() const { return items.size(); }
  const Syllable& operator[](std::size_t i) const { return items[i % items.size()]; }
};

inline Syllables syllable_decomposition(const CyclicWord& w) {
  const auto letters = w.letters();
  const std::size_t n = letters.size();
  Syllables out;
  if (w.generator_count() == 1) {
    out.items.push_back({letters[0].generator(), static_cast<int>(n) * letters[0].sign()});
    return out;
  }
  std::size_t start = 0;
  while (letters[(start + n - 1) % n].generator() == letters[start].generator()) ++start;
  out.offset = start;
  for (std::size_t i = 0; i < n; ++i) {
    const Letter x = letters[(start + i) % n];
    if (!out.items.empty() && out.items.back().generator == x.generator()) {
      out.items.back().exponent += x.sign();
    } else {
      out.items.push_back({x.generator(), x.sign()});
    }
  }
  return out;
}

inline CyclicWord expand(const Syllables& s, int rank) {
  std::vector<Letter> letters;
  for (const Syllable& y : s.items) {
    for (int i = 0; i < std::abs(y.exponent); ++i) letters.emplace_back(y.generator, y.exponent < 0 ? -1 : 1);
  }
  return CyclicWord::from_letters(rank, letters);
}

inline std::string CyclicWord::pretty() const {
  const Syllables s = syllable_decomposition(*this);
  std::string out;
  for (const Syllable& y : s.items) {
    if (!out.empty()) out += ' ';
    out += static_cast<char>('a' + y.generator - 1);
    if (y.exponent != 1) out += "^" + std::to_string(y.exponent);
  }
  return out;
}

struct PrimitiveRoot {
  CyclicWord root;
  int power = 1;
};

inline PrimitiveRoot primitive_root(const CyclicWord& w) {
  const std::size_t n = w.size();
  const auto letters = w.letters();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = 0; i + d < n && periodic; ++i) periodic = letters[i] == letters[i + d];
    if (periodic) {
      return {CyclicWord::from_letters(w.rank(), letters.subspan(0, d)), static_cast<int>(n / d)};
    }
  }
  return {w, 1};
}

inline bool is_proper_power(const CyclicWord& w) { return primitive_root(w).power > 1; }

// ---------------------------------------------------------------------------
// Relabelings: generator permutation, generator inversion, word inversion,
// rotation.

struct Relabeling {
  enum class Kind { permute, invert, reverse, rotate };

  Kind kind = Kind::rotate;
  // permute: generator g goes to permutation[g - 1] (1-based values).
  std::vector<int> permutation;
  // invert: generators whose letters change sign.
  std::vector<int> generators;
  // rotate: number of letters moved from the front to the back.
  long long shift = 0;

  static Relabeling permute(std::vector<int> p) { return {Kind::permute, std::move(p), {}, 0}; }
  static Relabeling invert(std::vector<int> gens) { return {Kind::invert, {}, std::move(gens), 0}; }
  static Relabeling inverse_word() { return {Kind::reverse, {}, {}, 0}; }
  static Relabeling rotate(long long s) { return {Kind::rotate, {}, {}, s}; }

  Letter apply(Letter x) const {
    switch (kind) {
      case Kind::permute:
        return Letter(permutation.at(static_cast<std::size_t>(x.generator() - 1)), x.sign());
      case Kind::invert:
        return std::find(generators.begin(), generators.end(), x.generator()) != generators.end() ? x.inverse() : x;
      default:
        return x;
    }
  }
};

// Image of the letter sequence before canonicalization.
inline std::vector<Letter> apply_raw(std::span<const Letter> letters, const Relabeling& t) {
  if (t.kind == Relabeling::Kind::reverse) return inverse_letters(letters);
  if (t.kind == Relabeling::Kind::rotate) {
    const long long n = static_cast<long long>(letters.size());
    return rotated(letters, static_cast<std::size_t>(((t.shift % n) + n) % n));
  }
  std::vector<Letter> out;
  out.reserve(letters.size());
  for (Letter x : letters) out.push_back(t.apply(x));
  return out;
}

inline CyclicWord transform(const CyclicWord& w, const Relabeling& t) {
  if (t.kind == Relabeling::Kind::permute) {
    std::vector<int> sorted = t.permutation;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> ident(static_cast<std::size_t>(w.rank()));
    std::iota(ident.begin(), ident.end(), 1);
    if (sorted != ident) throw precondition_error("permutation must act on 1..rank");
  }
  return CyclicWord::from_letters(w.rank(), apply_raw(w.letters(), t));
}

}  // namespace polyw
