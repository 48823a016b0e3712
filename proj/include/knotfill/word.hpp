#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "knotfill/errors.hpp"
#include "knotfill/symbol.hpp"

namespace knotfill {

using Exponent = std::int64_t;

struct Syllable {
  Symbol gen;
  Exponent exp;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// A single letter a or a^-1.
struct Letter {
  Symbol gen;
  int sign;  // +1 or -1

  Letter inverse() const { return {gen, -sign}; }
  friend bool operator==(const Letter&, const Letter&) = default;
  // Total order used by the cyclic normal form: by name, then a before a^-1.
  friend std::strong_ordering operator<=>(const Letter& a, const Letter& b) {
    if (auto c = a.gen <=> b.gen; c != 0) return c;
    return b.sign <=> a.sign;
  }
};

/// Freely reduced word, stored run-length encoded. Adjacent syllables always
/// carry distinct generators and no exponent is zero; the empty word is the
/// identity. Every constructor and operation maintains this.
class Word {
 public:
  Word() = default;

  static Word from_syllables(std::span<const Syllable> raw) {
    Word w;
    for (const auto& s : raw) w.push(s);
    return w;
  }

  static Word from_letters(std::span<const Letter> letters) {
    Word w;
    for (const auto& l : letters) w.push({l.gen, l.sign});
    return w;
  }

  static Word generator(Symbol gen, Exponent exp = 1) {
    Word w;
    w.push({gen, exp});
    return w;
  }

  std::span<const Syllable> syllables() const noexcept { return syl_; }
  std::size_t syllable_count() const noexcept { return syl_.size(); }
  bool empty() const noexcept { return syl_.empty(); }

  std::uint64_t letter_length() const noexcept {
    std::uint64_t n = 0;
    for (const auto& s : syl_) n += static_cast<std::uint64_t>(s.exp < 0 ? -s.exp : s.exp);
    return n;
  }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    out.reserve(letter_length());
    for (const auto& s : syl_) {
      int sign = s.exp > 0 ? 1 : -1;
      for (Exponent i = 0; i < (s.exp > 0 ? s.exp : -s.exp); ++i) out.push_back({s.gen, sign});
    }
    return out;
  }

  Word inverse() const {
    Word w;
    w.syl_.reserve(syl_.size());
    for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.syl_.push_back({it->gen, -it->exp});
    return w;
  }

  Word pow(Exponent k) const {
    if (k < 0) return inverse().pow(-k);
    Word result;
    Word base = *this;
    while (k > 0) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k > 0) base *= base;
    }
    return result;
  }

  Word& operator*=(const Word& rhs) {
    if (&rhs == this) return *this *= Word(rhs);
    syl_.reserve(syl_.size() + rhs.syl_.size());
    for (const auto& s : rhs.syl_) push(s);
    return *this;
  }

  friend Word operator*(Word lhs, const Word& rhs) {
    lhs *= rhs;
    return lhs;
  }

  friend bool operator==(const Word&, const Word&) = default;

  std::size_t hash() const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& s : syl_) {
      h ^= s.gen.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h ^= std::hash<Exponent>{}(s.exp) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  // Stack-style free reduction: merging into the top syllable is the only
  // way cancellation can happen.
  void push(const Syllable& s) {
    if (s.exp == 0) return;
    if (!syl_.empty() && syl_.back().gen == s.gen) {
      syl_.back().exp += s.exp;
      if (syl_.back().exp == 0) syl_.pop_back();
    } else {
      syl_.push_back(s);
    }
  }

  std::vector<Syllable> syl_;
};

inline Word reduce(std::span<const Syllable> raw) { return Word::from_syllables(raw); }
inline Word reduce(const Word& w) { return w; }
inline Word invert(const Word& w) { return w.inverse(); }

inline Exponent exponent_sum(const Word& w, Symbol gen) {
  Exponent total = 0;
  for (const auto& s : w.syllables())
    if (s.gen == gen) total += s.exp;
  return total;
}

// ---------------------------------------------------------------------------
// Text syntax: whitespace-separated `gen` or `gen^exp`; "1" is the identity.

inline std::vector<Syllable> parse_syllables(std::string_view text) {
  std::vector<Syllable> out;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    std::size_t start = i;
    while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view token = text.substr(start, i - start);
    skip_ws();
    if (token == "1") continue;
    auto caret = token.find('^');
    std::string_view name = token.substr(0, caret);
    Exponent exp = 1;
    if (caret != std::string_view::npos) {
      std::string_view digits = token.substr(caret + 1);
      std::size_t j = 0;
      bool negative = false;
      if (j < digits.size() && (digits[j] == '-' || digits[j] == '+')) negative = digits[j++] == '-';
      if (j == digits.size()) throw ParseError("missing exponent in '" + std::string(token) + "'");
      Exponent value = 0;
      for (; j < digits.size(); ++j) {
        if (!std::isdigit(static_cast<unsigned char>(digits[j])))
          throw ParseError("bad exponent in '" + std::string(token) + "'");
        if (value > (std::numeric_limits<Exponent>::max() - 9) / 10)
          throw ParseError("exponent overflow in '" + std::string(token) + "'");
        value = value * 10 + (digits[j] - '0');
      }
      exp = negative ? -value : value;
    }
    if (!is_identifier(name)) throw ParseError("bad generator in '" + std::string(token) + "'");
    out.push_back({Symbol(name), exp});
  }
  return out;
}

inline Word parse_word(std::string_view text) { return reduce(parse_syllables(text)); }

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& s : w.syllables()) {
    if (!out.empty()) out += ' ';
    out += s.gen.name();
    if (s.exp != 1) {
      out += '^';
      out += std::to_string(s.exp);
    }
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Word& w) { return os << to_string(w); }

// ---------------------------------------------------------------------------
// Cyclic reduction and free-group conjugacy.

/// base = conjugator^-1 * original * conjugator, with base cyclically reduced.
struct CyclicWord {
  Word base;
  Word conjugator;
};

inline bool is_cyclically_reduced(const Word& w) {
  auto s = w.syllables();
  if (s.size() < 2) return true;
  return !(s.front().gen == s.back().gen && (s.front().exp > 0) != (s.back().exp > 0));
}

inline CyclicWord cyclic_reduce(const Word& w) {
  std::vector<Syllable> s(w.syllables().begin(), w.syllables().end());
  std::size_t lo = 0, hi = s.size();  // live range [lo, hi)
  std::vector<Syllable> peeled;       // conjugator, left to right
  while (hi - lo >= 2) {
    Syllable& first = s[lo];
    Syllable& last = s[hi - 1];
    if (!(first.gen == last.gen) || (first.exp > 0) == (last.exp > 0)) break;
    Exponent k = std::min(first.exp > 0 ? first.exp : -first.exp, last.exp > 0 ? last.exp : -last.exp);
    Exponent step = first.exp > 0 ? k : -k;
    peeled.push_back({first.gen, step});
    first.exp -= step;
    last.exp += step;
    if (first.exp == 0) ++lo;
    if (last.exp == 0) --hi;
  }
  std::span<const Syllable> live(s.data() + lo, hi - lo);
  return {reduce(live), reduce(peeled)};
}

namespace detail {

// Booth's least-rotation algorithm; returns the start index.
template <class T>
std::size_t least_rotation(const std::vector<T>& s) {
  const std::size_t n = s.size();
  if (n == 0) return 0;
  std::vector<std::ptrdiff_t> f(2 * n, -1);
  std::size_t k = 0;
  for (std::size_t j = 1; j < 2 * n; ++j) {
    const T& sj = s[j % n];
    std::ptrdiff_t i = f[j - k - 1];
    while (i != -1 && !(sj == s[(k + static_cast<std::size_t>(i) + 1) % n])) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j - static_cast<std::size_t>(i) - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (i == -1 && !(sj == s[(k + static_cast<std::size_t>(i) + 1) % n])) {
      if (sj < s[(k + static_cast<std::size_t>(i) + 1) % n]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  return k;
}

}  // namespace detail

/// Lexicographically least rotation of the cyclically reduced letter
/// sequence. Two words are conjugate in the free group iff these agree.
inline std::vector<Letter> cyclic_normal_letters(const Word& w) {
  auto letters = cyclic_reduce(w).base.letters();
  std::size_t k = detail::least_rotation(letters);
  std::rotate(letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(k), letters.end());
  return letters;
}

inline Word cyclic_normal_form(const Word& w) { return Word::from_letters(cyclic_normal_letters(w)); }

inline bool is_conjugate_free(const Word& a, const Word& b) {
  return cyclic_normal_letters(a) == cyclic_normal_letters(b);
}

}  // namespace knotfill

template <>
struct std::hash<knotfill::Word> {
  std::size_t operator()(const knotfill::Word& w) const noexcept { return w.hash(); }
};
