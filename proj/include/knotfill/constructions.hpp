#pragma once

#include <utility>
#include <vector>

#include "knotfill/word.hpp"

namespace knotfill {

// g^b = b^-1 g b
inline Word conjugate(const Word& g, const Word& b) { return b.inverse() * g * b; }

// [a, b] = a b a^-1 b^-1
inline Word commutator(const Word& a, const Word& b) { return a * b * a.inverse() * b.inverse(); }

inline bool commute_free(const Word& a, const Word& b) { return commutator(a, b).empty(); }

/// g^{g^alpha} g^-2, a product of conjugates of g^{+-1} homologous to g^-1.
inline Word self_conjugate_step(const Word& g, const Word& alpha) {
  return conjugate(g, conjugate(g, alpha)) * g.pow(-2);
}

/// w = v^{v^u} v^-2. Throws CommutingPair when uv = vu in the free group.
inline Word bmt_word(const Word& u, const Word& v) {
  if (commute_free(u, v)) throw CommutingPair();
  return self_conjugate_step(v, u);
}

/// [g_0, g_1, ..., g_k] with g_0 = g and g_{i+1} = g_i^{g_i^{alpha_i}} g_i^-2.
inline std::vector<Word> iterate_construction(const Word& g, std::span<const Word> alphas) {
  if (g.empty()) throw InvalidN("iterate_construction needs a nonempty g");
  std::vector<Word> out{g};
  out.reserve(alphas.size() + 1);
  for (const auto& alpha : alphas) out.push_back(self_conjugate_step(out.back(), alpha));
  return out;
}

struct TorusGn {
  Word expanded;
  Word closed_form;
  // True when the literal closed-form letter sequence needed no cancellation.
  bool closed_form_was_reduced;
};

/// g_n = g^{g^{w_n}} g^-2 for g = [x, y], w_n = y (x y)^{n+1}, together with
/// the literal closed form
///   (YX)^n Y^2 X y (xy)^{n+2} X Y^2 X (YX)^n Y x y^2 (xy)^{n-1} x y^2 x YX yxYX
/// where X = x^-1, Y = y^-1.
inline TorusGn torus_gn(long n) {
  if (n < 1) throw InvalidN("torus_gn requires n >= 1");
  const Symbol sx("x"), sy("y");
  const Word x = Word::generator(sx), y = Word::generator(sy);
  const Word X = x.inverse(), Y = y.inverse();
  const Word g = commutator(x, y);
  const Word wn = y * (x * y).pow(n + 1);
  Word expanded = self_conjugate_step(g, wn);

  std::vector<Syllable> raw;
  auto put = [&](const Word& w, long times = 1) {
    for (long i = 0; i < times; ++i)
      for (const auto& s : w.syllables()) raw.push_back(s);
  };
  put(Y * X, n);
  put(Y.pow(2) * X);
  put(y);
  put(x * y, n + 2);
  put(X * Y.pow(2) * X);
  put(Y * X, n);
  put(Y);
  put(x * y.pow(2));
  put(x * y, n - 1);
  put(x * y.pow(2) * x);
  put(Y * X);
  put(y * x * Y * X);
  std::uint64_t raw_letters = 0;
  for (const auto& s : raw) raw_letters += static_cast<std::uint64_t>(s.exp < 0 ? -s.exp : s.exp);
  Word closed = reduce(raw);
  bool was_reduced = closed.letter_length() == raw_letters;
  return {std::move(expanded), std::move(closed), was_reduced};
}

}  // namespace knotfill
