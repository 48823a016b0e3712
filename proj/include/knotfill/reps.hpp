#pragma once

#include <array>
#include <map>
#include <string>

#include "knotfill/knots.hpp"
#include "knotfill/quadext.hpp"

namespace knotfill {

/// Element of PSL(2) over Q(sqrt d): a determinant-one matrix identified
/// with its negative. Stored with the first nonzero entry (row-major)
/// positive, so == is plain entrywise comparison.
class ProjMatrix2 {
 public:
  ProjMatrix2(QuadExt m11, QuadExt m12, QuadExt m21, QuadExt m22)
      : e_{std::move(m11), std::move(m12), std::move(m21), std::move(m22)} {
    for (const auto& x : e_)
      if (x.d() != e_[0].d()) throw DiscriminantMismatch(e_[0].d(), x.d());
    if (!(e_[0] * e_[3] - e_[1] * e_[2] == QuadExt::rational(1, d()))) throw NotUnimodular();
    canonicalize();
  }

  static ProjMatrix2 identity(std::int64_t d) {
    return {QuadExt::rational(1, d), QuadExt(d), QuadExt(d), QuadExt::rational(1, d)};
  }

  static ProjMatrix2 diagonal(const QuadExt& zeta) {
    return {zeta, QuadExt(zeta.d()), QuadExt(zeta.d()), zeta.inverse()};
  }

  // [[1, zeta], [0, 1]]
  static ProjMatrix2 parabolic(const QuadExt& zeta) {
    return {QuadExt::rational(1, zeta.d()), zeta, QuadExt(zeta.d()), QuadExt::rational(1, zeta.d())};
  }

  const QuadExt& m11() const noexcept { return e_[0]; }
  const QuadExt& m12() const noexcept { return e_[1]; }
  const QuadExt& m21() const noexcept { return e_[2]; }
  const QuadExt& m22() const noexcept { return e_[3]; }
  std::int64_t d() const noexcept { return e_[0].d(); }

  ProjMatrix2 inverse() const { return ProjMatrix2(e_[3], -e_[1], -e_[2], e_[0], Unchecked{}); }

  ProjMatrix2 pow(long long k) const {
    if (k < 0) return inverse().pow(-k);
    ProjMatrix2 result = identity(d()), base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      k >>= 1;
      if (k) base = base * base;
    }
    return result;
  }

  friend ProjMatrix2 operator*(const ProjMatrix2& l, const ProjMatrix2& r) {
    const auto& a = l.e_;
    const auto& b = r.e_;
    return ProjMatrix2(a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                       a[2] * b[1] + a[3] * b[3], Unchecked{});
  }

  friend bool operator==(const ProjMatrix2& l, const ProjMatrix2& r) { return l.e_ == r.e_; }

  bool is_identity() const { return *this == identity(d()); }

 private:
  struct Unchecked {};
  // Products and inverses of determinant-one matrices need no recheck.
  ProjMatrix2(QuadExt m11, QuadExt m12, QuadExt m21, QuadExt m22, Unchecked)
      : e_{std::move(m11), std::move(m12), std::move(m21), std::move(m22)} {
    canonicalize();
  }

  void canonicalize() {
    for (const auto& x : e_) {
      if (x.is_zero()) continue;
      if (!x.is_positive())
        for (auto& y : e_) y = -y;
      return;
    }
  }

  std::array<QuadExt, 4> e_;
};

/// Trace up to sign, canonicalized to the positive representative.
inline QuadExt trace_pm(const ProjMatrix2& m) { return (m.m11() + m.m22()).canonical_sign(); }

/// Parabolic or trivial: trace = +-2. Meaningful as a peripheral test only
/// for a discrete faithful holonomy.
inline bool is_peripheral_trace(const ProjMatrix2& m) { return trace_pm(m) == QuadExt::rational(2, m.d()); }

inline std::string to_string(const ProjMatrix2& m) {
  return "[[" + to_string(m.m11()) + ", " + to_string(m.m12()) + "],[" + to_string(m.m21()) + ", " +
         to_string(m.m22()) + "]]";
}

/// Generator images that kill every relator of the source presentation in
/// PSL(2).
class Representation {
 public:
  Representation(FinitePresentation source, std::map<Symbol, ProjMatrix2> images)
      : source_(std::move(source)), images_(std::move(images)) {
    if (images_.empty()) throw InvalidRepresentation("representation has no generators");
    d_ = images_.begin()->second.d();
    for (const auto& g : source_.generators())
      if (!images_.contains(g)) throw InvalidRepresentation("no image for generator " + g.name());
    for (const auto& [g, m] : images_) {
      if (!source_.has_generator(g)) throw UnknownGenerator(g.name());
      if (m.d() != d_) throw DiscriminantMismatch(d_, m.d());
    }
    for (const auto& r : source_.relators())
      if (!eval(r).is_identity()) throw InvalidRepresentation("relator " + to_string(r) + " is not killed");
  }

  const FinitePresentation& source() const noexcept { return source_; }
  const std::map<Symbol, ProjMatrix2>& images() const noexcept { return images_; }
  std::int64_t d() const noexcept { return d_; }

  ProjMatrix2 eval(const Word& w) const {
    ProjMatrix2 acc = ProjMatrix2::identity(d_);
    for (const auto& s : w.syllables()) {
      auto it = images_.find(s.gen);
      if (it == images_.end()) throw UnknownGenerator(s.gen.name());
      acc = acc * it->second.pow(s.exp);
    }
    return acc;
  }

 private:
  FinitePresentation source_;
  std::map<Symbol, ProjMatrix2> images_;
  std::int64_t d_ = 0;
};

inline ProjMatrix2 eval_word(const Representation& rep, const Word& w) { return rep.eval(w); }

/// omega = (-1 + sqrt(-3)) / 2.
inline QuadExt omega() { return QuadExt(Rational(-1, 2), Rational(1, 2), -3); }

/// mu -> [[1, 1], [0, 1]], h -> [[1, 0], [-omega, 1]] over Q(sqrt -3).
inline Representation figure_eight_holonomy() {
  const QuadExt one = QuadExt::rational(1, -3), zero(-3);
  std::map<Symbol, ProjMatrix2> images{
      {Symbol("mu"), ProjMatrix2(one, one, zero, one)},
      {Symbol("h"), ProjMatrix2(one, zero, -omega(), one)},
  };
  return Representation(figure_eight_group().presentation(), std::move(images));
}

// ---------------------------------------------------------------------------
// Conjugacy invariants of g^{g^alpha} g^-2.

/// Trace (up to sign) of rho(g^{g^alpha} g^-2) by explicit multiplication.
inline QuadExt construction_trace(const ProjMatrix2& g, const ProjMatrix2& alpha) {
  ProjMatrix2 gamma = alpha.inverse() * g * alpha;
  return trace_pm(gamma.inverse() * g * gamma * g.pow(-2));
}

/// tr = ad((zeta + zeta^-1) - (zeta^3 + zeta^-3)) + (zeta^3 + zeta^-3), up to sign.
inline QuadExt nonperipheral_trace_from_ad(const QuadExt& zeta, const QuadExt& ad) {
  QuadExt c1 = zeta + zeta.inverse();
  QuadExt c3 = zeta.pow(3) + zeta.pow(-3);
  return (ad * (c1 - c3) + c3).canonical_sign();
}

/// rho(g) = diag(zeta, zeta^-1), rho(alpha) = [[x, y], [z, u]]. Returns
/// r(g, alpha) = -ad where [[a, b], [c, d]] = rho(alpha^-1 g alpha); in
/// closed form with s = zeta - zeta^-1:
///   r = s^2 (xu)^2 - s^2 (xu) - 1.
/// The trace of g^{g^alpha} g^-2 depends only on ad, which makes r a
/// conjugacy invariant; the relation is rechecked against direct
/// multiplication on every call.
inline QuadExt invariant_nonperipheral(const QuadExt& zeta, const ProjMatrix2& alpha) {
  if (zeta.d() != alpha.d()) throw DiscriminantMismatch(zeta.d(), alpha.d());
  if (zeta.is_zero()) throw ZeroZeta();
  if (zeta * zeta == QuadExt::rational(1, zeta.d())) throw DegenerateZeta();
  const QuadExt s = zeta - zeta.inverse();
  const QuadExt xu = alpha.m11() * alpha.m22();
  const QuadExt r = s * s * xu * xu - s * s * xu - 1;
  const QuadExt direct = construction_trace(ProjMatrix2::diagonal(zeta), alpha);
  if (!(nonperipheral_trace_from_ad(zeta, -r) == direct))
    throw std::logic_error("non-peripheral invariant disagrees with direct trace");
  return r;
}

struct PeripheralInvariant {
  QuadExt value;         // 2 z^4 zeta^4 + 2
  bool not_peripheral;   // value != +-2
};

/// rho(g) = [[1, zeta], [0, 1]], rho(alpha) = [[x, y], [z, u]]; the trace of
/// g^{g^alpha} g^-2 is +-(2 z^4 zeta^4 + 2).
inline PeripheralInvariant invariant_peripheral(const QuadExt& zeta, const ProjMatrix2& alpha) {
  if (zeta.d() != alpha.d()) throw DiscriminantMismatch(zeta.d(), alpha.d());
  if (zeta.is_zero()) throw ZeroZeta();
  const QuadExt z = alpha.m21();
  const QuadExt value = 2 * z.pow(4) * zeta.pow(4) + 2;
  const QuadExt direct = construction_trace(ProjMatrix2::parabolic(zeta), alpha);
  if (!(value.canonical_sign() == direct))
    throw std::logic_error("peripheral invariant disagrees with direct trace");
  return {value, !value.equals_up_to_sign(QuadExt::rational(2, zeta.d()))};
}

// ---------------------------------------------------------------------------
// JSON: {"d": -3, "images": {"mu": [["1","1"],["0","1"]], ...}} plus an
// embedded presentation under "presentation".

inline nlohmann::json to_json(const ProjMatrix2& m) {
  return nlohmann::json::array({nlohmann::json::array({to_string(m.m11()), to_string(m.m12())}),
                                nlohmann::json::array({to_string(m.m21()), to_string(m.m22())})});
}

inline ProjMatrix2 matrix_from_json(const nlohmann::json& j, std::int64_t d) {
  auto entry = [&](int r, int c) { return parse_quadext(j.at(r).at(c).get<std::string>(), d); };
  return ProjMatrix2(entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1));
}

inline Representation representation_from_json(const nlohmann::json& j) {
  std::int64_t d = j.at("d").get<std::int64_t>();
  auto pres = presentation_from_json(j.at("presentation"));
  std::map<Symbol, ProjMatrix2> images;
  for (const auto& [name, m] : j.at("images").items()) images.emplace(Symbol(name), matrix_from_json(m, d));
  return Representation(std::move(pres), std::move(images));
}

}  // namespace knotfill
