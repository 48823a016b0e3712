#pragma once

#include <fstream>
#include <numeric>
#include <optional>
#include <tuple>
#include <string>
#include <variant>

#include "knotfill/constructions.hpp"
#include "knotfill/presentation.hpp"
#include "knotfill/slope.hpp"

namespace knotfill {

struct TorusParams {
  std::int64_t a;
  std::int64_t b;
  friend bool operator==(const TorusParams&, const TorusParams&) = default;
};

// (p, q)-cable of the torus knot T(a, b); q is the winding number.
struct CableParams {
  TorusParams companion;
  std::int64_t p;
  std::int64_t q;
  friend bool operator==(const CableParams&, const CableParams&) = default;
};

/// Knot group with a standard meridian-longitude pair. Construction checks
/// H_1 = Z, mu a generator of it and lambda null-homologous.
class PeripheralizedKnotGroup {
 public:
  PeripheralizedKnotGroup(FinitePresentation presentation, Word meridian, Word longitude, std::string label,
                          std::optional<TorusParams> torus = std::nullopt,
                          std::optional<CableParams> cable = std::nullopt)
      : presentation_(std::move(presentation)),
        meridian_(std::move(meridian)),
        longitude_(std::move(longitude)),
        label_(std::move(label)),
        torus_(torus),
        cable_(cable) {
    validate();
  }

  const FinitePresentation& presentation() const noexcept { return presentation_; }
  const Word& meridian() const noexcept { return meridian_; }
  const Word& longitude() const noexcept { return longitude_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<TorusParams>& torus_params() const noexcept { return torus_; }
  const std::optional<CableParams>& cable_params() const noexcept { return cable_; }

  /// mu^p lambda^q, or mu for infinity.
  Word slope_element(const Slope& r) const {
    if (r.is_infinite()) return meridian_;
    return meridian_.pow(r.p()) * longitude_.pow(r.q());
  }

 private:
  void validate() const {
    AbelianizationMap ab(presentation_);
    const auto& inv = ab.invariants();
    if (inv.free_rank != 1 || !inv.torsion.empty())
      throw InvalidPeripheralSystem(label_ + ": abelianization is " + to_string(inv) + ", expected Z");
    auto mu = ab.image(meridian_);
    if (!(mu.free[0] == 1 || mu.free[0] == -1))
      throw InvalidPeripheralSystem(label_ + ": meridian does not generate H_1");
    if (!ab.image(longitude_).is_zero())
      throw InvalidPeripheralSystem(label_ + ": longitude is not null-homologous");
  }

  FinitePresentation presentation_;
  Word meridian_;
  Word longitude_;
  std::string label_;
  std::optional<TorusParams> torus_;
  std::optional<CableParams> cable_;
};

namespace detail {

inline void check_torus_params(std::int64_t a, std::int64_t b) {
  auto abs = [](std::int64_t v) { return v < 0 ? -v : v; };
  if (abs(a) < 2 || abs(b) < 2 || std::gcd(abs(a), abs(b)) != 1)
    throw InvalidTorusParams("torus knot T(" + std::to_string(a) + "," + std::to_string(b) +
                             ") needs |a|, |b| >= 2 and gcd(a, b) = 1");
}

}  // namespace detail

/// <x, y | x^a y^-b> with mu = x^s y^t (s b + t a = 1, |s| minimal, then
/// |t| minimal, then s > 0) and lambda = x^a mu^{-ab}.
inline PeripheralizedKnotGroup torus_knot_group(std::int64_t a, std::int64_t b) {
  detail::check_torus_params(a, b);
  // s ranges over one residue class mod |a|; scan the window around zero.
  const std::int64_t abs_a = a < 0 ? -a : a;
  std::optional<std::pair<std::int64_t, std::int64_t>> best;
  for (std::int64_t s = -abs_a; s <= abs_a; ++s) {
    std::int64_t rest = 1 - s * b;
    if (rest % a != 0) continue;
    std::int64_t t = rest / a;
    auto key = [](std::int64_t s0, std::int64_t t0) {
      return std::tuple(s0 < 0 ? -s0 : s0, t0 < 0 ? -t0 : t0, s0 < 0);
    };
    if (!best || key(s, t) < key(best->first, best->second)) best = {s, t};
  }
  const Symbol sx("x"), sy("y");
  const Word x = Word::generator(sx), y = Word::generator(sy);
  Word mu = x.pow(best->first) * y.pow(best->second);
  Word lambda = x.pow(a) * mu.pow(-a * b);
  FinitePresentation pres({sx, sy}, {x.pow(a) * y.pow(-b)});
  return PeripheralizedKnotGroup(std::move(pres), std::move(mu), std::move(lambda),
                                 "T(" + std::to_string(a) + "," + std::to_string(b) + ")", TorusParams{a, b});
}

/// Two-bridge presentation on the meridians mu, h.
inline PeripheralizedKnotGroup figure_eight_group() {
  FinitePresentation pres({Symbol("mu"), Symbol("h")},
                          {parse_word("mu h mu^-1 h^-1 mu h^-1 mu^-1 h mu h^-1")});
  return PeripheralizedKnotGroup(std::move(pres), parse_word("mu"),
                                 parse_word("h mu^-1 h^-1 mu^2 h^-1 mu^-1 h"), "figure8");
}

/// pi_1(K(r)) = G(K) / <<mu^p lambda^q>>.
inline FinitePresentation build_filling(const PeripheralizedKnotGroup& k, const Slope& r) {
  return add_relator(k.presentation(), k.slope_element(r));
}

/// m/n surgery on T(a, b) is a lens space iff |a b n - m| = 1.
inline bool is_cyclic_torus_filling(std::int64_t a, std::int64_t b, const Slope& r) {
  detail::check_torus_params(a, b);
  if (r.is_infinite()) throw InfiniteSlope();
  std::int64_t d = a * b * r.q() - r.p();
  return d == 1 || d == -1;
}

// ---------------------------------------------------------------------------
// Cable fillings.

struct CyclicFilling {
  friend bool operator==(const CyclicFilling&, const CyclicFilling&) = default;
};
// K(s) = k(s / q^2), an irreducible filling of the companion.
struct IrreducibleFilling {
  Slope companion_slope;
  friend bool operator==(const IrreducibleFilling&, const IrreducibleFilling&) = default;
};
// K(s) = k(p/q) # L(q, p).
struct ReducibleConnectedSum {
  Slope companion_slope;
  std::int64_t lens_q;
  std::int64_t lens_p;
  friend bool operator==(const ReducibleConnectedSum&, const ReducibleConnectedSum&) = default;
};
// E(k) union a boundary-irreducible Seifert fibered space: a graph manifold.
struct SeifertOrGraph {
  friend bool operator==(const SeifertOrGraph&, const SeifertOrGraph&) = default;
};

using FillingClassification = std::variant<CyclicFilling, IrreducibleFilling, ReducibleConnectedSum, SeifertOrGraph>;

inline FillingClassification classify_cable_filling(std::int64_t a, std::int64_t b, std::int64_t q, std::int64_t p,
                                                    const Slope& r) {
  detail::check_torus_params(a, b);
  if (q < 2) throw InvalidCableParams("cable winding q must be >= 2");
  if (std::gcd(p < 0 ? -p : p, q) != 1) throw InvalidCableParams("cable parameters must be coprime");
  if (r.is_infinite()) throw InfiniteSlope();
  const std::int64_t m = r.p(), n = r.q();
  std::int64_t d = n * p * q - m;
  if (d < 0) d = -d;
  if (d > 1) return SeifertOrGraph{};
  if (d == 1) {
    Slope companion(m, n * q * q);
    if (is_cyclic_torus_filling(a, b, companion)) return CyclicFilling{};
    return IrreducibleFilling{companion};
  }
  return ReducibleConnectedSum{Slope(p, q), q, p};
}

inline std::string to_string(const FillingClassification& c) {
  struct {
    std::string operator()(const CyclicFilling&) const { return "Cyclic"; }
    std::string operator()(const IrreducibleFilling& f) const {
      return "IrreducibleFilling(" + to_string(f.companion_slope) + ")";
    }
    std::string operator()(const ReducibleConnectedSum& f) const {
      return "ReducibleConnectedSum(L(" + std::to_string(f.lens_q) + "," + std::to_string(f.lens_p) + "))";
    }
    std::string operator()(const SeifertOrGraph&) const { return "SeifertOrGraph"; }
  } v;
  return std::visit(v, c);
}

// ---------------------------------------------------------------------------
// Catalog JSON: presentation fields plus "meridian", "longitude", "label",
// optional "torus_params": [a, b] and "cable_params":
// {"companion": [a, b], "p": p, "q": q}.

inline nlohmann::json to_json(const PeripheralizedKnotGroup& k) {
  nlohmann::json j = to_json(k.presentation());
  j["meridian"] = to_string(k.meridian());
  j["longitude"] = to_string(k.longitude());
  j["label"] = k.label();
  if (k.torus_params()) j["torus_params"] = {k.torus_params()->a, k.torus_params()->b};
  if (k.cable_params()) {
    const auto& c = *k.cable_params();
    j["cable_params"] = {{"companion", {c.companion.a, c.companion.b}}, {"p", c.p}, {"q", c.q}};
  }
  return j;
}

inline PeripheralizedKnotGroup knot_from_json(const nlohmann::json& j) {
  auto pres = presentation_from_json(j);
  std::optional<TorusParams> torus;
  if (j.contains("torus_params")) torus = TorusParams{j["torus_params"].at(0), j["torus_params"].at(1)};
  std::optional<CableParams> cable;
  if (j.contains("cable_params")) {
    const auto& c = j["cable_params"];
    cable = CableParams{{c.at("companion").at(0), c.at("companion").at(1)}, c.at("p"), c.at("q")};
  }
  return PeripheralizedKnotGroup(std::move(pres), parse_word(j.at("meridian").get<std::string>()),
                                 parse_word(j.at("longitude").get<std::string>()),
                                 j.value("label", std::string("knot")), torus, cable);
}

/// "torus:a,b", "trefoil", "figure8", or a path to a catalog JSON file.
inline PeripheralizedKnotGroup knot_from_spec(std::string_view spec) {
  if (spec == "figure8" || spec == "figure-eight" || spec == "4_1") return figure_eight_group();
  if (spec == "trefoil") return torus_knot_group(2, 3);
  if (spec.starts_with("torus:")) {
    std::string body(spec.substr(6));
    auto comma = body.find(',');
    if (comma == std::string::npos) throw ParseError("torus spec must be torus:a,b");
    try {
      return torus_knot_group(std::stoll(body.substr(0, comma)), std::stoll(body.substr(comma + 1)));
    } catch (const std::invalid_argument&) {
      throw ParseError("torus spec must be torus:a,b");
    }
  }
  std::string path(spec.starts_with("file:") ? spec.substr(5) : spec);
  std::ifstream in(path);
  if (!in) throw ParseError("unknown knot '" + std::string(spec) + "'");
  return knot_from_json(nlohmann::json::parse(in));
}

}  // namespace knotfill
