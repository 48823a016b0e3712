#pragma once

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "knotfill/smith.hpp"
#include "knotfill/word.hpp"

namespace knotfill {

/// Generators plus relators; a value object. Every relator is reduced and
/// uses only declared generators.
class FinitePresentation {
 public:
  FinitePresentation() = default;

  FinitePresentation(std::vector<Symbol> generators, std::vector<Word> relators)
      : generators_(std::move(generators)) {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (generators_[i] == generators_[j]) throw DuplicateGenerator(generators_[i].name());
    for (auto& r : relators) add_relator_in_place(std::move(r));
  }

  const std::vector<Symbol>& generators() const noexcept { return generators_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }

  bool has_generator(Symbol s) const {
    return std::find(generators_.begin(), generators_.end(), s) != generators_.end();
  }

  std::size_t generator_index(Symbol s) const {
    auto it = std::find(generators_.begin(), generators_.end(), s);
    if (it == generators_.end()) throw UnknownGenerator(s.name());
    return static_cast<std::size_t>(it - generators_.begin());
  }

  void check_word(const Word& w) const {
    for (const auto& s : w.syllables())
      if (!has_generator(s.gen)) throw UnknownGenerator(s.gen.name());
  }

  friend bool operator==(const FinitePresentation&, const FinitePresentation&) = default;

 private:
  friend FinitePresentation add_relators(const FinitePresentation&, std::span<const Word>);

  void add_relator_in_place(Word r) {
    check_word(r);
    relators_.push_back(std::move(r));
  }

  std::vector<Symbol> generators_;
  std::vector<Word> relators_;
};

/// Quotient by the normal closure of extra relators; the input is untouched.
inline FinitePresentation add_relators(const FinitePresentation& p, std::span<const Word> rs) {
  FinitePresentation out = p;
  for (const auto& r : rs) out.add_relator_in_place(r);
  return out;
}

inline FinitePresentation add_relator(const FinitePresentation& p, const Word& r) {
  return add_relators(p, std::span<const Word>(&r, 1));
}

// ---------------------------------------------------------------------------
// Abelianization.

struct AbelianInvariants {
  std::vector<BigInt> torsion;  // d_i >= 2, d_i | d_{i+1}
  std::size_t free_rank = 0;

  bool trivial() const { return torsion.empty() && free_rank == 0; }
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

/// Coordinates in Z_{d_1} + ... + Z_{d_k} + Z^r, torsion first.
struct AbelianElement {
  std::vector<BigInt> torsion;
  std::vector<BigInt> free;

  bool is_zero() const {
    return std::all_of(torsion.begin(), torsion.end(), [](const BigInt& v) { return v == 0; }) &&
           std::all_of(free.begin(), free.end(), [](const BigInt& v) { return v == 0; });
  }
  friend bool operator==(const AbelianElement&, const AbelianElement&) = default;
};

inline IntMatrix exponent_matrix(const FinitePresentation& p) {
  IntMatrix m(p.relators().size(), p.generators().size());
  for (std::size_t i = 0; i < p.relators().size(); ++i)
    for (const auto& s : p.relators()[i].syllables()) m(i, p.generator_index(s.gen)) += s.exp;
  return m;
}

/// H_1 of a presentation, with the change of basis needed to locate words.
class AbelianizationMap {
 public:
  explicit AbelianizationMap(const FinitePresentation& p) : presentation_(p) {
    snf_ = smith_normal_form(exponent_matrix(p));
    const std::size_t n = p.generators().size();
    for (std::size_t i = 0; i < n; ++i) {
      BigInt d = i < snf_.diagonal.size() ? snf_.diagonal[i] : BigInt(0);
      if (d == 1) continue;
      if (d == 0) {
        ++invariants_.free_rank;
        free_cols_.push_back(i);
      } else {
        invariants_.torsion.push_back(d);
        torsion_cols_.push_back(i);
      }
    }
  }

  const AbelianInvariants& invariants() const noexcept { return invariants_; }
  const SmithForm& smith() const noexcept { return snf_; }

  // A row vector e of exponent sums maps to e * col_ops, read modulo the
  // Smith diagonal.
  AbelianElement image(const Word& w) const {
    presentation_.check_word(w);
    const std::size_t n = presentation_.generators().size();
    std::vector<BigInt> e(n);
    for (const auto& s : w.syllables()) e[presentation_.generator_index(s.gen)] += s.exp;
    auto coord = [&](std::size_t col) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < n; ++i) acc += e[i] * snf_.col_ops(i, col);
      return acc;
    };
    AbelianElement out;
    for (std::size_t t = 0; t < torsion_cols_.size(); ++t) {
      BigInt d = invariants_.torsion[t];
      BigInt c = coord(torsion_cols_[t]) % d;
      if (c < 0) c += d;
      out.torsion.push_back(c);
    }
    for (std::size_t col : free_cols_) out.free.push_back(coord(col));
    return out;
  }

 private:
  FinitePresentation presentation_;
  SmithForm snf_;
  AbelianInvariants invariants_;
  std::vector<std::size_t> torsion_cols_;
  std::vector<std::size_t> free_cols_;
};

inline AbelianInvariants abelianization(const FinitePresentation& p) {
  return AbelianizationMap(p).invariants();
}

inline AbelianElement image_in_abelianization(const FinitePresentation& p, const Word& w) {
  return AbelianizationMap(p).image(w);
}

inline std::string to_string(const AbelianInvariants& inv) {
  if (inv.trivial()) return "0";
  std::string out;
  for (const auto& d : inv.torsion) {
    if (!out.empty()) out += " x ";
    out += "Z_" + d.str();
  }
  if (inv.free_rank > 0) {
    if (!out.empty()) out += " x ";
    out += inv.free_rank == 1 ? std::string("Z") : "Z^" + std::to_string(inv.free_rank);
  }
  return out;
}

inline std::string to_string(const AbelianElement& e) {
  std::string out = "(";
  bool first = true;
  for (const auto* part : {&e.torsion, &e.free})
    for (const auto& v : *part) {
      if (!first) out += ", ";
      out += v.str();
      first = false;
    }
  return out + ")";
}

// ---------------------------------------------------------------------------
// JSON: {"generators": ["x","y"], "relators": ["x^2 y^-3"]}

inline nlohmann::json to_json(const FinitePresentation& p) {
  nlohmann::json j;
  j["generators"] = nlohmann::json::array();
  for (const auto& g : p.generators()) j["generators"].push_back(g.name());
  j["relators"] = nlohmann::json::array();
  for (const auto& r : p.relators()) j["relators"].push_back(to_string(r));
  return j;
}

inline FinitePresentation presentation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("generators"))
    throw ParseError("presentation JSON needs a \"generators\" array");
  std::vector<Symbol> gens;
  for (const auto& g : j.at("generators")) gens.emplace_back(g.get<std::string>());
  std::vector<Word> rels;
  if (j.contains("relators"))
    for (const auto& r : j.at("relators")) rels.push_back(parse_word(r.get<std::string>()));
  return FinitePresentation(std::move(gens), std::move(rels));
}

}  // namespace knotfill
