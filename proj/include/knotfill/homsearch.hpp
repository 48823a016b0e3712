#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "knotfill/constructions.hpp"
#include "knotfill/finite_groups.hpp"
#include "knotfill/presentation.hpp"

namespace knotfill {

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

/// Generator images as element indices, in presentation generator order.
using HomAssignment = std::vector<std::size_t>;

/// Shared budget across one logical search; the unit is one partial
/// assignment (one generator given one candidate image).
struct SearchBudget {
  std::uint64_t limit = kDefaultBudget;
  std::uint64_t visited = 0;
  std::uint64_t found = 0;

  void tick() {
    if (++visited > limit) throw BudgetExceeded(visited - 1, found);
  }
};

namespace detail {

struct CompiledWord {
  std::vector<std::pair<std::size_t, Exponent>> syllables;
  std::size_t max_generator = 0;
};

inline CompiledWord compile_word(const FinitePresentation& p, const Word& w) {
  CompiledWord c;
  for (const auto& s : w.syllables()) {
    std::size_t g = p.generator_index(s.gen);
    c.syllables.emplace_back(g, s.exp);
    c.max_generator = std::max(c.max_generator, g);
  }
  return c;
}

template <class G>
typename G::Element power(const G& group, typename G::Element x, Exponent e) {
  if (e < 0) {
    x = group.inverse(x);
    e = -e;
  }
  auto result = group.identity();
  while (e > 0) {
    if (e & 1) result = group.multiply(result, x);
    e >>= 1;
    if (e) x = group.multiply(x, x);
  }
  return result;
}

template <class G>
typename G::Element evaluate(const G& group, const CompiledWord& w, const std::vector<typename G::Element>& images) {
  auto acc = group.identity();
  for (const auto& [g, e] : w.syllables) acc = group.multiply(acc, power(group, images[g], e));
  return acc;
}

// Depth-first search over generator images in index order. A relator is
// checked as soon as its highest generator is assigned.
template <class G>
class Backtracker {
 public:
  using Element = typename G::Element;

  Backtracker(const G& group, const FinitePresentation& p, SearchBudget& budget)
      : group_(group), budget_(budget), n_(p.generators().size()), by_depth_(n_) {
    if (n_ == 0) throw Error("presentation has no generators");
    for (const auto& r : p.relators()) {
      if (r.empty()) continue;
      auto c = compile_word(p, r);
      by_depth_[c.max_generator].push_back(std::move(c));
    }
  }

  // on_hom(const HomAssignment&, const std::vector<Element>&) returns true to stop.
  template <class OnHom>
  void run(const std::vector<std::size_t>* first_candidates, OnHom&& on_hom) {
    assignment_.assign(n_, 0);
    images_.assign(n_, group_.identity());
    stop_ = false;
    descend(0, first_candidates, on_hom);
  }

 private:
  template <class OnHom>
  void descend(std::size_t depth, const std::vector<std::size_t>* candidates, OnHom& on_hom) {
    const std::size_t count = candidates ? candidates->size() : group_.order();
    for (std::size_t k = 0; k < count && !stop_; ++k) {
      const std::size_t idx = candidates ? (*candidates)[k] : k;
      budget_.tick();
      assignment_[depth] = idx;
      images_[depth] = group_.element(idx);
      bool ok = true;
      for (const auto& r : by_depth_[depth])
        if (!group_.is_identity(evaluate(group_, r, images_))) {
          ok = false;
          break;
        }
      if (!ok) continue;
      if (depth + 1 == n_) {
        ++budget_.found;
        if (on_hom(static_cast<const HomAssignment&>(assignment_), static_cast<const std::vector<Element>&>(images_)))
          stop_ = true;
      } else {
        descend(depth + 1, nullptr, on_hom);
      }
    }
  }

  const G& group_;
  SearchBudget& budget_;
  std::size_t n_;
  std::vector<std::vector<CompiledWord>> by_depth_;
  HomAssignment assignment_;
  std::vector<Element> images_;
  bool stop_ = false;
};

// Least index tuple among all conjugates x -> g^-1 x g of the assignment.
template <class G>
bool is_conjugacy_minimal(const G& group, const HomAssignment& a) {
  for (std::size_t gi = 0; gi < group.order(); ++gi) {
    const auto& g = group.element(gi);
    const auto gin = group.inverse(g);
    for (std::size_t k = 0; k < a.size(); ++k) {
      auto c = group.index_of(group.multiply(group.multiply(gin, group.element(a[k])), g));
      if (c < a[k]) return false;
      if (c > a[k]) break;
    }
  }
  return true;
}

}  // namespace detail

struct EnumerateOptions {
  std::optional<std::uint64_t> limit;
  std::uint64_t budget = kDefaultBudget;
  bool up_to_conjugacy = false;
};

/// All homomorphisms (or the first `limit`) in lexicographic order of the
/// image index tuples.
template <class G>
std::vector<HomAssignment> enumerate_homs(const FinitePresentation& p, const G& group,
                                          const EnumerateOptions& opts = {}) {
  SearchBudget budget{opts.budget};
  std::vector<HomAssignment> out;
  if (opts.limit && *opts.limit == 0) return out;
  detail::Backtracker<G> bt(group, p, budget);
  bt.run(nullptr, [&](const HomAssignment& a, const auto&) {
    if (opts.up_to_conjugacy && !detail::is_conjugacy_minimal(group, a)) return false;
    out.push_back(a);
    return opts.limit && out.size() >= *opts.limit;
  });
  return out;
}

inline std::vector<HomAssignment> enumerate_homs(const FinitePresentation& p, const TargetSpec& target,
                                                 const EnumerateOptions& opts = {}) {
  return std::visit([&](const auto& g) { return enumerate_homs(p, g, opts); }, group_for(target));
}

inline std::size_t count_homs(const FinitePresentation& p, const TargetSpec& target,
                              std::uint64_t budget = kDefaultBudget) {
  return enumerate_homs(p, target, EnumerateOptions{std::nullopt, budget, false}).size();
}

inline std::string format_element(const TargetSpec& target, std::size_t index) {
  return std::visit([&](const auto& g) { return g.format(g.element(index)); }, group_for(target));
}

// ---------------------------------------------------------------------------
// Certificates.

struct HomCertificate {
  TargetSpec target;
  std::vector<std::pair<Symbol, std::size_t>> images;  // presentation order
  Word witness;
  std::size_t witness_image;

  friend bool operator==(const HomCertificate&, const HomCertificate&) = default;
};

/// Independent recheck: every relator maps to the identity and the witness
/// maps to witness_image, which is not the identity.
inline bool verify_certificate(const FinitePresentation& p, const HomCertificate& cert) {
  return std::visit(
      [&](const auto& group) {
        std::map<Symbol, std::size_t> img(cert.images.begin(), cert.images.end());
        if (img.size() != p.generators().size()) return false;
        for (const auto& [s, i] : img)
          if (!p.has_generator(s) || i >= group.order()) return false;
        auto eval = [&](const Word& w) -> std::optional<std::size_t> {
          auto acc = group.identity();
          for (const auto& letter : w.letters()) {
            auto it = img.find(letter.gen);
            if (it == img.end()) return std::nullopt;
            auto x = group.element(it->second);
            acc = group.multiply(acc, letter.sign > 0 ? x : group.inverse(x));
          }
          return group.index_of(acc);
        };
        const auto id = group.index_of(group.identity());
        for (const auto& r : p.relators())
          if (eval(r) != id) return false;
        auto w = eval(cert.witness);
        return w && *w == cert.witness_image && *w != id;
      },
      group_for(cert.target));
}

namespace detail {

template <class G>
std::optional<HomCertificate> certify_in(const FinitePresentation& p, const Word& w, const G& group,
                                         SearchBudget& budget) {
  // Conjugating a certificate gives a certificate, and the first generator's
  // image in the lexicographically first one is always a class minimum.
  const auto cw = compile_word(p, w);
  std::optional<HomCertificate> cert;
  Backtracker<G> bt(group, p, budget);
  bt.run(&group.class_minima(), [&](const HomAssignment& a, const std::vector<typename G::Element>& images) {
    auto value = evaluate(group, cw, images);
    if (group.is_identity(value)) return false;
    HomCertificate c{group.spec(), {}, w, group.index_of(value)};
    for (std::size_t k = 0; k < a.size(); ++k) c.images.emplace_back(p.generators()[k], a[k]);
    cert = std::move(c);
    return true;
  });
  return cert;
}

}  // namespace detail

/// First homomorphism, over the targets in order, under which w survives.
/// Absence means "unknown", never "trivial".
inline std::optional<HomCertificate> certify_nontrivial(const FinitePresentation& p, const Word& w,
                                                        const std::vector<TargetSpec>& targets,
                                                        SearchBudget& budget) {
  p.check_word(w);
  if (w.empty()) return std::nullopt;
  for (const auto& t : targets) {
    auto cert = std::visit([&](const auto& g) { return detail::certify_in(p, w, g, budget); }, group_for(t));
    if (cert) return cert;
  }
  return std::nullopt;
}

inline std::optional<HomCertificate> certify_nontrivial(const FinitePresentation& p, const Word& w,
                                                        const std::vector<TargetSpec>& targets,
                                                        std::uint64_t budget = kDefaultBudget) {
  SearchBudget b{budget};
  return certify_nontrivial(p, w, targets, b);
}

inline nlohmann::json to_json(const HomCertificate& c) {
  nlohmann::json images = nlohmann::json::object();
  for (const auto& [s, i] : c.images) images[s.name()] = format_element(c.target, i);
  return {{"target", to_string(c.target)},
          {"action", "right"},
          {"images", images},
          {"witness", to_string(c.witness)},
          {"witness_image", format_element(c.target, c.witness_image)}};
}

inline HomCertificate certificate_from_json(const nlohmann::json& j) {
  HomCertificate c{parse_target(j.at("target").get<std::string>()), {}, parse_word(j.at("witness").get<std::string>()),
                   0};
  std::visit(
      [&](const auto& g) {
        for (const auto& [name, text] : j.at("images").items())
          c.images.emplace_back(Symbol(name), g.index_of(g.parse(text.template get<std::string>())));
        c.witness_image = g.index_of(g.parse(j.at("witness_image").get<std::string>()));
      },
      group_for(c.target));
  return c;
}

// ---------------------------------------------------------------------------
// Abelianization evidence.

struct AbelianizationEvidence {
  AbelianInvariants group;
  AbelianElement image;
  Word witness;
};

inline std::optional<AbelianizationEvidence> abelianization_certificate(const FinitePresentation& p, const Word& w) {
  AbelianizationMap ab(p);
  auto img = ab.image(w);
  if (img.is_zero()) return std::nullopt;
  return AbelianizationEvidence{ab.invariants(), std::move(img), w};
}

inline bool verify_abelianization_evidence(const FinitePresentation& p, const AbelianizationEvidence& e) {
  AbelianizationMap ab(p);
  auto img = ab.image(e.witness);
  return ab.invariants() == e.group && img == e.image && !img.is_zero();
}

inline nlohmann::json to_json(const AbelianizationEvidence& e) {
  return {{"group", to_string(e.group)}, {"image", to_string(e.image)}, {"witness", to_string(e.witness)}};
}

// ---------------------------------------------------------------------------
// Kill test for G_w = <a1, a2 | v^{v^u} v^-2>.

struct KillTestTarget {
  TargetSpec target;
  std::uint64_t homs_checked = 0;
  std::vector<HomAssignment> violations;
};

struct KillTestReport {
  Word u, v, w;
  std::vector<KillTestTarget> targets;

  std::uint64_t homs_checked() const {
    std::uint64_t n = 0;
    for (const auto& t : targets) n += t.homs_checked;
    return n;
  }
  std::size_t violations() const {
    std::size_t n = 0;
    for (const auto& t : targets) n += t.violations.size();
    return n;
  }
};

inline KillTestReport kill_test(const Word& u, const Word& v, const std::vector<TargetSpec>& targets,
                                std::uint64_t budget = kDefaultBudget) {
  Word w = bmt_word(u, v);
  FinitePresentation gw({Symbol("a1"), Symbol("a2")}, {w});
  gw.check_word(u);
  gw.check_word(v);
  KillTestReport report{u, v, w, {}};
  SearchBudget b{budget};
  const auto cv = detail::compile_word(gw, v);
  for (const auto& t : targets) {
    KillTestTarget row{t, 0, {}};
    std::visit(
        [&](const auto& group) {
          detail::Backtracker bt(group, gw, b);
          bt.run(nullptr, [&](const HomAssignment& a, const auto& images) {
            ++row.homs_checked;
            if (!group.is_identity(detail::evaluate(group, cv, images))) row.violations.push_back(a);
            return false;
          });
        },
        group_for(t));
    report.targets.push_back(std::move(row));
  }
  return report;
}

}  // namespace knotfill
