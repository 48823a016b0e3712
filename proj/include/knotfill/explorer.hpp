#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include "knotfill/homsearch.hpp"
#include "knotfill/knots.hpp"

namespace knotfill {

enum class VerdictStatus { Trivialized, NotTrivialized, Unknown };

inline std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::Trivialized: return "Trivialized";
    case VerdictStatus::NotTrivialized: return "NotTrivialized";
    case VerdictStatus::Unknown: return "Unknown";
  }
  return {};
}

// g in [G, G] of T(a, b) and |a b q - p| = 1, so K(p/q) has cyclic pi_1.
struct CyclicSlopeRule {
  TorusParams torus;
  Slope slope;
};

// c^-1 R^sign c for relator R of the filling presentation.
struct RelatorFactor {
  Word conjugator;
  std::size_t relator;
  int sign;
};

// g = f_1 f_2 ... f_k in the free group on the knot's generators.
struct NormalClosureWitness {
  std::vector<RelatorFactor> factors;
};

struct BudgetNote {
  std::uint64_t visited = 0;
  std::uint64_t budget = 0;
  bool exhausted = false;
};

using Evidence = std::variant<CyclicSlopeRule, NormalClosureWitness, AbelianizationEvidence, HomCertificate, BudgetNote>;

struct Verdict {
  VerdictStatus status;
  Evidence evidence;
};

struct ConstraintResult {
  std::string rule;
  bool passed = true;
  std::vector<std::pair<Slope, Slope>> offending;
};

struct SlopeSetReport {
  std::string knot;
  Word element;
  std::map<Slope, Verdict> verdicts;  // scan order (q, p)
  std::vector<ConstraintResult> constraints;

  VerdictStatus status(const Slope& r) const {
    auto it = verdicts.find(r);
    if (it == verdicts.end()) throw UnknownSlopeInRule(to_string(r));
    return it->second.status;
  }
};

struct ScanOptions {
  std::vector<TargetSpec> ladder = default_target_ladder();
  std::uint64_t budget = kDefaultBudget;  // per slope
  std::size_t witness_factors = 3;
  std::size_t conjugator_length = 4;
  unsigned threads = 1;
};

namespace detail {

inline bool in_commutator_subgroup(const FinitePresentation& p, const Word& g) {
  for (const auto& s : p.generators())
    if (exponent_sum(g, s) != 0) return false;
  return true;
}

inline Word expand_factor(const FinitePresentation& p, const RelatorFactor& f) {
  return f.conjugator.inverse() * p.relators().at(f.relator).pow(f.sign) * f.conjugator;
}

// Reduced words of length <= max_len over the generators, by length and
// then letter order (generator order, positive before negative).
inline std::vector<Word> conjugator_words(const FinitePresentation& p, std::size_t max_len) {
  std::vector<Letter> alphabet;
  for (const auto& s : p.generators()) {
    alphabet.push_back({s, 1});
    alphabet.push_back({s, -1});
  }
  std::vector<std::vector<Letter>> level{{}};
  std::vector<Word> out{Word()};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : level)
      for (const auto& a : alphabet) {
        if (!w.empty() && w.back() == a.inverse()) continue;
        auto v = w;
        v.push_back(a);
        out.push_back(Word::from_letters(v));
        next.push_back(std::move(v));
      }
    level = std::move(next);
  }
  return out;
}

class WitnessSearch {
 public:
  WitnessSearch(const FinitePresentation& p, std::size_t max_factors, std::size_t conj_len)
      : p_(p), max_factors_(max_factors) {
    const auto conjugators = conjugator_words(p, conj_len);
    for (const auto& c : conjugators)
      for (std::size_t j = 0; j < p.relators().size(); ++j)
        for (int sign : {1, -1}) {
          RelatorFactor f{c, j, sign};
          Word w = expand_factor(p, f);
          if (index_.contains(w)) continue;
          index_.emplace(w, factors_.size());
          factors_.push_back(std::move(f));
          inverses_.push_back(w.inverse());
          abs_.push_back(abelian(w));
        }
    middle_abs_.insert(abs_.begin(), abs_.end());
  }

  std::optional<NormalClosureWitness> find(const Word& g) const {
    if (g.empty()) return NormalClosureWitness{};
    const auto target = abelian(g);
    for (std::size_t k = 1; k <= max_factors_; ++k) {
      const std::size_t a = k / 2, b = k - 1 - a;
      std::vector<std::size_t> outer(k - 1, 0);
      std::optional<NormalClosureWitness> hit;
      enumerate(outer, 0, [&](const std::vector<std::size_t>& t) {
        std::vector<std::int64_t> need = target;
        for (auto i : t) subtract(need, abs_[i]);
        if (!middle_abs_.contains(need)) return false;
        Word m = g;
        for (std::size_t i = 0; i < a; ++i) m = inverses_[t[i]] * m;
        for (std::size_t i = 0; i < b; ++i) m = m * inverses_[t[a + b - 1 - i]];
        auto it = index_.find(m);
        if (it == index_.end()) return false;
        NormalClosureWitness w;
        for (std::size_t i = 0; i < a; ++i) w.factors.push_back(factors_[t[i]]);
        w.factors.push_back(factors_[it->second]);
        for (std::size_t i = a; i < a + b; ++i) w.factors.push_back(factors_[t[i]]);
        hit = std::move(w);
        return true;
      });
      if (hit) return hit;
    }
    return std::nullopt;
  }

 private:
  std::vector<std::int64_t> abelian(const Word& w) const {
    std::vector<std::int64_t> v(p_.generators().size(), 0);
    for (const auto& s : w.syllables()) v[p_.generator_index(s.gen)] += s.exp;
    return v;
  }
  static void subtract(std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  }

  template <class F>
  bool enumerate(std::vector<std::size_t>& t, std::size_t pos, F&& f) const {
    if (pos == t.size()) return f(t);
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      t[pos] = i;
      if (enumerate(t, pos + 1, f)) return true;
    }
    return false;
  }

  const FinitePresentation& p_;
  std::size_t max_factors_;
  std::vector<RelatorFactor> factors_;
  std::vector<Word> inverses_;
  std::vector<std::vector<std::int64_t>> abs_;
  std::unordered_map<Word, std::size_t> index_;
  std::set<std::vector<std::int64_t>> middle_abs_;
};

}  // namespace detail

/// Product-of-conjugates witness for g = 1 in the presented group, with at
/// most `max_factors` factors and conjugators of length <= conj_len.
inline std::optional<NormalClosureWitness> find_normal_closure_witness(const FinitePresentation& p, const Word& g,
                                                                       std::size_t max_factors = 3,
                                                                       std::size_t conj_len = 4) {
  p.check_word(g);
  return detail::WitnessSearch(p, max_factors, conj_len).find(g);
}

inline bool verify_witness(const FinitePresentation& p, const Word& g, const NormalClosureWitness& w) {
  Word acc;
  for (const auto& f : w.factors) {
    if (f.relator >= p.relators().size() || (f.sign != 1 && f.sign != -1)) return false;
    acc *= detail::expand_factor(p, f);
  }
  return acc == g;
}

/// Verdict for one finite slope. Rules, in order: cyclic-slope rule,
/// abelianization, normal-closure witness, finite-quotient certificate.
inline Verdict decide_slope(const PeripheralizedKnotGroup& k, const Word& g, const Slope& r,
                            const ScanOptions& opts = {}) {
  if (r.is_infinite()) throw InfiniteSlope();
  if (k.torus_params() && detail::in_commutator_subgroup(k.presentation(), g) &&
      is_cyclic_torus_filling(k.torus_params()->a, k.torus_params()->b, r))
    return {VerdictStatus::Trivialized, CyclicSlopeRule{*k.torus_params(), r}};
  const auto filling = build_filling(k, r);
  if (auto e = abelianization_certificate(filling, g)) return {VerdictStatus::NotTrivialized, std::move(*e)};
  if (auto w = find_normal_closure_witness(filling, g, opts.witness_factors, opts.conjugator_length))
    return {VerdictStatus::Trivialized, std::move(*w)};
  SearchBudget budget{opts.budget};
  try {
    if (auto c = certify_nontrivial(filling, g, opts.ladder, budget))
      return {VerdictStatus::NotTrivialized, std::move(*c)};
  } catch (const BudgetExceeded& e) {
    return {VerdictStatus::Unknown, BudgetNote{e.visited(), opts.budget, true}};
  }
  return {VerdictStatus::Unknown, BudgetNote{budget.visited, opts.budget, false}};
}

/// Rechecks the evidence of a verdict from scratch.
inline bool verify_verdict(const PeripheralizedKnotGroup& k, const Word& g, const Slope& r, const Verdict& v) {
  const auto filling = build_filling(k, r);
  struct {
    const PeripheralizedKnotGroup& k;
    const Word& g;
    const Slope& r;
    const FinitePresentation& filling;
    VerdictStatus status;
    bool operator()(const CyclicSlopeRule& c) const {
      return status == VerdictStatus::Trivialized && k.torus_params() == c.torus && c.slope == r &&
             detail::in_commutator_subgroup(k.presentation(), g) && is_cyclic_torus_filling(c.torus.a, c.torus.b, r);
    }
    bool operator()(const NormalClosureWitness& w) const {
      return status == VerdictStatus::Trivialized && verify_witness(filling, g, w);
    }
    bool operator()(const AbelianizationEvidence& e) const {
      return status == VerdictStatus::NotTrivialized && e.witness == g && verify_abelianization_evidence(filling, e);
    }
    bool operator()(const HomCertificate& c) const {
      return status == VerdictStatus::NotTrivialized && c.witness == g && verify_certificate(filling, c);
    }
    bool operator()(const BudgetNote&) const { return status == VerdictStatus::Unknown; }
  } check{k, g, r, filling, v.status};
  return std::visit(check, v.evidence);
}

/// Per-slope verdicts for S_K(g). Slopes are independent; with threads > 1
/// they are decided in parallel and collected in slope order.
inline SlopeSetReport scan(const PeripheralizedKnotGroup& k, const Word& g, const std::vector<Slope>& slopes,
                           const ScanOptions& opts = {}) {
  k.presentation().check_word(g);
  std::vector<Slope> todo;
  for (const auto& r : slopes) {
    if (r.is_infinite()) throw InfiniteSlope();
    todo.push_back(r);
  }
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());

  std::vector<std::optional<Verdict>> out(todo.size());
  std::vector<std::exception_ptr> errors(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < todo.size(); i = next++) {
      try {
        out[i] = decide_slope(k, g, todo[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(todo.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  }
  SlopeSetReport report{k.label(), g, {}, {}};
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    report.verdicts.emplace(todo[i], std::move(*out[i]));
  }
  return report;
}

/// Rescans only the Unknown slopes, e.g. with a larger ladder or budget.
inline SlopeSetReport recheck(const PeripheralizedKnotGroup& k, SlopeSetReport report, const ScanOptions& opts) {
  std::vector<Slope> unknown;
  for (const auto& [r, v] : report.verdicts)
    if (v.status == VerdictStatus::Unknown) unknown.push_back(r);
  if (unknown.empty()) return report;
  auto fresh = scan(k, report.element, unknown, opts);
  for (auto& [r, v] : fresh.verdicts) report.verdicts.at(r) = std::move(v);
  return report;
}

// ---------------------------------------------------------------------------
// Normal-closure inclusion facts.

// <<sub>> is contained in <<super>>.
struct InclusionFact {
  std::string knot;
  Slope sub;
  Slope super;
};

// <<s_0>> contains <<s_1>> contains <<s_2>> ...
struct ChainFact {
  std::string knot;
  std::vector<Slope> slopes;
};

// Torus knot fiber slope pq: <<pq>> meets <<r>> trivially unless r = pq or
// r is a finite surgery slope.
struct FiberSlopeFact {
  std::string knot;
  Slope fiber;
  std::vector<Slope> finite_slopes;
};

using ConstraintFact = std::variant<InclusionFact, ChainFact, FiberSlopeFact>;

inline const std::string& fact_knot(const ConstraintFact& f) {
  return std::visit([](const auto& x) -> const std::string& { return x.knot; }, f);
}

inline std::string describe(const ConstraintFact& f) {
  struct {
    std::string operator()(const InclusionFact& x) const {
      return x.knot + ": <<" + to_string(x.sub) + ">> in <<" + to_string(x.super) + ">>";
    }
    std::string operator()(const ChainFact& x) const {
      std::string s = x.knot + ": chain";
      for (std::size_t i = 0; i < x.slopes.size(); ++i) s += (i ? " > <<" : " <<") + to_string(x.slopes[i]) + ">>";
      return s;
    }
    std::string operator()(const FiberSlopeFact& x) const {
      return x.knot + ": fiber slope " + to_string(x.fiber) + " (" + std::to_string(x.finite_slopes.size()) +
             " finite slopes listed)";
    }
  } v;
  return std::visit(v, f);
}

/// Slopes a fact needs to find in a report.
inline std::vector<Slope> required_slopes(const ConstraintFact& f) {
  struct {
    std::vector<Slope> operator()(const InclusionFact& x) const { return {x.sub, x.super}; }
    std::vector<Slope> operator()(const ChainFact& x) const { return x.slopes; }
    std::vector<Slope> operator()(const FiberSlopeFact& x) const { return {x.fiber}; }
  } v;
  return std::visit(v, f);
}

inline ConstraintResult check_fact(const SlopeSetReport& report, const ConstraintFact& fact) {
  using enum VerdictStatus;
  ConstraintResult res{describe(fact), true, {}};
  for (const auto& s : required_slopes(fact)) report.status(s);
  auto flag = [&](const Slope& a, const Slope& b) {
    res.passed = false;
    res.offending.emplace_back(a, b);
  };
  if (const auto* inc = std::get_if<InclusionFact>(&fact)) {
    if (report.status(inc->sub) == Trivialized && report.status(inc->super) == NotTrivialized)
      flag(inc->sub, inc->super);
  } else if (const auto* chain = std::get_if<ChainFact>(&fact)) {
    for (std::size_t j = 0; j < chain->slopes.size(); ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (report.status(chain->slopes[j]) == Trivialized && report.status(chain->slopes[i]) == NotTrivialized)
          flag(chain->slopes[j], chain->slopes[i]);
  } else if (const auto* fib = std::get_if<FiberSlopeFact>(&fact)) {
    // Only meaningful for g != 1 in G(K), which any NotTrivialized verdict proves.
    bool nontrivial = std::any_of(report.verdicts.begin(), report.verdicts.end(),
                                  [](const auto& kv) { return kv.second.status == NotTrivialized; });
    if (nontrivial && report.status(fib->fiber) == Trivialized)
      for (const auto& [r, v] : report.verdicts) {
        if (r == fib->fiber || v.status != Trivialized) continue;
        if (std::find(fib->finite_slopes.begin(), fib->finite_slopes.end(), r) != fib->finite_slopes.end()) continue;
        flag(fib->fiber, r);
      }
  }
  return res;
}

/// For g and h = g^{g^alpha} g^-2 the trivializing sets agree, so no slope
/// may be Trivialized in one report and NotTrivialized in the other.
inline ConstraintResult check_same_trivializing_set(const SlopeSetReport& g, const SlopeSetReport& h) {
  using enum VerdictStatus;
  ConstraintResult res{"S_K(" + to_string(g.element) + ") = S_K(" + to_string(h.element) + ")", true, {}};
  for (const auto& [r, v] : g.verdicts) {
    auto it = h.verdicts.find(r);
    if (it == h.verdicts.end()) continue;
    auto a = v.status, b = it->second.status;
    if ((a == Trivialized && b == NotTrivialized) || (a == NotTrivialized && b == Trivialized)) {
      res.passed = false;
      res.offending.emplace_back(r, r);
    }
  }
  return res;
}

/// Checks every rule (each must reference scanned slopes) and, for reports
/// of iterates h of g, theorem consistency; results are also appended to
/// report.constraints.
inline std::vector<ConstraintResult> check_constraints(SlopeSetReport& report,
                                                       const std::vector<ConstraintFact>& rules,
                                                       std::span<const SlopeSetReport> iterates = {}) {
  std::vector<ConstraintResult> out;
  for (const auto& f : rules) out.push_back(check_fact(report, f));
  for (const auto& h : iterates) out.push_back(check_same_trivializing_set(report, h));
  report.constraints.insert(report.constraints.end(), out.begin(), out.end());
  return out;
}

inline bool all_passed(const std::vector<ConstraintResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

/// Facts about the report's knot whose slopes were all scanned.
inline std::vector<ConstraintFact> applicable_facts(const std::vector<ConstraintFact>& facts,
                                                    const SlopeSetReport& report) {
  std::vector<ConstraintFact> out;
  for (const auto& f : facts) {
    if (fact_knot(f) != report.knot) continue;
    auto need = required_slopes(f);
    if (std::all_of(need.begin(), need.end(), [&](const Slope& s) { return report.verdicts.contains(s); }))
      out.push_back(f);
  }
  return out;
}

// Fixtures: {"facts": [{"knot": ..., "kind": "inclusion", "sub": "18/5",
// "super": "18"}, {"kind": "chain", "slopes": [...]}, {"kind": "fiber",
// "fiber": "6", "finite_slopes": [...]}]}.
inline std::vector<ConstraintFact> facts_from_json(const nlohmann::json& j) {
  std::vector<ConstraintFact> out;
  auto slope = [](const nlohmann::json& s) { return parse_slope(s.get<std::string>()); };
  for (const auto& f : j.at("facts")) {
    std::string knot = f.at("knot").get<std::string>();
    std::string kind = f.at("kind").get<std::string>();
    if (kind == "inclusion") {
      out.push_back(InclusionFact{knot, slope(f.at("sub")), slope(f.at("super"))});
    } else if (kind == "chain") {
      ChainFact c{knot, {}};
      for (const auto& s : f.at("slopes")) c.slopes.push_back(slope(s));
      out.push_back(std::move(c));
    } else if (kind == "fiber") {
      FiberSlopeFact c{knot, slope(f.at("fiber")), {}};
      for (const auto& s : f.at("finite_slopes")) c.finite_slopes.push_back(slope(s));
      out.push_back(std::move(c));
    } else {
      throw ParseError("unknown fact kind '" + kind + "'");
    }
  }
  return out;
}

inline std::vector<ConstraintFact> load_facts(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open facts file '" + path + "'");
  return facts_from_json(nlohmann::json::parse(in));
}

#ifdef KNOTFILL_DATA_DIR
inline std::string default_facts_path() { return std::string(KNOTFILL_DATA_DIR) + "/inclusions.json"; }
#endif

// ---------------------------------------------------------------------------
// JSON.

inline nlohmann::json to_json(const FinitePresentation& filling, const Evidence& e) {
  struct {
    const FinitePresentation& filling;
    nlohmann::json operator()(const CyclicSlopeRule& c) const {
      return {{"kind", "CyclicSlopeRule"},
              {"torus", {c.torus.a, c.torus.b}},
              {"slope", to_string(c.slope)},
              {"lens_order", c.slope.p() < 0 ? -c.slope.p() : c.slope.p()}};
    }
    nlohmann::json operator()(const NormalClosureWitness& w) const {
      nlohmann::json fs = nlohmann::json::array();
      for (const auto& f : w.factors)
        fs.push_back({{"conjugator", to_string(f.conjugator)},
                      {"relator", to_string(filling.relators().at(f.relator))},
                      {"relator_index", f.relator},
                      {"sign", f.sign}});
      return {{"kind", "NormalClosureWitness"}, {"factors", fs}};
    }
    nlohmann::json operator()(const AbelianizationEvidence& a) const {
      auto j = to_json(a);
      j["kind"] = "AbelianizationEvidence";
      return j;
    }
    nlohmann::json operator()(const HomCertificate& c) const {
      auto j = to_json(c);
      j["kind"] = "HomCertificate";
      return j;
    }
    nlohmann::json operator()(const BudgetNote& b) const {
      return {{"kind", "BudgetNote"}, {"visited", b.visited}, {"budget", b.budget}, {"exhausted", b.exhausted}};
    }
  } v{filling};
  return std::visit(v, e);
}

inline nlohmann::json to_json(const ConstraintResult& c) {
  nlohmann::json off = nlohmann::json::array();
  for (const auto& [a, b] : c.offending) off.push_back({to_string(a), to_string(b)});
  return {{"rule", c.rule}, {"passed", c.passed}, {"offending", off}};
}

inline nlohmann::json to_json(const PeripheralizedKnotGroup& k, const SlopeSetReport& r) {
  nlohmann::json verdicts = nlohmann::json::array();
  for (const auto& [s, v] : r.verdicts)
    verdicts.push_back(
        {{"slope", to_string(s)}, {"status", to_string(v.status)}, {"evidence", to_json(build_filling(k, s), v.evidence)}});
  nlohmann::json cons = nlohmann::json::array();
  for (const auto& c : r.constraints) cons.push_back(to_json(c));
  return {{"knot", r.knot}, {"element", to_string(r.element)}, {"verdicts", verdicts}, {"constraints", cons}};
}

}  // namespace knotfill
