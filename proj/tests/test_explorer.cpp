#include <gtest/gtest.h>

#include "knotfill/checks.hpp"
#include "knotfill/explorer.hpp"

using namespace knotfill;
using enum VerdictStatus;

namespace {

const Word kG = commutator(parse_word("x"), parse_word("y"));

ScanOptions quick(std::uint64_t budget = 2'000'000) {
  ScanOptions o;
  o.budget = budget;
  return o;
}

const std::vector<ConstraintFact>& facts() {
  static const auto f = load_facts(default_facts_path());
  return f;
}

template <class T>
const T& find_fact() {
  for (const auto& f : facts())
    if (const auto* x = std::get_if<T>(&f)) return *x;
  throw std::runtime_error("fixture missing");
}

FinitePresentation pres(std::vector<std::string> gens, std::vector<std::string> rels) {
  std::vector<Symbol> g;
  for (auto& s : gens) g.emplace_back(s);
  std::vector<Word> r;
  for (auto& s : rels) r.push_back(parse_word(s));
  return FinitePresentation(g, r);
}

}  // namespace

TEST(Witness, FindAndVerify) {
  auto p = pres({"x"}, {"x^3"});
  auto w = find_normal_closure_witness(p, parse_word("x^-6"));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->factors.size(), 2u);
  EXPECT_TRUE(verify_witness(p, parse_word("x^-6"), *w));
  EXPECT_FALSE(verify_witness(p, parse_word("x^-3"), *w));
  EXPECT_FALSE(find_normal_closure_witness(p, parse_word("x")).has_value());

  auto ab = pres({"x", "y"}, {"x y x^-1 y^-1"});
  auto g = parse_word("y x y^-1 x^-1");
  auto w2 = find_normal_closure_witness(ab, g);
  ASSERT_TRUE(w2.has_value());
  EXPECT_EQ(w2->factors.size(), 1u);
  EXPECT_TRUE(verify_witness(ab, g, *w2));
  // a conjugate needs a conjugator
  auto g3 = conjugate(parse_word("x y x^-1 y^-1"), parse_word("y^2 x"));
  auto w3 = find_normal_closure_witness(ab, g3);
  ASSERT_TRUE(w3.has_value());
  EXPECT_TRUE(verify_witness(ab, g3, *w3));

  auto tampered = *w3;
  tampered.factors[0].sign = -tampered.factors[0].sign;
  EXPECT_FALSE(verify_witness(ab, g3, tampered));
  tampered = *w3;
  tampered.factors[0].relator = 7;
  EXPECT_FALSE(verify_witness(ab, g3, tampered));
  EXPECT_THROW(find_normal_closure_witness(ab, parse_word("z")), UnknownGenerator);
}

TEST(Scan, CommutatorOnTrefoil) {
  const auto k = torus_knot_group(2, 3);
  auto report = scan(k, kG, {Slope(5, 1), Slope(7, 1), Slope(0, 1), Slope(6, 1), Slope(5, 1)}, quick());
  ASSERT_EQ(report.verdicts.size(), 4u);
  EXPECT_EQ(report.status(Slope(5, 1)), Trivialized);
  EXPECT_TRUE(std::holds_alternative<CyclicSlopeRule>(report.verdicts.at(Slope(5, 1)).evidence));
  EXPECT_EQ(report.status(Slope(7, 1)), Trivialized);
  EXPECT_EQ(report.status(Slope(0, 1)), NotTrivialized);
  EXPECT_EQ(report.status(Slope(6, 1)), NotTrivialized);
  EXPECT_TRUE(std::holds_alternative<HomCertificate>(report.verdicts.at(Slope(6, 1)).evidence));
  for (const auto& [r, v] : report.verdicts) EXPECT_TRUE(verify_verdict(k, kG, r, v)) << to_string(r);
  EXPECT_THROW(report.status(Slope(1, 1)), UnknownSlopeInRule);
  EXPECT_THROW(scan(k, kG, {Slope::infinity()}), InfiniteSlope);
  EXPECT_THROW(decide_slope(k, kG, Slope::infinity()), InfiniteSlope);
  EXPECT_THROW(scan(k, parse_word("z"), {Slope(1, 1)}), UnknownGenerator);

  // slope order (q, p) in the report
  std::vector<Slope> order;
  for (const auto& [r, v] : report.verdicts) order.push_back(r);
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
}

TEST(Scan, CyclicRuleSlopes) {
  const auto k = torus_knot_group(2, 3);
  std::vector<Slope> slopes;
  for (std::int64_t n = 1; n <= 5; ++n) {
    slopes.emplace_back(6 * n - 1, n);
    slopes.emplace_back(6 * n + 1, n);
  }
  auto report = scan(k, kG, slopes, quick());
  for (const auto& r : slopes) EXPECT_EQ(report.status(r), Trivialized) << to_string(r);
  // the rule needs g in the commutator subgroup
  auto mu_report = scan(k, k.meridian(), slopes, quick());
  for (const auto& r : slopes) EXPECT_EQ(mu_report.status(r), NotTrivialized) << to_string(r);
}

TEST(Scan, FigureEightVerdictsRecheck) {
  const auto f8 = figure_eight_group();
  const Word g = commutator(parse_word("mu"), parse_word("h"));
  auto report = scan(f8, g, enumerate_slopes(4, 1, false), quick());
  for (const auto& [r, v] : report.verdicts) EXPECT_TRUE(verify_verdict(f8, g, r, v)) << to_string(r);
}

TEST(Scan, MeridianNeverTrivialized) {
  for (const auto& k : {torus_knot_group(2, 3), figure_eight_group(), torus_knot_group(3, 5)}) {
    auto report = scan(k, k.meridian(), enumerate_slopes(6, 2, false), quick());
    for (const auto& [r, v] : report.verdicts) {
      EXPECT_NE(v.status, Trivialized) << k.label() << " " << to_string(r);
      EXPECT_TRUE(verify_verdict(k, k.meridian(), r, v));
      auto p = r.p() < 0 ? -r.p() : r.p();
      if (p != 1) {
        EXPECT_EQ(v.status, NotTrivialized) << k.label() << " " << to_string(r);
      }
    }
  }
}

TEST(Scan, SameTrivializingSet) {
  const auto k = torus_knot_group(2, 3);
  auto slopes = enumerate_slopes(8, 2, false);
  auto base = scan(k, kG, slopes, quick());
  std::vector<SlopeSetReport> iterates;
  for (const auto* a : {"x", "y", "x y^-1"})
    iterates.push_back(scan(k, self_conjugate_step(kG, parse_word(a)), slopes, quick()));
  auto results = check_constraints(base, {}, iterates);
  ASSERT_EQ(results.size(), 3u);
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.rule;
  EXPECT_EQ(base.constraints.size(), 3u);
  for (const auto& h : iterates) EXPECT_EQ(h.status(Slope(5, 1)), Trivialized);
}

TEST(Scan, MonotoneRefinement) {
  const auto k = torus_knot_group(2, 3);
  auto slopes = enumerate_slopes(6, 2, false);
  ScanOptions small = quick();
  small.ladder = {TargetSpec::symmetric(3)};
  small.witness_factors = 1;
  small.conjugator_length = 1;
  auto coarse = scan(k, kG, slopes, small);
  auto fine = scan(k, kG, slopes, quick());
  std::size_t coarse_unknown = 0, fine_unknown = 0;
  for (const auto& [r, v] : coarse.verdicts) {
    auto w = fine.verdicts.at(r).status;
    if (v.status != Unknown) {
      EXPECT_EQ(v.status, w) << to_string(r);
    }
    coarse_unknown += v.status == Unknown;
    fine_unknown += w == Unknown;
  }
  EXPECT_LE(fine_unknown, coarse_unknown);

  auto rechecked = recheck(k, coarse, quick());
  EXPECT_EQ(to_json(k, rechecked).dump(), to_json(k, fine).dump());
}

TEST(Scan, BudgetExhaustionIsUnknown) {
  const auto k = torus_knot_group(2, 3);
  auto v = decide_slope(k, kG, Slope(0, 1), quick(5));
  EXPECT_EQ(v.status, Unknown);
  const auto& note = std::get<BudgetNote>(v.evidence);
  EXPECT_TRUE(note.exhausted);
  EXPECT_EQ(note.budget, 5u);
  EXPECT_TRUE(verify_verdict(k, kG, Slope(0, 1), v));
}

TEST(Scan, ThreadsDoNotChangeResults) {
  const auto k = torus_knot_group(2, 3);
  auto slopes = enumerate_slopes(5, 2, false);
  auto one = quick(), three = quick();
  three.threads = 3;
  auto a = to_json(k, scan(k, kG, slopes, one)).dump();
  auto b = to_json(k, scan(k, kG, slopes, three)).dump();
  EXPECT_EQ(a, b);
  auto c = to_json(k, scan(k, kG, slopes, three)).dump();
  EXPECT_EQ(b, c);
}

TEST(Scan, JsonShape) {
  const auto k = torus_knot_group(2, 3);
  auto report = scan(k, kG, {Slope(5, 1), Slope(0, 1)}, quick());
  auto j = to_json(k, report);
  EXPECT_EQ(j["knot"], "T(2,3)");
  EXPECT_EQ(j["element"], "x y x^-1 y^-1");
  ASSERT_EQ(j["verdicts"].size(), 2u);
  EXPECT_EQ(j["verdicts"][0]["slope"], "0/1");
  EXPECT_EQ(j["verdicts"][1]["evidence"]["kind"], "CyclicSlopeRule");
  EXPECT_EQ(j["verdicts"][1]["evidence"]["lens_order"], 5);
  EXPECT_EQ(j["verdicts"][0]["evidence"]["kind"], "HomCertificate");
}

TEST(Constraints, PretzelInclusion) {
  const auto& inc = find_fact<InclusionFact>();
  EXPECT_EQ(inc.knot, "P(-2,3,7)");
  EXPECT_EQ(inc.sub, Slope(18, 5));
  EXPECT_EQ(inc.super, Slope(18, 1));
  auto bad = checks::handmade_report("P(-2,3,7)", {{Slope(18, 5), Trivialized}, {Slope(18, 1), NotTrivialized}});
  auto res = check_constraints(bad, {inc});
  ASSERT_EQ(res.size(), 1u);
  EXPECT_FALSE(res[0].passed);
  EXPECT_EQ(res[0].offending, (std::vector<std::pair<Slope, Slope>>{{Slope(18, 5), Slope(18, 1)}}));
  EXPECT_FALSE(all_passed(res));

  for (auto [a, b] : {std::pair{Trivialized, Trivialized}, {NotTrivialized, NotTrivialized}, {NotTrivialized, Trivialized},
                      {Unknown, NotTrivialized}, {Trivialized, Unknown}}) {
    auto ok = checks::handmade_report("P(-2,3,7)", {{Slope(18, 5), a}, {Slope(18, 1), b}});
    EXPECT_TRUE(check_fact(ok, inc).passed);
  }
  auto missing = checks::handmade_report("P(-2,3,7)", {{Slope(18, 5), Trivialized}});
  EXPECT_THROW(check_constraints(missing, {inc}), UnknownSlopeInRule);
}

TEST(Constraints, ChainAndFiber) {
  const auto& chain = find_fact<ChainFact>();
  ASSERT_EQ(chain.slopes.size(), 3u);
  auto bad = checks::handmade_report(
      "T(2,3)", {{chain.slopes[0], NotTrivialized}, {chain.slopes[1], NotTrivialized}, {chain.slopes[2], Trivialized}});
  auto res = check_fact(bad, chain);
  EXPECT_FALSE(res.passed);
  EXPECT_EQ(res.offending.size(), 2u);

  const auto k = torus_knot_group(2, 3);
  auto real = scan(k, kG, chain.slopes, quick());
  EXPECT_TRUE(check_fact(real, chain).passed);

  const auto& fiber = find_fact<FiberSlopeFact>();
  EXPECT_EQ(fiber.finite_slopes.size(), 24u);
  auto flagged = checks::handmade_report(
      "T(2,3)", {{Slope(6, 1), Trivialized}, {Slope(12, 1), Trivialized}, {Slope(0, 1), NotTrivialized}});
  auto fr = check_fact(flagged, fiber);
  EXPECT_FALSE(fr.passed);
  EXPECT_EQ(fr.offending, (std::vector<std::pair<Slope, Slope>>{{Slope(6, 1), Slope(12, 1)}}));
  // finite slopes are exempt, and without proof that g != 1 nothing fires
  auto exempt = checks::handmade_report(
      "T(2,3)", {{Slope(6, 1), Trivialized}, {Slope(5, 1), Trivialized}, {Slope(0, 1), NotTrivialized}});
  EXPECT_TRUE(check_fact(exempt, fiber).passed);
  auto all_dead = checks::handmade_report("T(2,3)", {{Slope(6, 1), Trivialized}, {Slope(12, 1), Trivialized}});
  EXPECT_TRUE(check_fact(all_dead, fiber).passed);

  auto applicable = applicable_facts(facts(), real);
  ASSERT_EQ(applicable.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ChainFact>(applicable[0]));
}

TEST(Constraints, SameTrivializingSetFlags) {
  auto g = checks::handmade_report("T(2,3)", {{Slope(1, 1), Trivialized}, {Slope(2, 1), Unknown}});
  auto h = checks::handmade_report("T(2,3)", {{Slope(1, 1), NotTrivialized}, {Slope(2, 1), Trivialized}});
  auto r = check_same_trivializing_set(g, h);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.offending.size(), 1u);
}

TEST(Constraints, FactsJson) {
  auto j = nlohmann::json::parse(R"({"facts": [{"knot": "K", "kind": "inclusion", "sub": "1/2", "super": "1"}]})");
  auto f = facts_from_json(j);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(describe(f[0]), "K: <<1/2>> in <<1/1>>");
  EXPECT_THROW(facts_from_json(nlohmann::json::parse(R"({"facts": [{"knot": "K", "kind": "nope"}]})")), ParseError);
  EXPECT_THROW(load_facts("/nonexistent/facts.json"), ParseError);
}

TEST(Checks, Groups) {
  CheckOptions opts;
  opts.facts_path = default_facts_path();
  auto torus = run_checks({"torus", "cable", "cyclic"}, opts);
  EXPECT_TRUE(all_passed_checks(torus));
  auto conj = run_checks({"conjugacy"}, opts);
  ASSERT_EQ(conj.size(), 3u);
  EXPECT_TRUE(conj[0].passed);
  EXPECT_FALSE(conj[1].passed);
  EXPECT_TRUE(conj[2].passed);
  EXPECT_THROW(run_checks({"bogus"}, opts), ParseError);
}
