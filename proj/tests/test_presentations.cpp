#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "knotfill/knots.hpp"
#include "knotfill/presentation.hpp"
#include "knotfill/slope.hpp"
#include "knotfill/smith.hpp"

using namespace knotfill;

namespace {

// Laplace expansion along the first row.
BigInt cofactor_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  BigInt total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    BigInt term = m(0, c) * cofactor_det(minor);
    total += (c % 2 ? -term : term);
  }
  return total;
}

BigInt entry_gcd(const IntMatrix& m) {
  BigInt g = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g = boost::multiprecision::gcd(g, m(i, j));
  return g;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  std::uniform_int_distribution<int> v(-bound, bound);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = v(rng);
  return m;
}

void expect_valid_snf(const IntMatrix& a, const SmithForm& s) {
  IntMatrix d = s.row_ops * a * s.col_ops;
  ASSERT_EQ(s.diagonal.size(), std::min(a.rows(), a.cols()));
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) ASSERT_EQ(d(i, j), i == j ? s.diagonal[i] : BigInt(0));
  for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) {
    ASSERT_GE(s.diagonal[i], 0);
    if (s.diagonal[i] == 0)
      ASSERT_EQ(s.diagonal[i + 1], 0);
    else
      ASSERT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
  }
  ASSERT_EQ(abs(determinant(s.row_ops)), 1);
  ASSERT_EQ(abs(determinant(s.col_ops)), 1);
}

std::string h1(const PeripheralizedKnotGroup& k, const Slope& r) { return to_string(abelianization(build_filling(k, r))); }

// Expected H_1 of a filling: Z_|p|, Z for p = 0, trivial for |p| = 1 and
// for the meridian filling.
std::string expected_h1(const Slope& r) {
  auto p = r.p() < 0 ? -r.p() : r.p();
  if (r.is_infinite()) return "0";
  if (p == 0) return "Z";
  if (p == 1) return "0";
  return "Z_" + std::to_string(p);
}

}  // namespace

TEST(Smith, DeterminantAgainstCofactors) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 5;
    auto m = random_matrix(rng, n, n, 6);
    ASSERT_EQ(determinant(m), cofactor_det(m));
  }
}

TEST(Smith, WitnessAndDivisibility) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial / 4) % 4;
    auto a = random_matrix(rng, r, c, trial % 3 == 0 ? 1 : 9);
    auto s = smith_normal_form(a);
    expect_valid_snf(a, s);
    if (!s.diagonal.empty()) {
      ASSERT_EQ(s.diagonal[0], entry_gcd(a));
    }
    if (r == c) {
      BigInt prod = 1;
      for (const auto& d : s.diagonal) prod *= d;
      ASSERT_EQ(prod, abs(cofactor_det(a)));
    }
  }
}

TEST(Smith, KnownForms) {
  auto s = smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  EXPECT_EQ(s.diagonal, (std::vector<BigInt>{2, 6, 12}));
  EXPECT_EQ(smith_normal_form(IntMatrix{{0, 0}, {0, 0}}).diagonal, (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(smith_normal_form(IntMatrix{{6, 4}}).diagonal, (std::vector<BigInt>{2}));
}

TEST(Presentation, Construction) {
  EXPECT_THROW(FinitePresentation({Symbol("x"), Symbol("x")}, {}), DuplicateGenerator);
  EXPECT_THROW(FinitePresentation({Symbol("x")}, {parse_word("y")}), UnknownGenerator);
  FinitePresentation p({Symbol("x"), Symbol("y")}, {parse_word("x y x^-1 y^-1")});
  auto q = add_relator(p, parse_word("x^3"));
  EXPECT_EQ(p.relators().size(), 1u);
  EXPECT_EQ(q.relators().size(), 2u);
  EXPECT_THROW(add_relator(p, parse_word("z")), UnknownGenerator);
}

TEST(Presentation, Abelianization) {
  auto pres = [](std::vector<std::string> gens, std::vector<std::string> rels) {
    std::vector<Symbol> g;
    for (auto& s : gens) g.emplace_back(s);
    std::vector<Word> r;
    for (auto& s : rels) r.push_back(parse_word(s));
    return FinitePresentation(g, r);
  };
  EXPECT_EQ(to_string(abelianization(pres({"x", "y"}, {}))), "Z^2");
  EXPECT_EQ(to_string(abelianization(pres({"x"}, {"x^6"}))), "Z_6");
  EXPECT_EQ(to_string(abelianization(pres({"x", "y"}, {"x^2", "y^3"}))), "Z_6");
  EXPECT_EQ(to_string(abelianization(pres({"x", "y"}, {"x^2", "y^4"}))), "Z_2 x Z_4");
  EXPECT_EQ(to_string(abelianization(pres({"x", "y", "z"}, {"x^2 y^2"}))), "Z_2 x Z^2");
  EXPECT_EQ(to_string(abelianization(pres({"x", "y"}, {"x y x^-1 y^-1"}))), "Z^2");
  EXPECT_TRUE(abelianization(pres({"x"}, {"x"})).trivial());
  EXPECT_TRUE(abelianization(pres({}, {})).trivial());

  auto p = pres({"x", "y"}, {"x^2", "y^4"});
  AbelianizationMap ab(p);
  EXPECT_TRUE(ab.image(parse_word("x^2 y^4")).is_zero());
  EXPECT_FALSE(ab.image(parse_word("y^2")).is_zero());
  EXPECT_EQ(ab.image(parse_word("x y")), ab.image(parse_word("y x")));
  EXPECT_THROW(ab.image(parse_word("z")), UnknownGenerator);
}

TEST(Presentation, AbelianImageIsAHomomorphism) {
  std::mt19937_64 rng(9);
  FinitePresentation p({Symbol("x"), Symbol("y"), Symbol("z")}, {parse_word("x^4 y^-2"), parse_word("z^6 x^2")});
  AbelianizationMap ab(p);
  std::uniform_int_distribution<int> g(0, 2), e(-5, 5);
  const Symbol gens[] = {Symbol("x"), Symbol("y"), Symbol("z")};
  auto rand_word = [&] {
    Word w;
    for (int i = 0; i < 6; ++i) w *= Word::generator(gens[g(rng)], e(rng));
    return w;
  };
  auto add = [&](AbelianElement a, const AbelianElement& b) {
    for (std::size_t i = 0; i < a.torsion.size(); ++i) {
      a.torsion[i] = (a.torsion[i] + b.torsion[i]) % ab.invariants().torsion[i];
    }
    for (std::size_t i = 0; i < a.free.size(); ++i) a.free[i] += b.free[i];
    return a;
  };
  for (int trial = 0; trial < 200; ++trial) {
    Word u = rand_word(), v = rand_word();
    ASSERT_EQ(ab.image(u * v), add(ab.image(u), ab.image(v)));
    for (const auto& r : p.relators()) ASSERT_TRUE(ab.image(v.inverse() * r * v).is_zero());
  }
}

TEST(Presentation, JsonRoundtrip) {
  FinitePresentation p({Symbol("x"), Symbol("y")}, {parse_word("x^2 y^-3"), parse_word("x y x y^-1")});
  auto j = to_json(p);
  EXPECT_EQ(j["relators"][0], "x^2 y^-3");
  EXPECT_EQ(presentation_from_json(j), p);
  EXPECT_EQ(presentation_from_json(nlohmann::json::parse(j.dump())), p);
  EXPECT_THROW(presentation_from_json(nlohmann::json::array()), ParseError);
}

TEST(Slopes, Canonicalization) {
  EXPECT_EQ(Slope(-4, -6), Slope(2, 3));
  EXPECT_EQ(Slope(3, -6), Slope(-1, 2));
  EXPECT_EQ(Slope(-5, 0), Slope::infinity());
  EXPECT_EQ(Slope(0, -7), Slope(0, 1));
  EXPECT_THROW(Slope(0, 0), InvalidSlope);
  EXPECT_EQ(parse_slope("18/5"), Slope(18, 5));
  EXPECT_EQ(parse_slope("-7"), Slope(-7, 1));
  EXPECT_EQ(parse_slope("inf"), Slope::infinity());
  EXPECT_EQ(parse_slope("4/-2"), Slope(-2, 1));
  EXPECT_THROW(parse_slope("1/x"), ParseError);
  EXPECT_THROW(parse_slope(""), ParseError);
  EXPECT_EQ(to_string(Slope(-6, 4)), "-3/2");
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> v(-40, 40);
  for (int i = 0; i < 500; ++i) {
    int p = v(rng), q = v(rng);
    if (p == 0 && q == 0) continue;
    Slope s(p, q);
    ASSERT_EQ(parse_slope(to_string(s)), s);
    ASSERT_GE(s.q(), 0);
  }
}

TEST(Slopes, DistanceAndEnumeration) {
  EXPECT_EQ(slope_distance(Slope(1, 0), Slope(5, 1)), 1);
  EXPECT_EQ(slope_distance(Slope(18, 5), Slope(18, 1)), 72);
  EXPECT_EQ(slope_distance(Slope(3, 2), Slope(3, 2)), 0);

  auto s = enumerate_slopes(3, 2, true);
  std::vector<std::string> text;
  for (auto& r : s) text.push_back(to_string(r));
  EXPECT_EQ(text, (std::vector<std::string>{"-3/1", "-2/1", "-1/1", "0/1", "1/1", "2/1", "3/1", "-3/2", "-1/2",
                                            "1/2", "3/2", "1/0"}));
  EXPECT_TRUE(std::is_sorted(s.begin(), s.end() - 1));
  EXPECT_THROW(enumerate_slopes(0, 1, false), InvalidSlope);
  // count against an Euler phi oracle
  for (int mq = 1; mq <= 6; ++mq) {
    std::size_t expect = 0;
    for (int q = 1; q <= mq; ++q)
      for (int p = -10; p <= 10; ++p) expect += std::gcd(std::abs(p), q) == 1;
    ASSERT_EQ(enumerate_slopes(10, mq, false).size(), expect);
  }
}

TEST(Knots, PeripheralSystems) {
  auto tre = torus_knot_group(2, 3);
  EXPECT_EQ(to_string(tre.presentation().relators()[0]), "x^2 y^-3");
  EXPECT_EQ(to_string(tre.meridian()), "x y^-1");
  for (auto [a, b] : {std::pair{2, 3}, {3, 5}, {2, 5}, {3, 4}, {-2, 3}, {2, 7}, {5, 7}}) {
    auto k = torus_knot_group(a, b);
    EXPECT_EQ(to_string(abelianization(k.presentation())), "Z");
    EXPECT_TRUE(AbelianizationMap(k.presentation()).image(k.longitude()).is_zero());
  }
  EXPECT_THROW(torus_knot_group(2, 4), InvalidTorusParams);
  EXPECT_THROW(torus_knot_group(1, 3), InvalidTorusParams);
  EXPECT_THROW(PeripheralizedKnotGroup(FinitePresentation({Symbol("x")}, {}), parse_word("x^2"), Word(), "bad"),
               InvalidPeripheralSystem);
  EXPECT_THROW(PeripheralizedKnotGroup(FinitePresentation({Symbol("x"), Symbol("y")}, {}), parse_word("x"),
                                       Word(), "free"),
               InvalidPeripheralSystem);
  auto f8 = figure_eight_group();
  EXPECT_EQ(f8.label(), "figure8");
  EXPECT_EQ(f8.slope_element(Slope::infinity()), f8.meridian());
  EXPECT_EQ(f8.slope_element(Slope(2, 3)), f8.meridian().pow(2) * f8.longitude().pow(3));
}

TEST(Knots, FillingHomology) {
  const std::vector<PeripheralizedKnotGroup> knots{torus_knot_group(2, 3), figure_eight_group(),
                                                   torus_knot_group(3, 5)};
  for (const auto& k : knots)
    for (const auto& r : enumerate_slopes(10, 3, true)) ASSERT_EQ(h1(k, r), expected_h1(r)) << k.label() << " " << to_string(r);
  EXPECT_EQ(h1(torus_knot_group(2, 3), Slope(-9, 2)), "Z_9");
}

TEST(Knots, CyclicTorusFillings) {
  for (int n = 1; n <= 5; ++n) {
    EXPECT_TRUE(is_cyclic_torus_filling(2, 3, Slope(6 * n + 1, n)));
    EXPECT_TRUE(is_cyclic_torus_filling(2, 3, Slope(6 * n - 1, n)));
  }
  EXPECT_FALSE(is_cyclic_torus_filling(2, 3, Slope(6, 1)));
  EXPECT_FALSE(is_cyclic_torus_filling(2, 3, Slope(1, 1)));
  EXPECT_TRUE(is_cyclic_torus_filling(3, 5, Slope(14, 1)));
  EXPECT_THROW(is_cyclic_torus_filling(2, 3, Slope::infinity()), InfiniteSlope);
  EXPECT_THROW(is_cyclic_torus_filling(2, 2, Slope(1, 1)), InvalidTorusParams);
}

TEST(Knots, CableClassification) {
  // (13, 2)-cable of T(2, 3)
  auto c = [](std::int64_t p, std::int64_t q) { return classify_cable_filling(2, 3, 2, 13, Slope(p, q)); };
  EXPECT_EQ(c(26, 1), FillingClassification(ReducibleConnectedSum{Slope(13, 2), 2, 13}));
  EXPECT_EQ(c(27, 1), FillingClassification(IrreducibleFilling{Slope(27, 4)}));
  EXPECT_EQ(c(30, 1), FillingClassification(SeifertOrGraph{}));
  EXPECT_EQ(c(25, 1), FillingClassification(CyclicFilling{}));
  EXPECT_EQ(to_string(c(26, 1)), "ReducibleConnectedSum(L(2,13))");
  EXPECT_EQ(to_string(c(27, 1)), "IrreducibleFilling(27/4)");
  // |26 n - m| = 1 exactly on the irreducible or cyclic lines
  for (std::int64_t m = -60; m <= 60; ++m)
    for (std::int64_t n = 1; n <= 3; ++n) {
      if (std::gcd(std::abs(m), n) != 1) continue;
      auto cls = c(m, n);
      auto dist = std::abs(26 * n - m);
      if (dist > 1)
        ASSERT_TRUE(std::holds_alternative<SeifertOrGraph>(cls));
      else if (dist == 0)
        ASSERT_TRUE(std::holds_alternative<ReducibleConnectedSum>(cls));
      else
        ASSERT_FALSE(std::holds_alternative<SeifertOrGraph>(cls));
    }
  EXPECT_THROW(classify_cable_filling(2, 3, 1, 13, Slope(26, 1)), InvalidCableParams);
  EXPECT_THROW(classify_cable_filling(2, 3, 2, 12, Slope(26, 1)), InvalidCableParams);
  EXPECT_THROW(classify_cable_filling(2, 3, 2, 13, Slope::infinity()), InfiniteSlope);
}

TEST(Knots, JsonAndSpecs) {
  auto k = torus_knot_group(3, 5);
  auto j = to_json(k);
  EXPECT_EQ(j["torus_params"], nlohmann::json::array({3, 5}));
  auto back = knot_from_json(j);
  EXPECT_EQ(back.presentation(), k.presentation());
  EXPECT_EQ(back.meridian(), k.meridian());
  EXPECT_EQ(back.longitude(), k.longitude());
  EXPECT_EQ(back.torus_params(), k.torus_params());

  auto path = std::filesystem::temp_directory_path() / "knotfill_test_knot.json";
  std::ofstream(path) << to_json(figure_eight_group()).dump();
  auto f8 = knot_from_spec(path.string());
  EXPECT_EQ(f8.presentation(), figure_eight_group().presentation());
  std::filesystem::remove(path);

  EXPECT_EQ(knot_from_spec("trefoil").torus_params(), (TorusParams{2, 3}));
  EXPECT_EQ(knot_from_spec("torus:3,5").torus_params(), (TorusParams{3, 5}));
  EXPECT_THROW(knot_from_spec("torus:3"), ParseError);
  EXPECT_THROW(knot_from_spec("no-such-knot"), ParseError);
  auto bad = j;
  bad["longitude"] = "x";
  EXPECT_THROW(knot_from_json(bad), InvalidPeripheralSystem);
}
