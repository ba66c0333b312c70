#include <gtest/gtest.h>

#include <random>

#include "dtinf/families.hpp"
#include "dtinf/measures.hpp"
#include "oracles.hpp"

using namespace dtinf;

TEST(Variation, ConstantIsZero) {
  EXPECT_EQ(variation<Rational>(build("constant:3").function), 0);
}

TEST(Variation, Figure1) {
  EXPECT_EQ(variation<Rational>(build("figure1").function), Rational(3, 2));
}

TEST(Variation, Maj3IsBalanced) {
  EXPECT_EQ(variation<Rational>(build("maj:3").function), 1);
}

TEST(Variation, BooleanEqualsFourPq) {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto f = oracle::boolean(3, Rational(1, 3), rng() & 0xff);
    const auto dist = output_distribution<Rational>(f);
    EXPECT_EQ(variation<Rational>(f), 4 * dist[0] * dist[1]);
    EXPECT_EQ(variation<Rational>(f), oracle::variation(f));
  }
}

TEST(Variation, Rho2IsOrdinaryVariance) {
  std::mt19937_64 rng(2);
  const std::vector<std::string> labels{"-2", "0", "1/2", "3"};
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<std::uint32_t> table(8);
    for (auto& z : table) z = rng() % labels.size();
    const auto f = oracle::real_valued(3, Rational(1, 4), labels, table);
    EXPECT_EQ(variation<Rational>(f), oracle::variance(f));
    EXPECT_EQ(variation<Rational>(f), oracle::variation(f));
  }
}

TEST(Influence, Dictator) {
  const auto inf = influences<Rational>(build("dictator:3").function);
  EXPECT_EQ(inf.values, (std::vector<Rational>{1, 0, 0}));
  EXPECT_EQ(inf.total, 1);
  EXPECT_EQ(inf.max, 1);
  EXPECT_EQ(inf.metric_tag, "boolean");
}

TEST(Influence, Figure1Rho2) {
  const auto inf = influences<Rational>(build("figure1").function);
  EXPECT_EQ(inf.values, (std::vector<Rational>{Rational(1, 8), Rational(7, 8), Rational(7, 8)}));
}

TEST(Influence, And2) {
  const auto f = build("and:2").function;
  EXPECT_EQ(influences<Rational>(f).values, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
  EXPECT_EQ(influence<Rational>(f, 0), oracle::influence(f, 0));
  EXPECT_THROW(influence<Rational>(f, 2), DomainError);
}

TEST(Influence, MatchesPairSpaceOracle) {
  std::mt19937_64 rng(3);
  for (const Rational p : {Rational(1, 2), Rational(1, 5), Rational(3, 4)}) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto f = oracle::boolean(3, p, rng() & 0xff);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(influence<Rational>(f, i), oracle::influence(f, i));
    }
  }
}

TEST(Influence, UniformBooleanEqualsPivotalFraction) {
  for (std::uint64_t code = 0; code < 256; ++code) {
    const auto f = oracle::boolean(3, Rational(1, 2), code);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(influence<Rational>(f, i), oracle::pivotal_fraction(f, i));
      EXPECT_EQ(to_flip_convention<Rational>(influence<Rational>(f, i), Rational(1, 2)),
                oracle::pivotal_fraction(f, i));
    }
  }
}

TEST(Influence, FlipConventionAtBias) {
  // Rerandomized influence is 4pq times the pivotal probability.
  const Rational p(1, 3);
  const auto f = build("maj:3", Number(p)).function;
  const auto inf = influence<Rational>(f, 0);
  // x1 is pivotal when x2 != x3: probability 2pq.
  EXPECT_EQ(to_flip_convention<Rational>(inf, p), 2 * p * (1 - p));
}

TEST(Influence, IrrelevantCoordinateIsZero) {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 40; ++rep) {
    // Functions of x1, x2 only, padded to three coordinates.
    const std::uint64_t inner = rng() & 0xf;
    std::uint64_t bits = 0;
    for (std::uint64_t x = 0; x < 8; ++x) bits |= ((inner >> (x >> 1)) & 1) << x;
    const auto f = oracle::boolean(3, Rational(2, 7), bits);
    EXPECT_EQ(influence<Rational>(f, 2), 0);
  }
  EXPECT_EQ(influences<Rational>(build("constant:4").function).total, 0);
}

TEST(Influence, InvariantUnderRelabelingOtherCoordinates) {
  // Swap the value order of coordinate 2 and compare influence of coordinate 1.
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = oracle::boolean(2, Rational(1, 3), rng() & 0xf);
    auto s2 = std::make_shared<const ProductSpace>(std::vector<CoordDomain>{
        f.space().coord(0), CoordDomain::exact_domain({"1", "-1"}, {Rational(1, 3), Rational(2, 3)})});
    std::vector<std::uint32_t> table(4);
    for (PointIndex x = 0; x < 4; ++x) table[x] = f(x ^ 1);
    const TabulatedFunction g(s2, f.outputs_ptr(), table);
    EXPECT_EQ(influence<Rational>(f, 0), influence<Rational>(g, 0));
    EXPECT_EQ(influence<Rational>(f, 1), influence<Rational>(g, 1));
  }
}

TEST(Covariation, SelfIsVariation) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const auto f = oracle::boolean(3, Rational(1, 4), rng() & 0xff);
    EXPECT_EQ(covariation<Rational>(f, f), variation<Rational>(f));
  }
}

TEST(Covariation, ConstantFirstArgumentIsZero) {
  const auto c = build("constant:2").function;
  for (std::uint64_t code = 0; code < 16; ++code) {
    EXPECT_EQ(covariation<Rational>(c, oracle::boolean(2, Rational(1, 2), code)), 0);
  }
}

TEST(Covariation, XorAgainstAndMatchesPointPairSum) {
  const auto x = build("xor:2").function;
  const auto a = build("and:2").function;
  EXPECT_EQ(covariation<Rational>(x, a), oracle::covariation(x, a));
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 30; ++rep) {
    const auto f = oracle::boolean(3, Rational(2, 3), rng() & 0xff);
    const auto g = oracle::boolean(3, Rational(2, 3), rng() & 0xff);
    EXPECT_EQ(covariation<Rational>(f, g), oracle::covariation(f, g));
  }
  EXPECT_THROW(covariation<Rational>(x, build("and:3").function), DomainError);
}

TEST(Covariance, Examples) {
  const auto d1 = build("dictator:3").function;
  EXPECT_EQ(covariance<Rational>(d1, d1), 1);
  // x2 as a function: dictator on a reordered copy.
  const auto x2 = tabulate(d1.space_ptr(), d1.outputs_ptr(), [](const auto& v) { return v[1]; });
  EXPECT_EQ(covariance<Rational>(d1, x2), 0);
  EXPECT_EQ(covariance<Rational>(build("maj:3").function, d1), Rational(1, 2));
  const auto disc = tabulate(d1.space_ptr(), std::make_shared<const OutputSpace>(OutputSpace::discrete({"a", "b"})),
                             [](const auto& v) { return v[0]; });
  EXPECT_THROW(covariance<Rational>(disc, disc), DomainError);
}

TEST(BiasPolynomial, Counts) {
  EXPECT_EQ(bias_polynomial(build("and:4").function).counts, (std::vector<std::uint64_t>{0, 0, 0, 0, 1}));
  EXPECT_EQ(bias_polynomial(build("maj:3").function).counts, (std::vector<std::uint64_t>{0, 0, 3, 1}));
  EXPECT_THROW(bias_polynomial(build("figure1").function), DomainError);
}

TEST(BiasPolynomial, TribesMatchesInclusionExclusion) {
  const auto poly = bias_polynomial(build("tribes:2,2").function);
  for (int k = 0; k <= 20; ++k) {
    Rational p(k, 20);
    p.canonicalize();
    const Rational q2 = 1 - p * p;
    EXPECT_EQ(poly.evaluate<Rational>(p), 1 - q2 * q2);
  }
}

TEST(BiasPolynomial, MatchesEnumeratedProbability) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 40; ++rep) {
    const auto bits = rng() & 0xffff;
    const auto poly = bias_polynomial(oracle::boolean(4, Rational(1, 2), bits));
    for (const Rational p : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)}) {
      // Enumerate on a cube built at p (weights {1-p, p}; p in {0,1} is legal).
      const auto f = oracle::boolean(4, p, bits);
      Rational pr = 0;
      for (PointIndex x = 0; x < 16; ++x)
        if (f(x) == 1) pr += point_probability<Rational>(f.space(), x);
      EXPECT_EQ(poly.evaluate<Rational>(p), pr);
    }
  }
}

TEST(EfronStein, ExhaustiveSmallCubes) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::uint64_t{1} << n);
    for (std::uint64_t code = 0; code < count; ++code) {
      for (const Rational p : {Rational(1, 2), Rational(1, 4)}) {
        const auto f = oracle::boolean(n, p, code);
        EXPECT_LE(variation<Rational>(f), influences<Rational>(f).total);
        const auto r = as_rho2(f);
        EXPECT_LE(variation<Rational>(r), influences<Rational>(r).total);
      }
    }
  }
}

TEST(EfronStein, SampledLargerCubes) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {4u, 5u}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto f = oracle::boolean(n, Rational(1, 3), rng() & ((std::uint64_t{1} << (1u << n)) - 1));
      EXPECT_LE(variation<Rational>(f), influences<Rational>(f).total);
    }
  }
}

TEST(FloatMode, AgreesWithExact) {
  std::mt19937_64 rng(10);
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = oracle::boolean(3, Rational(1, 3), rng() & 0xff);
    EXPECT_NEAR(variation<double>(f), to_double(variation<Rational>(f)), 1e-12);
    EXPECT_NEAR(influences<double>(f).total, to_double(influences<Rational>(f).total), 1e-12);
  }
}
