#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dtinf/families.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/verify.hpp"
#include "oracles.hpp"

using namespace dtinf;

namespace {

Rational enumerated_minimum(const TabulatedFunction& f) {
  std::optional<Rational> best;
  for_each_ddt(f, [&](const DecisionTree& t) {
    const auto c = expected_cost<Rational>(t, f.space());
    if (!best || c < *best) best = c;
  });
  return *best;
}

std::size_t enumerated_min_depth(const TabulatedFunction& f) {
  std::size_t best = SIZE_MAX;
  for_each_ddt(f, [&](const DecisionTree& t) { best = std::min(best, depth(t)); });
  return best;
}

}  // namespace

TEST(OptimalCost, Constant) {
  const auto r = optimal_expected_cost<Rational>(build("constant:3").function);
  EXPECT_EQ(r.cost, 0);
  EXPECT_TRUE(r.witness.is_leaf());
}

TEST(OptimalCost, NamedExamples) {
  EXPECT_EQ(optimal_expected_cost<Rational>(build("maj:3").function).cost, Rational(5, 2));
  EXPECT_EQ(optimal_expected_cost<Rational>(build("and:2").function).cost, Rational(3, 2));
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(optimal_expected_cost<Rational>(build("xor:" + std::to_string(n)).function).cost,
              Rational(static_cast<long>(n)));
  }
}

TEST(OptimalCost, WitnessComputesAndAchievesCost) {
  for (const char* name : {"maj:5", "tribes:2,3", "fk:1", "graph:connectivity,4", "sel", "figure1"}) {
    const auto f = build(name).function;
    const auto r = optimal_expected_cost<Rational>(f);
    EXPECT_TRUE(computes(r.witness, f)) << name;
    EXPECT_EQ(expected_cost<Rational>(r.witness, f.space()), r.cost) << name;
  }
}

TEST(OptimalCost, AgreesWithEnumerationOnAllN3) {
  for (const Rational p : {Rational(1, 2), Rational(1, 3)}) {
    for (std::uint64_t code = 0; code < 256; ++code) {
      const auto f = oracle::boolean(3, p, code);
      EXPECT_EQ(optimal_expected_cost<Rational>(f).cost, enumerated_minimum(f)) << code;
    }
  }
}

TEST(OptimalCost, AgreesWithEnumerationOnRandomN4) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 100; ++rep) {
    const auto f = oracle::boolean(4, Rational(1, 2), rng() & 0xffff);
    EXPECT_EQ(optimal_expected_cost<Rational>(f).cost, enumerated_minimum(f));
  }
}

TEST(OptimalCost, NonBinaryDomains) {
  // Three-valued coordinates: the optimum is checked against brute force over
  // the first query and the dimension-1 case.
  ProductSpace s({CoordDomain::exact_domain({"a", "b", "c"}, {Rational(1, 2), Rational(1, 4), Rational(1, 4)}),
                  CoordDomain::exact_domain({"u", "v"}, {Rational(1, 3), Rational(2, 3)})});
  auto sp = std::make_shared<const ProductSpace>(s);
  auto outs = std::make_shared<const OutputSpace>(OutputSpace::discrete({"0", "1"}));
  // f = 1 iff x1 = c or (x1 = b and x2 = v).
  const auto f = tabulate(sp, outs, [](const auto& v) { return (v[0] == 2 || (v[0] == 1 && v[1] == 1)) ? 1 : 0; });
  // Query x1 first: 1 + Pr[x1 = b] * 1 = 5/4. Query x2 first: 1 + 1 = 2.
  const auto r = optimal_expected_cost<Rational>(f);
  EXPECT_EQ(r.cost, Rational(5, 4));
  EXPECT_EQ(r.witness.coord(), 0u);
}

TEST(OptimalCost, TiesGoToLowestIndex) {
  const auto r = optimal_expected_cost<Rational>(build("xor:3").function);
  EXPECT_EQ(r.witness.coord(), 0u);
  EXPECT_EQ(r.witness.child(0).coord(), 1u);
}

TEST(OptimalCost, StatesLimit) {
  SolverLimits tiny;
  tiny.max_states = 2;
  EXPECT_THROW(optimal_expected_cost<Rational>(build("maj:5").function, tiny), CapExceeded);
}

TEST(OptimalCost, ReachesSixteenVariables) {
  const auto f = build("fk:2").function;
  const auto r = optimal_expected_cost<double>(f);
  EXPECT_TRUE(computes(r.witness, f));
  EXPECT_NEAR(r.cost, expected_cost<double>(r.witness, f.space()), 1e-12);
}

TEST(OptimalDepth, Examples) {
  EXPECT_EQ(optimal_depth(build("constant:2").function).depth, 0u);
  EXPECT_EQ(optimal_depth(build("xor:4").function).depth, 4u);
  EXPECT_EQ(optimal_depth(build("sel").function).depth, 2u);
  EXPECT_EQ(enumerated_min_depth(build("sel").function), 2u);
  EXPECT_EQ(optimal_depth(build("fk:1").function).depth, 4u);
}

TEST(OptimalDepth, OrderingAgainstCost) {
  for (std::uint64_t code = 0; code < 256; ++code) {
    const auto f = oracle::boolean(3, Rational(1, 4), code);
    const auto d = optimal_depth(f);
    EXPECT_EQ(d.depth, enumerated_min_depth(f));
    EXPECT_TRUE(computes(d.witness, f));
    EXPECT_LE(optimal_expected_cost<Rational>(f).cost, Rational(static_cast<long>(d.depth)));
    EXPECT_LE(d.depth, 3u);
  }
}

TEST(OptimalCost, BelowAnyRandomizedTree) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const auto f = oracle::boolean(3, Rational(1, 2), rng() & 0xff);
    const auto trees = enumerate_all_ddts(f);
    std::vector<RandomizedTree::Branch> branches;
    const std::size_t k = std::min<std::size_t>(trees.size(), 3);
    for (std::size_t b = 0; b < k; ++b) branches.push_back({Number(Rational(1, static_cast<long>(k))), trees[b]});
    const RandomizedTree rt(branches);
    Rational r = 0;
    for (const auto& v : delta_randomized<Rational>(rt, f.space())) r += v;
    EXPECT_LE(optimal_expected_cost<Rational>(f).cost, r);
  }
}

TEST(Enumeration, SmallCounts) {
  const auto one = ProductSpace::biased_cube(1, Rational(1, 2));
  auto sp = std::make_shared<const ProductSpace>(one);
  auto outs = std::make_shared<const OutputSpace>(OutputSpace::boolean());
  const TabulatedFunction dict(sp, outs, {0, 1});
  const TabulatedFunction constant(sp, outs, {1, 1});
  EXPECT_EQ(count_ddts(dict), 1u);
  EXPECT_EQ(count_ddts(constant), 1u);
  EXPECT_TRUE(enumerate_all_ddts(constant).front().is_leaf());
  // Hand count: AND2 has two trees (root x1 or x2, the other read once on +1).
  EXPECT_EQ(count_ddts(build("and:2").function), 2u);
  // MAJ3: 3 roots, and each restriction is AND2 or OR2 with two trees each.
  EXPECT_EQ(count_ddts(build("maj:3").function), 12u);
  EXPECT_EQ(count_ddts(build("xor:3").function), 12u);
}

TEST(Enumeration, NoDuplicatesAndAllCompute) {
  for (std::uint64_t code = 0; code < 256; code += 7) {
    const auto f = oracle::boolean(3, Rational(1, 2), code);
    const auto trees = enumerate_all_ddts(f);
    EXPECT_EQ(trees.size(), count_ddts(f));
    for (std::size_t a = 0; a < trees.size(); ++a) {
      EXPECT_TRUE(computes(trees[a], f));
      for (std::size_t b = a + 1; b < trees.size(); ++b) EXPECT_FALSE(trees[a] == trees[b]);
    }
  }
}

TEST(Enumeration, RefusesLargeOrNonBinary) {
  EXPECT_THROW(enumerate_all_ddts(build("xor:5").function), Refused);
  ProductSpace s({CoordDomain::exact_domain({"a", "b", "c"}, {Rational(1, 3), Rational(1, 3), Rational(1, 3)})});
  auto sp = std::make_shared<const ProductSpace>(s);
  auto outs = std::make_shared<const OutputSpace>(OutputSpace::discrete({"0", "1"}));
  EXPECT_THROW(enumerate_all_ddts(TabulatedFunction(sp, outs, {0, 1, 1})), Refused);
}

TEST(EntropyBound, EveryEnumeratedTree) {
  for (const Rational p : {Rational(1, 4), Rational(1, 2)}) {
    for (std::uint64_t code = 0; code < 256; ++code) {
      const auto f = oracle::boolean(3, p, code);
      const double cost = to_double(optimal_expected_cost<Rational>(f).cost);
      for (const auto& t : enumerate_all_ddts(f)) {
        const auto r = check_entropy_bound(t, f, cost);
        EXPECT_TRUE(r.holds) << code;
      }
    }
  }
}
