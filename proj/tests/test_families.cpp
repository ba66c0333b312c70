#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "dtinf/families.hpp"
#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/thresholds.hpp"
#include "oracles.hpp"

using namespace dtinf;

namespace {

PointIndex permute(const ProductSpace& s, PointIndex x, const std::vector<std::size_t>& perm) {
  const auto v = s.decode(x);
  std::vector<std::size_t> w(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) w[perm[i]] = v[i];
  return s.encode(w);
}

bool invariant(const TabulatedFunction& f, const std::vector<std::size_t>& perm) {
  for (PointIndex x = 0; x < f.space().point_count(); ++x)
    if (f(x) != f(permute(f.space(), x, perm))) return false;
  return true;
}

std::set<std::size_t> orbit_of_first(const std::vector<std::vector<std::size_t>>& gens) {
  std::set<std::size_t> seen{0};
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const auto i = frontier.back();
    frontier.pop_back();
    for (const auto& g : gens)
      if (seen.insert(g[i]).second) frontier.push_back(g[i]);
  }
  return seen;
}

// Connectivity by depth-first search on an adjacency matrix.
bool connected_dfs(std::size_t v, const std::vector<bool>& edge_present) {
  std::vector<std::vector<bool>> adj(v, std::vector<bool>(v, false));
  std::size_t e = 0;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j, ++e) adj[i][j] = adj[j][i] = edge_present[e];
  std::vector<bool> seen(v, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < v; ++b)
      if (adj[a][b] && !seen[b]) {
        seen[b] = true;
        stack.push_back(b);
      }
  }
  for (bool s : seen)
    if (!s) return false;
  return true;
}

}  // namespace

TEST(Families, CanonicalTreesCompute) {
  for (const char* name : {"and:1", "and:4", "or:3", "xor:1", "xor:4", "maj:1", "maj:3", "sel", "dictator:3",
                           "constant:2", "tribes:2,2", "tribes:3,2", "tribes:2,3", "fk:1", "fk:2", "figure1"}) {
    const auto fam = build(name);
    ASSERT_TRUE(fam.tree.has_value()) << name;
    EXPECT_TRUE(computes(*fam.tree, fam.function)) << name;
  }
  EXPECT_FALSE(build("maj:5").tree.has_value());
  EXPECT_FALSE(build("graph:connectivity,4").tree.has_value());
}

TEST(Families, ExplicitValues) {
  const auto sel = build("sel").function;
  // (x1, x2, x3) -> x2 if x1 = 1, else x3.
  for (PointIndex x = 0; x < 8; ++x) {
    const auto v = sel.space().decode(x);
    EXPECT_EQ(sel(x), v[0] == 1 ? v[1] : v[2]);
  }
  const auto tribes = build("tribes:2,2").function;
  for (PointIndex x = 0; x < 16; ++x) {
    const auto v = tribes.space().decode(x);
    EXPECT_EQ(tribes(x), static_cast<std::uint32_t>((v[0] && v[1]) || (v[2] && v[3])));
  }
  const auto xr = build("xor:2").function;
  EXPECT_EQ(xr.label_at(0), "1");
  EXPECT_EQ(xr.label_at(1), "-1");
  EXPECT_EQ(build("constant:3").function.label_at(5), "1");
}

TEST(Families, TribesIsSeparatedButNotReadOnce) {
  for (const char* name : {"tribes:2,2", "tribes:3,2", "tribes:2,3"}) {
    const auto fam = build(name);
    EXPECT_TRUE(is_separated(*fam.tree, fam.function.space())) << name;
    EXPECT_TRUE(oracle::is_separated(*fam.tree, fam.function.space())) << name;
    EXPECT_FALSE(is_read_once(*fam.tree)) << name;
  }
  EXPECT_TRUE(is_read_once(*build("and:3").tree));
  EXPECT_TRUE(is_read_once(*build("sel").tree));
}

TEST(Families, RecursiveFk) {
  const auto f1 = build("fk:1");
  EXPECT_EQ(f1.function.dimension(), 4u);
  EXPECT_EQ(optimal_depth(f1.function).depth, 4u);
  EXPECT_TRUE(is_monotone(f1.function));
  const auto f2 = build("fk:2");
  EXPECT_EQ(f2.function.dimension(), 16u);
  EXPECT_TRUE(is_monotone(f2.function));
  EXPECT_THROW(build("fk:3"), CapExceeded);
  EXPECT_EQ(build("fk:0").function.dimension(), 1u);
}

TEST(Families, AutomorphismsAreTransitive) {
  for (const char* name : {"and:3", "or:4", "xor:3", "maj:5", "tribes:2,2", "tribes:3,2", "fk:1", "fk:2",
                           "graph:connectivity,4", "graph:triangle,4", "graph:nonempty,5"}) {
    const auto fam = build(name);
    ASSERT_FALSE(fam.automorphisms.empty()) << name;
    for (const auto& g : fam.automorphisms) EXPECT_TRUE(invariant(fam.function, g)) << name;
    EXPECT_EQ(orbit_of_first(fam.automorphisms).size(), fam.function.dimension()) << name;
  }
  EXPECT_TRUE(build("sel").automorphisms.empty());
}

TEST(GraphProperty, SmallCases) {
  const auto ne = graph_property(3, "nonempty");
  const auto or3 = build("or:3").function;
  const auto tri = graph_property(3, "triangle");
  const auto and3 = build("and:3").function;
  for (PointIndex x = 0; x < 8; ++x) {
    EXPECT_EQ(ne(x), or3(x));
    EXPECT_EQ(tri(x), and3(x));
  }
  EXPECT_EQ(graph_edges(4).size(), 6u);
  EXPECT_EQ(graph_edges(4)[1], (std::pair<std::size_t, std::size_t>{0, 2}));
  EXPECT_THROW(graph_property(7, "nonempty"), CapExceeded);
  EXPECT_THROW(graph_property(4, "planar"), DomainError);
}

TEST(GraphProperty, ConnectivityMatchesDepthFirstSearch) {
  for (std::size_t v = 2; v <= 5; ++v) {
    const auto f = graph_property(v, "connectivity");
    const std::size_t m = v * (v - 1) / 2;
    std::uint64_t bits = 0;
    for (PointIndex x = 0; x < f.space().point_count(); ++x) {
      const auto coords = f.space().decode(x);
      std::vector<bool> present(m);
      for (std::size_t e = 0; e < m; ++e) present[e] = coords[e] == 1;
      const bool c = connected_dfs(v, present);
      EXPECT_EQ(f(x), c ? 1u : 0u);
      if (v == 4 && c) bits |= std::uint64_t{1} << x;
    }
    EXPECT_TRUE(is_monotone(f));
    if (v == 4) {
      // 38 of the 64 labeled graphs on four vertices are connected.
      const auto dist = output_distribution<Rational>(f);
      EXPECT_EQ(dist[1] * 64, 38);
      const auto ref = oracle::boolean(6, Rational(1, 2), bits);
      for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(influence<Rational>(f, i), oracle::influence(ref, i));
    }
  }
}

TEST(GraphProperty, AllMonotone) {
  for (const char* prop : {"connectivity", "triangle", "nonempty"})
    for (std::size_t v = 2; v <= 5; ++v) EXPECT_TRUE(is_monotone(graph_property(v, prop))) << prop << v;
}

TEST(Figure1Family, KnownStatistics) {
  const auto fam = build("figure1");
  const auto& f = fam.function;
  EXPECT_EQ(variation<Rational>(f), Rational(3, 2));
  EXPECT_EQ(delta<Rational>(*fam.tree, f.space()),
            (std::vector<Rational>{1, Rational(3, 4), Rational(3, 4)}));
  EXPECT_EQ(influences<Rational>(f).values,
            (std::vector<Rational>{Rational(1, 8), Rational(7, 8), Rational(7, 8)}));
  EXPECT_EQ(expectation<Rational>(f), 0);
  EXPECT_EQ(depth(*fam.tree), 3u);
  EXPECT_FALSE(is_read_once(*fam.tree));
}

TEST(ParseFamily, Errors) {
  EXPECT_EQ(parse_family("tribes:2,3").params, (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(parse_family("graph:triangle,4").property, "triangle");
  EXPECT_EQ(parse_family("tribes:2,3").to_string(), "tribes:2,3");
  for (const char* bad : {"", "nand:2", "and", "and:x", "tribes:2", "graph:4", "graph:connectivity"})
    EXPECT_THROW(parse_family(bad), DomainError) << bad;
  EXPECT_THROW(build("maj:2"), DomainError);
}

TEST(Families, BiasIsApplied) {
  const auto f = build("and:2", Number(Rational(1, 3))).function;
  EXPECT_EQ(output_distribution<Rational>(f)[1], Rational(1, 9));
  const auto g = build("and:2", Number(0.25)).function;
  EXPECT_FALSE(g.exact());
}

TEST(RandomChild, LevelZeroCostsOne) {
  std::mt19937_64 rng(1);
  for (bool b : {false, true}) {
    const auto r = random_child_cost(0, {b}, rng);
    EXPECT_EQ(r.cost, 1u);
    EXPECT_EQ(r.value, b);
  }
}

TEST(RandomChild, LevelOneMatchesFunction) {
  const auto f = build("fk:1").function;
  std::mt19937_64 rng(2);
  for (PointIndex x = 0; x < 16; ++x) {
    const auto v = f.space().decode(x);
    std::vector<bool> bits(v.begin(), v.end());
    for (int rep = 0; rep < 8; ++rep) {
      const auto r = random_child_cost(1, bits, rng);
      EXPECT_LE(r.cost, 4u);
      EXPECT_GE(r.cost, 2u);
      EXPECT_EQ(r.value, f(x) == 1);
    }
  }
}

TEST(RandomChild, LevelTwoMeanMatchesExactRecursion) {
  const auto est = random_child_mean(2, 0.5, 100000, 7);
  const auto g = oracle::random_child_exact(2);
  const double exact_mean = g.p1 * g.c1 + (1 - g.p1) * g.c0;
  EXPECT_EQ(est.samples, 100000u);
  EXPECT_GT(est.standard_error, 0.0);
  EXPECT_NEAR(est.mean, exact_mean, 3 * est.standard_error);
  EXPECT_LT(exact_mean, 16.0);
}

TEST(RandomChild, DeterministicUnderSeed) {
  const auto a = random_child_mean(3, 0.5, 2000, 11);
  const auto b = random_child_mean(3, 0.5, 2000, 11);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_THROW(random_child_mean(7, 0.5, 10, 1), CapExceeded);
}

TEST(Snir, Exponent) {
  EXPECT_NEAR(snir_exponent(), 0.7537, 1e-4);
  // f_k has n = 4^k variables; random-child cost grows slower than n.
  const auto e3 = random_child_mean(3, 0.5, 4000, 3);
  EXPECT_LT(e3.mean, 64.0);
}
