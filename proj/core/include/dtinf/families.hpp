#pragma once

// Named functions on the p-biased cube and their canonical trees.
//
//   and:n or:n xor:n maj:n dictator:n constant:n sel figure1
//   tribes:w,s       OR of s disjoint ANDs of width w
//   fk:k             f_0 = x_1, f_k = (f ∧ f) ∨ (f ∧ f) on 4^k variables
//   graph:prop,v     prop in {connectivity, triangle, nonempty}; one
//                    variable per edge {i,j}, i < j, in lexicographic order
//
// Boolean outputs are {-1, 1} with the boolean metric; +1 means true.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dtinf/model.hpp"
#include "dtinf/tree.hpp"

namespace dtinf {

struct FamilySpec {
  std::string name;
  std::vector<std::size_t> params;
  /// Graph property name for "graph".
  std::string property;

  std::string to_string() const;
};

/// Throws DomainError on unknown names or bad parameters.
FamilySpec parse_family(std::string_view text);

struct Family {
  FamilySpec spec;
  TabulatedFunction function;
  std::optional<DecisionTree> tree;
  /// Coordinate permutations (image of each coordinate) generating a group
  /// that acts transitively; empty when the family is not transitive.
  std::vector<std::vector<std::size_t>> automorphisms;
  std::optional<std::size_t> graph_vertices;
};

inline constexpr std::size_t kMaxRecursiveLevel = 2;
inline constexpr std::size_t kMaxGraphVertices = 6;

/// Builds the family on the cube with bias p (figure1 ignores p and is
/// uniform). Throws CapExceeded past the point cap or the level/vertex limits.
Family build(const FamilySpec& spec, const Number& p = Number(Rational(1, 2)),
             std::uint64_t cap = kDefaultEnumerationCap);
Family build(std::string_view spec, const Number& p = Number(Rational(1, 2)),
             std::uint64_t cap = kDefaultEnumerationCap);

TabulatedFunction graph_property(std::size_t v, const std::string& property,
                                 const Number& p = Number(Rational(1, 2)),
                                 std::uint64_t cap = kDefaultEnumerationCap);

/// Edge {i, j} (0-based vertices) of each graph variable.
std::vector<std::pair<std::size_t, std::size_t>> graph_edges(std::size_t v);

struct RandomChildResult {
  bool value;
  std::size_t cost;
};

/// Evaluates f_k on x (4^k bits, true = +1) structurally, visiting the two
/// children of every gate in random order and skipping the second when the
/// first already decides the gate.
RandomChildResult random_child_cost(std::size_t k, const std::vector<bool>& x,
                                    std::mt19937_64& rng);

struct MonteCarloEstimate {
  double mean;
  double standard_error;
  std::size_t samples;
};

inline constexpr std::size_t kMaxSampledLevel = 6;

/// Mean random-child cost over p-biased inputs.
MonteCarloEstimate random_child_mean(std::size_t k, double p, std::size_t samples,
                                     std::uint64_t seed);

}  // namespace dtinf
