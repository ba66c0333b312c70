#pragma once

// Monotone functions on the p-biased cube: monotonicity, the critical bias at
// which Pr_p[f = 1] = 1/2, and the transitive-function lower bound chain
//   1 <= (Inf(f)/n) Delta(f) <= (2 sqrt(pq)/n) Delta(f)^{3/2}
// evaluated at that bias.

#include <optional>
#include <vector>

#include "dtinf/model.hpp"
#include "dtinf/report.hpp"
#include "dtinf/tree.hpp"

namespace dtinf {

/// log2((1 + sqrt 33) / 4): exponent of the best known randomized cost of the
/// recursive AND-OR function. Annotation only.
double snir_exponent();

/// f(y) >= f(x) whenever y >= x coordinatewise; checked on all covering pairs.
/// Requires the {-1,1} cube and outputs {-1, 1}.
bool is_monotone(const TabulatedFunction& f);

struct CriticalProbability {
  double p_star;
  double lo;
  double hi;
  /// |Pr_{p*}[f = 1] - 1/2|
  double residual;
  int iterations;
};

inline constexpr double kDefaultCriticalTolerance = 1e-12;

/// Bisection on Pr_p[f=1] - 1/2 over (0,1). Throws Refused for constant or
/// non-monotone f.
CriticalProbability critical_probability(const TabulatedFunction& f,
                                         double tol = kDefaultCriticalTolerance);

/// n^{2/3} / (4pq)^{1/3}, and (v-1)^{4/3} / (16pq)^{1/3} for v-vertex graph
/// properties. Throws DomainError unless 0 < p < 1.
struct LowerBound {
  double transitive;
  std::optional<double> graph;
};
LowerBound lower_bound_formula(std::size_t n, double p, std::optional<std::size_t> vertices = {});

struct ThresholdChainOptions {
  double tol = kDefaultCriticalTolerance;
  /// Caller vouches that f is transitive.
  bool assume_transitive = false;
  /// Coordinate permutations (0-based images) to spot-check as automorphisms.
  std::vector<std::vector<std::size_t>> automorphisms;
  std::optional<std::size_t> graph_vertices;
};

struct ThresholdChainReport {
  CriticalProbability critical;
  double variance;
  std::vector<double> influences;
  double total_influence;
  double optimal_cost;
  DecisionTree witness;
  /// Every supplied permutation preserves f.
  bool automorphisms_ok;
  /// All influences agree within the slack tolerance.
  bool equal_influences;
  /// 1 <= (Inf/n) Delta
  VerificationReport influence_chain;
  /// 1 <= (2 sqrt(pq)/n) Delta^{3/2}
  VerificationReport power_chain;
  /// n^{2/3}/(4pq)^{1/3} <= Delta
  VerificationReport final_bound;
  LowerBound formula;
  double snir_exponent;
  std::vector<std::string> notes;

  bool holds() const;
};

/// Runs the chain at the critical bias. Throws Refused for non-monotone or
/// constant f, or when neither transitivity is asserted nor automorphisms
/// are supplied.
ThresholdChainReport threshold_chain(const TabulatedFunction& f, const ThresholdChainOptions& options);

}  // namespace dtinf
