#pragma once

// Inequality checkers. Each check returns a VerificationReport for one
// instance lhs <= rhs. T = Rational gives exact verdicts; T = double uses the
// float slack.

#include <optional>
#include <vector>

#include "dtinf/model.hpp"
#include "dtinf/report.hpp"
#include "dtinf/tree.hpp"

namespace dtinf {

/// Vr[f] <= sum_i delta_i(T) Inf_i(f). Throws DomainError when T does not
/// compute f and Refused for semimetric outputs.
template <Scalar T>
VerificationReport check_main(const DecisionTree& tree, const TabulatedFunction& f);

/// Vr[f] / Inf_max(f) <= Delta(f). Skipped for constant f.
template <Scalar T>
VerificationReport check_imax_corollary(const TabulatedFunction& f);

/// |CoVr[f,g]| <= sum_i delta_i(RT) Inf_i(g) for a metric output space.
template <Scalar T>
VerificationReport check_two_function(const RandomizedTree& rt, const TabulatedFunction& f,
                                      const TabulatedFunction& g);

/// |Cov[f,g]| <= sum_i delta_i(RT) Inf^{rho1}_i(g) for real f with range in
/// [-1, 1] and real g.
template <Scalar T>
VerificationReport check_covariance(const RandomizedTree& rt, const TabulatedFunction& f,
                                    const TabulatedFunction& g);

template <Scalar T>
struct DefectResult {
  /// Some sequence has positive endpoint distance and zero path length.
  bool unbounded = false;
  /// Def_k when bounded.
  T value;
  /// A maximizing sequence z_0, ..., z_k (output indices).
  std::vector<std::size_t> sequence;
};

/// Def_k(rho): max over z_0..z_k of rho(z_0,z_k) / sum_t rho(z_{t-1},z_t),
/// with 0/0 = 1. Throws DomainError for k < 1 and CapExceeded when
/// k * |Z|^3 exceeds `cap`.
template <Scalar T>
DefectResult<T> defect(const OutputSpace& outputs, std::size_t k,
                       std::uint64_t cap = kDefaultEnumerationCap);

/// |CoVr[f,g]| <= Def_k(rho) sum_i delta_i(RT) Inf_i(g), k = longest path in
/// the support of RT (at least 1). Unbounded defect yields a vacuous report.
template <Scalar T>
VerificationReport check_semimetric(const RandomizedTree& rt, const TabulatedFunction& f,
                                    const TabulatedFunction& g);

struct RealCorollaryReports {
  /// Var[f] <= k sum_i delta_i Inf^{rho2}_i(f)
  VerificationReport main;
  /// Var[f] / k^2 <= max_i Inf^{rho2}_i(f)
  VerificationReport max_influence;
  std::size_t k;
};

template <Scalar T>
RealCorollaryReports check_real_corollary(const RandomizedTree& rt, const TabulatedFunction& f);

/// Vr[f] <= sum_i Inf_i(f); boolean or rho2 outputs only.
template <Scalar T>
VerificationReport check_efron_stein(const TabulatedFunction& f);

/// sum_i delta_i(T) Inf_i(f) <= sum_i Inf_i(f).
template <Scalar T>
VerificationReport check_improvement(const DecisionTree& tree, const TabulatedFunction& f);

/// Vr[f] = sum_i delta_i(T) Inf_i(f) for a separated tree, metric or not.
/// The report holds only when the two sides are equal. Throws Refused when T
/// is not separated.
template <Scalar T>
VerificationReport check_separated_equality(const DecisionTree& tree, const TabulatedFunction& f);

/// (Vr[g] - 2 eps) / Inf_max(g) <= sum_i delta_i(RT), eps = E d(f(x), g(x)),
/// RT computing f.
template <Scalar T>
VerificationReport check_approximation_bound(const RandomizedTree& rt,
                                             const TabulatedFunction& f,
                                             const TabulatedFunction& g);

/// The telescoping hybrids between x and y along the path T follows on x.
template <Scalar T>
struct HybridTrace {
  PointIndex x;
  PointIndex y;
  /// i_1, ..., i_s read by T on x.
  std::vector<std::size_t> query_sequence;
  /// u[0], ..., u[s]; u[t] agrees with x on {i_r : r > t} and with y elsewhere.
  std::vector<PointIndex> hybrids;
  /// d(f(u[t-1]), f(u[t])) for t = 1..s.
  std::vector<T> step_distances;
  /// d(f(x), f(y)) <= sum of step distances.
  bool endpoint_bounded;
};

/// Throws DomainError if T does not compute f. Checks u[s] = y and
/// f(u[0]) = f(x) and throws Error if either fails.
template <Scalar T>
HybridTrace<T> hybrid_trace(const DecisionTree& tree, const TabulatedFunction& f, PointIndex x,
                            PointIndex y);

/// sum over (x, y) of mu(x) mu(y) sum_t d(f(u[t-1]), f(u[t])).
template <Scalar T>
T hybrid_aggregate(const DecisionTree& tree, const TabulatedFunction& f);

/// Inf(f) <= 2 sqrt(pq Delta(f)) at the cube's bias, in float mode with
/// slack 1e-12. Throws Refused for non-monotone f.
VerificationReport check_os_inequality(const TabulatedFunction& f);

inline constexpr double kOsTolerance = 1e-12;

/// sum_i Inf_i / ln(1/Inf_i); Inf_i = 0 contributes 0 and Inf_i >= 1 makes
/// the sum infinite.
Number talagrand_diagnostic(const TabulatedFunction& f);

/// Delta(f) <= log2(#leaves(T)) / H(p) for T computing f on a biased cube.
VerificationReport check_entropy_bound(const DecisionTree& tree, const TabulatedFunction& f,
                                       double optimal_cost, double tolerance = kOsTolerance);
VerificationReport check_entropy_bound(const DecisionTree& tree, const TabulatedFunction& f);

/// -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

}  // namespace dtinf
