#pragma once

// Exact probabilistic functionals of tabulated functions: variation,
// influences under any (semi)metric, covariation, covariance, and the bias
// polynomial Pr_p[f = 1] of a function on the binary cube.
//
// Influences use the rerandomization convention: coordinate i is redrawn from
// its own marginal, so for boolean f on the p-biased cube
// Inf_i(f) = 2 Pr[f(x) != f(x^(i))] = 4pq * Pr[x is pivotal for i].

#include <cstdint>
#include <string>
#include <vector>

#include "dtinf/model.hpp"

namespace dtinf {

template <Scalar T>
struct InfluenceVector {
  std::vector<T> values;
  /// Output-space tag of the distance used ("boolean", "rho2", ...).
  std::string metric_tag;
  T total;
  T max;
};

/// Output distribution: Pr[f = z] for every output index z.
template <Scalar T>
std::vector<T> output_distribution(const TabulatedFunction& f);

/// E_{x,y}[d(f(x), f(y))] for independent x, y.
template <Scalar T>
T variation(const TabulatedFunction& f);

/// E[d(f(x), f(x^(i)))] with coordinate i rerandomized.
template <Scalar T>
T influence(const TabulatedFunction& f, std::size_t i);

template <Scalar T>
InfluenceVector<T> influences(const TabulatedFunction& f);

/// E_{x,y}[d(f(x), g(y))] - E_x[d(f(x), g(x))].
template <Scalar T>
T covariation(const TabulatedFunction& f, const TabulatedFunction& g);

/// E_x[d(f(x), g(x))].
template <Scalar T>
T mean_distance(const TabulatedFunction& f, const TabulatedFunction& g);

/// Expectation of a real-valued function.
template <Scalar T>
T expectation(const TabulatedFunction& f);

/// E[fg] - E[f]E[g] for real-valued functions on the same space.
template <Scalar T>
T covariance(const TabulatedFunction& f, const TabulatedFunction& g);

/// Converts a rerandomization-convention influence at bias p into the
/// flip convention Pr[x pivotal], i.e. divides by 4p(1-p).
template <Scalar T>
T to_flip_convention(const T& influence, const T& p);

/// c_k = #points with exactly k coordinates equal to +1 on which f = +1.
struct BiasPolynomial {
  std::vector<std::uint64_t> counts;

  std::size_t dimension() const { return counts.empty() ? 0 : counts.size() - 1; }

  /// Pr_p[f = 1] = sum_k c_k p^k (1-p)^(n-k).
  template <Scalar T>
  T evaluate(const T& p) const;
};

/// f must live on the binary cube with boolean outputs containing "1".
BiasPolynomial bias_polynomial(const TabulatedFunction& f);

/// Output index of "+1" ("1" or "+1") in a two-label output space.
std::size_t plus_one_index(const OutputSpace& outputs);

/// Reinterprets a real-labelled function under rho1 / rho2 distances.
TabulatedFunction as_rho1(const TabulatedFunction& f);
TabulatedFunction as_rho2(const TabulatedFunction& f);

/// True when `T` arithmetic is available for f (always for double).
template <Scalar T>
bool supports(const TabulatedFunction& f) {
  if constexpr (std::same_as<T, Rational>) {
    return f.exact();
  } else {
    return true;
  }
}

}  // namespace dtinf
