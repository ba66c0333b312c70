#include "dtinf/measures.hpp"

#include <algorithm>
#include <bit>

namespace dtinf {

namespace {

template <Scalar T>
void require_mode(const TabulatedFunction& f) {
  if constexpr (std::same_as<T, Rational>) {
    f.space().require_exact();
    if (!f.outputs().exact()) throw DomainError("output distances are not exact; use float mode");
  }
}

// Point probabilities in canonical order, built by extending one coordinate
// at a time so the cost is O(#points) rather than O(n * #points).
template <Scalar T>
std::vector<T> point_probabilities(const ProductSpace& space) {
  std::vector<T> probs{T(1)};
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto r = space.domain_size(i);
    std::vector<T> next;
    next.reserve(probs.size() * r);
    for (const auto& p : probs) {
      for (std::size_t a = 0; a < r; ++a) next.push_back(T(p * space.weight<T>(i, a)));
    }
    probs = std::move(next);
  }
  return probs;
}

template <Scalar T>
std::vector<T> real_values(const OutputSpace& outputs) {
  if (!outputs.is_real()) throw DomainError("function outputs are not real numbers");
  std::vector<T> v;
  for (const auto& q : *outputs.numeric_values()) v.push_back(from_rational<T>(q));
  return v;
}

}  // namespace

template <Scalar T>
std::vector<T> output_distribution(const TabulatedFunction& f) {
  require_mode<T>(f);
  const auto probs = point_probabilities<T>(f.space());
  std::vector<T> dist(f.outputs().size(), T(0));
  for (PointIndex x = 0; x < probs.size(); ++x) dist[f(x)] += probs[x];
  return dist;
}

template <Scalar T>
T variation(const TabulatedFunction& f) {
  const auto pi = output_distribution<T>(f);
  const auto& outs = f.outputs();
  T total = T(0);
  for (std::size_t z = 0; z < pi.size(); ++z) {
    if (pi[z] == 0) continue;
    for (std::size_t w = 0; w < pi.size(); ++w) {
      if (z == w || pi[w] == 0) continue;
      total += pi[z] * pi[w] * outs.distance<T>(z, w);
    }
  }
  return total;
}

template <Scalar T>
T influence(const TabulatedFunction& f, std::size_t i) {
  require_mode<T>(f);
  const auto& space = f.space();
  if (i >= space.dimension()) {
    throw DomainError("coordinate " + std::to_string(i + 1) + " out of range");
  }
  const auto probs = point_probabilities<T>(space);
  const auto& outs = f.outputs();
  const auto r = space.domain_size(i);
  T total = T(0);
  for (PointIndex x = 0; x < probs.size(); ++x) {
    if (probs[x] == 0) continue;
    const auto here = space.value_of(x, i);
    T inner = T(0);
    for (std::size_t a = 0; a < r; ++a) {
      if (a == here) continue;
      const auto z = f(x);
      const auto w = f(space.with_value(x, i, a));
      if (z == w) continue;
      inner += space.weight<T>(i, a) * outs.distance<T>(z, w);
    }
    if (inner != 0) total += probs[x] * inner;
  }
  return total;
}

template <Scalar T>
InfluenceVector<T> influences(const TabulatedFunction& f) {
  InfluenceVector<T> iv{{}, f.outputs().tag(), T(0), T(0)};
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    iv.values.push_back(influence<T>(f, i));
    iv.total += iv.values.back();
    if (iv.values.back() > iv.max) iv.max = iv.values.back();
  }
  return iv;
}

template <Scalar T>
T mean_distance(const TabulatedFunction& f, const TabulatedFunction& g) {
  if (!f.compatible_with(g)) throw DomainError("functions live on different spaces");
  require_mode<T>(f);
  const auto probs = point_probabilities<T>(f.space());
  T total = T(0);
  for (PointIndex x = 0; x < probs.size(); ++x) {
    if (f(x) != g(x)) total += probs[x] * f.outputs().distance<T>(f(x), g(x));
  }
  return total;
}

template <Scalar T>
T covariation(const TabulatedFunction& f, const TabulatedFunction& g) {
  if (!f.compatible_with(g)) throw DomainError("functions live on different spaces");
  const auto pf = output_distribution<T>(f);
  const auto pg = output_distribution<T>(g);
  const auto& outs = f.outputs();
  T cross = T(0);
  for (std::size_t z = 0; z < pf.size(); ++z) {
    for (std::size_t w = 0; w < pg.size(); ++w) {
      if (z != w && pf[z] != 0 && pg[w] != 0) cross += pf[z] * pg[w] * outs.distance<T>(z, w);
    }
  }
  return T(cross - mean_distance<T>(f, g));
}

template <Scalar T>
T expectation(const TabulatedFunction& f) {
  const auto values = real_values<T>(f.outputs());
  const auto pi = output_distribution<T>(f);
  T total = T(0);
  for (std::size_t z = 0; z < pi.size(); ++z) total += pi[z] * values[z];
  return total;
}

template <Scalar T>
T covariance(const TabulatedFunction& f, const TabulatedFunction& g) {
  if (!(f.space() == g.space())) throw DomainError("functions live on different spaces");
  const auto vf = real_values<T>(f.outputs());
  const auto vg = real_values<T>(g.outputs());
  const auto probs = [&] {
    if constexpr (std::same_as<T, Rational>) f.space().require_exact();
    return point_probabilities<T>(f.space());
  }();
  T ef = T(0), eg = T(0), efg = T(0);
  for (PointIndex x = 0; x < probs.size(); ++x) {
    const auto& a = vf[f(x)];
    const auto& b = vg[g(x)];
    ef += probs[x] * a;
    eg += probs[x] * b;
    efg += probs[x] * a * b;
  }
  return T(efg - ef * eg);
}

template <Scalar T>
T to_flip_convention(const T& influence, const T& p) {
  const T scale = T(4) * p * (T(1) - p);
  if (scale == 0) throw DomainError("flip convention undefined at p in {0, 1}");
  return T(influence / scale);
}

std::size_t plus_one_index(const OutputSpace& outputs) {
  if (outputs.size() != 2) throw DomainError("boolean function needs exactly two output labels");
  if (auto z = outputs.index_of("1")) return *z;
  if (auto z = outputs.index_of("+1")) return *z;
  throw DomainError("boolean outputs must include the label 1");
}

BiasPolynomial bias_polynomial(const TabulatedFunction& f) {
  if (!f.space().is_binary_cube()) throw DomainError("bias polynomial needs the {-1,1} cube");
  const auto one = plus_one_index(f.outputs());
  const auto n = f.dimension();
  BiasPolynomial poly{std::vector<std::uint64_t>(n + 1, 0)};
  for (PointIndex x = 0; x < f.space().point_count(); ++x) {
    if (f(x) == one) ++poly.counts[static_cast<std::size_t>(std::popcount(x))];
  }
  return poly;
}

template <Scalar T>
T BiasPolynomial::evaluate(const T& p) const {
  const auto n = dimension();
  const T q = T(1) - p;
  T total = T(0);
  for (std::size_t k = 0; k <= n; ++k) {
    if (counts[k] == 0) continue;
    T term = T(1);
    for (std::size_t j = 0; j < k; ++j) term *= p;
    for (std::size_t j = k; j < n; ++j) term *= q;
    if constexpr (std::same_as<T, Rational>) {
      total += term * Rational(mpz_class(std::to_string(counts[k])));
    } else {
      total += term * static_cast<double>(counts[k]);
    }
  }
  return total;
}

TabulatedFunction as_rho1(const TabulatedFunction& f) {
  return f.with_outputs(std::make_shared<const OutputSpace>(OutputSpace::rho1(f.outputs().labels())));
}

TabulatedFunction as_rho2(const TabulatedFunction& f) {
  return f.with_outputs(std::make_shared<const OutputSpace>(OutputSpace::rho2(f.outputs().labels())));
}

#define DTINF_INSTANTIATE(T)                                                        \
  template std::vector<T> output_distribution<T>(const TabulatedFunction&);         \
  template T variation<T>(const TabulatedFunction&);                                \
  template T influence<T>(const TabulatedFunction&, std::size_t);                   \
  template InfluenceVector<T> influences<T>(const TabulatedFunction&);              \
  template T covariation<T>(const TabulatedFunction&, const TabulatedFunction&);    \
  template T mean_distance<T>(const TabulatedFunction&, const TabulatedFunction&);  \
  template T expectation<T>(const TabulatedFunction&);                              \
  template T covariance<T>(const TabulatedFunction&, const TabulatedFunction&);     \
  template T to_flip_convention<T>(const T&, const T&);                             \
  template T BiasPolynomial::evaluate<T>(const T&) const;

DTINF_INSTANTIATE(Rational)
DTINF_INSTANTIATE(double)

#undef DTINF_INSTANTIATE

}  // namespace dtinf
