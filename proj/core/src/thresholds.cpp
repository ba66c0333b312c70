#include "dtinf/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"

namespace dtinf {

double snir_exponent() { return std::log2((1.0 + std::sqrt(33.0)) / 4.0); }

bool is_monotone(const TabulatedFunction& f) {
  const auto& space = f.space();
  if (!space.is_binary_cube()) throw DomainError("monotonicity needs the {-1,1} cube");
  const auto one = plus_one_index(f.outputs());
  for (PointIndex x = 0; x < space.point_count(); ++x) {
    if (f(x) != one) continue;
    // f(x) = 1: raising any -1 coordinate must keep f = 1.
    for (std::size_t i = 0; i < space.dimension(); ++i) {
      if (space.value_of(x, i) == 0 && f(space.with_value(x, i, 1)) != one) return false;
    }
  }
  return true;
}

CriticalProbability critical_probability(const TabulatedFunction& f, double tol) {
  if (f.is_constant()) throw Refused("critical probability undefined for a constant function");
  if (!is_monotone(f)) throw Refused("critical probability needs a monotone function");
  const auto poly = bias_polynomial(f);
  auto excess = [&](double p) { return poly.evaluate<double>(p) - 0.5; };
  CriticalProbability c{0.5, 0.0, 1.0, 1.0, 0};
  while (c.iterations < 200) {
    c.p_star = 0.5 * (c.lo + c.hi);
    const double e = excess(c.p_star);
    c.residual = std::fabs(e);
    ++c.iterations;
    if (c.residual <= tol && c.lo < c.p_star && c.p_star < c.hi) break;
    if (e < 0) {
      c.lo = c.p_star;
    } else {
      c.hi = c.p_star;
    }
    if (!(c.lo < c.hi) || c.hi - c.lo < 1e-17) break;
  }
  return c;
}

LowerBound lower_bound_formula(std::size_t n, double p, std::optional<std::size_t> vertices) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("lower bound needs 0 < p < 1");
  const double pq = p * (1.0 - p);
  LowerBound b{std::pow(static_cast<double>(n), 2.0 / 3.0) / std::cbrt(4.0 * pq), std::nullopt};
  if (vertices) {
    if (*vertices < 1) throw DomainError("graph needs at least one vertex");
    b.graph = std::pow(static_cast<double>(*vertices - 1), 4.0 / 3.0) / std::cbrt(16.0 * pq);
  }
  return b;
}

bool ThresholdChainReport::holds() const {
  return influence_chain.holds && power_chain.holds && final_bound.holds && automorphisms_ok;
}

ThresholdChainReport threshold_chain(const TabulatedFunction& f, const ThresholdChainOptions& options) {
  if (!options.assume_transitive && options.automorphisms.empty()) {
    throw Refused("transitivity must be asserted or automorphisms supplied");
  }
  const auto critical = critical_probability(f, options.tol);
  const double p = critical.p_star;
  const double q = 1.0 - p;
  const auto n = f.dimension();
  const double dn = static_cast<double>(n);
  auto at_p = f.with_space(std::make_shared<const ProductSpace>(
      ProductSpace::biased_cube(n, p, f.space().cap())));

  const auto iv = influences<double>(at_p);
  auto best = optimal_expected_cost<double>(at_p);

  ThresholdChainReport r{critical,
                    variation<double>(at_p),
                    iv.values,
                    iv.total,
                    best.cost,
                    std::move(best.witness),
                    true,
                    true,
                    {},
                    {},
                    {},
                    lower_bound_formula(n, p, options.graph_vertices),
                    snir_exponent(),
                    {}};

  for (const auto& perm : options.automorphisms) {
    if (perm.size() != n) throw DomainError("automorphism has the wrong length");
    for (PointIndex x = 0; x < at_p.space().point_count() && r.automorphisms_ok; ++x) {
      auto values = at_p.space().decode(x);
      std::vector<std::size_t> moved(n);
      for (std::size_t i = 0; i < n; ++i) moved[perm[i]] = values[i];
      if (at_p(at_p.space().encode(moved)) != at_p(x)) r.automorphisms_ok = false;
    }
  }
  if (!r.automorphisms_ok) r.notes.push_back("a supplied permutation is not an automorphism of f");

  const auto [lo, hi] = std::minmax_element(iv.values.begin(), iv.values.end());
  r.equal_influences = *hi - *lo <= kFloatSlack;
  if (!r.equal_influences) {
    r.notes.push_back("influences are not all equal; f is not transitive");
  }

  r.influence_chain = make_report<double>("threshold-influence-chain", 1.0,
                                          (iv.total / dn) * r.optimal_cost);
  r.power_chain = make_report<double>("threshold-power-chain", 1.0,
                                      (2.0 * std::sqrt(p * q) / dn) * std::pow(r.optimal_cost, 1.5));
  r.final_bound = make_report<double>("threshold-bound", r.formula.transitive, r.optimal_cost);
  if (r.formula.graph) {
    r.notes.push_back("graph-property form: (v-1)^{4/3}/(16pq)^{1/3} = " +
                      to_short_string(*r.formula.graph));
  }
  r.notes.push_back("critical p* = " + to_short_string(p, 12) + " (residual " +
                    to_short_string(critical.residual, 3) + ")");
  return r;
}

}  // namespace dtinf
