#include "dtinf/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtinf/io.hpp"
#include "dtinf/measures.hpp"
#include "dtinf/optimal.hpp"
#include "dtinf/thresholds.hpp"

namespace dtinf {

namespace {

void require_computes(const DecisionTree& tree, const TabulatedFunction& f) {
  if (!computes(tree, f)) throw DomainError("tree does not compute the function");
}

void require_computes(const RandomizedTree& rt, const TabulatedFunction& f) {
  if (!computes(rt, f)) throw DomainError("a branch of the randomized tree does not compute f");
}

template <Scalar T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <Scalar T>
bool less_than(const T& a, const T& b) {
  if constexpr (std::same_as<T, Rational>) {
    return a < b;
  } else {
    return a < b - kFloatSlack;
  }
}

template <Scalar T>
bool is_zero(const T& a) {
  if constexpr (std::same_as<T, Rational>) {
    return sgn(a) == 0;
  } else {
    return a == 0.0;
  }
}

nlohmann::json tree_witness(const DecisionTree& tree, const TabulatedFunction& f) {
  return nlohmann::json{{"tree", format_tree(tree, f.space(), f.outputs())}};
}

}  // namespace

template <Scalar T>
VerificationReport check_main(const DecisionTree& tree, const TabulatedFunction& f) {
  if (f.outputs().kind() != DistanceKind::metric) {
    throw Refused("output space is semimetric; use the semimetric check");
  }
  require_computes(tree, f);
  const auto d = delta<T>(tree, f.space());
  const auto inf = influences<T>(f);
  auto r = make_report<T>("main", variation<T>(f), dot(d, inf.values));
  if (!r.holds) r.witness = tree_witness(tree, f);
  return r;
}

template <Scalar T>
VerificationReport check_imax_corollary(const TabulatedFunction& f) {
  if (f.is_constant()) {
    return make_skipped_report("imax-corollary", "constant function: Inf_max = 0", mode_of<T>());
  }
  const auto inf = influences<T>(f);
  const auto best = optimal_expected_cost<T>(f);
  auto r = make_report<T>("imax-corollary", T(variation<T>(f) / inf.max), best.cost);
  r.witness = tree_witness(best.witness, f);
  return r;
}

template <Scalar T>
VerificationReport check_two_function(const RandomizedTree& rt, const TabulatedFunction& f,
                                      const TabulatedFunction& g) {
  if (!f.compatible_with(g)) throw DomainError("f and g live on different spaces");
  if (f.outputs().kind() != DistanceKind::metric) {
    throw Refused("output space is semimetric; use the semimetric check");
  }
  require_computes(rt, f);
  const auto d = delta_randomized<T>(rt, f.space());
  return make_report<T>("two-function", abs_value<T>(covariation<T>(f, g)),
                        dot(d, influences<T>(g).values));
}

template <Scalar T>
VerificationReport check_covariance(const RandomizedTree& rt, const TabulatedFunction& f,
                                    const TabulatedFunction& g) {
  if (!(f.space() == g.space())) throw DomainError("f and g live on different spaces");
  if (!f.outputs().is_real() || !g.outputs().is_real()) {
    throw DomainError("covariance needs real-valued f and g");
  }
  for (const auto& v : *f.outputs().numeric_values()) {
    if (abs(v) > 1) throw DomainError("f takes a value outside [-1, 1]");
  }
  require_computes(rt, f);
  const auto d = delta_randomized<T>(rt, f.space());
  return make_report<T>("covariance", abs_value<T>(covariance<T>(f, g)),
                        dot(d, influences<T>(as_rho1(g)).values));
}

template <Scalar T>
DefectResult<T> defect(const OutputSpace& outputs, std::size_t k, std::uint64_t cap) {
  if (k < 1) throw DomainError("defect needs k >= 1");
  const std::size_t m = outputs.size();
  if (m == 0) throw DomainError("empty output space");
  const double work = static_cast<double>(k) * static_cast<double>(m) * m * m;
  if (work > static_cast<double>(cap)) throw CapExceeded("defect table exceeds the cap");

  auto rho = [&](std::size_t a, std::size_t b) -> const T& { return outputs.distance<T>(a, b); };

  // best[a*m+c]: least sum over t-step sequences from a to c; pred[t] keeps
  // the next-to-last element for t >= 2.
  std::vector<T> best(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t c = 0; c < m; ++c) best[a * m + c] = rho(a, c);
  std::vector<std::vector<std::size_t>> pred(k + 1);
  for (std::size_t t = 2; t <= k; ++t) {
    std::vector<T> next(m * m);
    pred[t].assign(m * m, 0);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t c = 0; c < m; ++c) {
        T lo = T(best[a * m] + rho(0, c));
        std::size_t arg = 0;
        for (std::size_t b = 1; b < m; ++b) {
          T cand = T(best[a * m + b] + rho(b, c));
          if (cand < lo) {
            lo = cand;
            arg = b;
          }
        }
        next[a * m + c] = lo;
        pred[t][a * m + c] = arg;
      }
    }
    best = std::move(next);
  }

  auto sequence = [&](std::size_t a, std::size_t c) {
    std::vector<std::size_t> seq(k + 1);
    seq[0] = a;
    seq[k] = c;
    for (std::size_t t = k; t >= 2; --t) seq[t - 1] = pred[t][a * m + seq[t]];
    return seq;
  };

  DefectResult<T> result{false, T(1), std::vector<std::size_t>(k + 1, 0)};
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t c = 0; c < m; ++c) {
      const T& num = rho(a, c);
      const T& den = best[a * m + c];
      if (is_zero(num)) continue;  // ratio 0, or 0/0 = 1
      if (is_zero(den)) {
        return DefectResult<T>{true, T(0), sequence(a, c)};
      }
      T ratio = T(num / den);
      if (ratio > result.value) {
        result.value = ratio;
        result.sequence = sequence(a, c);
      }
    }
  }
  return result;
}

template <Scalar T>
VerificationReport check_semimetric(const RandomizedTree& rt, const TabulatedFunction& f,
                                    const TabulatedFunction& g) {
  if (!f.compatible_with(g)) throw DomainError("f and g live on different spaces");
  require_computes(rt, f);
  const std::size_t k = std::max<std::size_t>(1, max_depth(rt));
  const T lhs = abs_value<T>(covariation<T>(f, g));
  const T sum = dot(delta_randomized<T>(rt, f.space()), influences<T>(g).values);
  const auto def = defect<T>(f.outputs(), k, f.space().cap());
  const std::string id = "semimetric";
  // An infinite defect gives no bound, even when the influence sum is 0.
  if (def.unbounded && !(is_zero(sum) && is_zero(lhs))) {
    auto r = make_unbounded_report(id, Number(lhs), mode_of<T>());
    r.notes.push_back("Def_" + std::to_string(k) + " is unbounded, sum delta_i Inf_i = " +
                      Number(sum).to_string());
    return r;
  }
  const T factor = def.unbounded ? T(1) : def.value;
  auto r = make_report<T>(id, lhs, T(factor * sum));
  r.notes.push_back("k = " + std::to_string(k) + ", Def_k = " +
                    (def.unbounded ? std::string("unbounded") : Number(def.value).to_string()) +
                    ", sum delta_i Inf_i = " + Number(sum).to_string());
  return r;
}

template <Scalar T>
RealCorollaryReports check_real_corollary(const RandomizedTree& rt, const TabulatedFunction& f) {
  require_computes(rt, f);
  const auto f2 = as_rho2(f);
  const std::size_t k = std::max<std::size_t>(1, max_depth(rt));
  const T var = variation<T>(f2);
  const auto inf = influences<T>(f2);
  const T sum = dot(delta_randomized<T>(rt, f.space()), inf.values);
  const T kk = T(static_cast<long>(k));
  RealCorollaryReports out{make_report<T>("real-corollary", var, T(kk * sum)),
                           make_report<T>("real-corollary-max-influence", T(var / (kk * kk)),
                                          inf.max),
                           k};
  out.main.notes.push_back("k = " + std::to_string(k) + ", sum delta_i Inf_i = " +
                           Number(sum).to_string());
  return out;
}

template <Scalar T>
VerificationReport check_efron_stein(const TabulatedFunction& f) {
  const auto& tag = f.outputs().tag();
  if (tag != "boolean" && tag != "rho2") {
    throw Refused("Efron-Stein is checked for the boolean metric and rho2 only");
  }
  return make_report<T>("efron-stein", variation<T>(f), influences<T>(f).total);
}

template <Scalar T>
VerificationReport check_improvement(const DecisionTree& tree, const TabulatedFunction& f) {
  require_computes(tree, f);
  const auto inf = influences<T>(f);
  return make_report<T>("improvement", dot(delta<T>(tree, f.space()), inf.values), inf.total);
}

template <Scalar T>
VerificationReport check_separated_equality(const DecisionTree& tree,
                                            const TabulatedFunction& f) {
  require_computes(tree, f);
  if (auto w = separation_witness(tree, f.space())) {
    throw Refused("tree is not separated: nodes " + format_node_path(w->first_node) + " and " +
                  format_node_path(w->second_node) + " disagree at " +
                  f.space().format_point(w->point));
  }
  const auto d = delta<T>(tree, f.space());
  auto r = make_report<T>("separated-equality", variation<T>(f), dot(d, influences<T>(f).values));
  r.holds = r.equality;
  if (!r.holds) r.witness = tree_witness(tree, f);
  return r;
}

template <Scalar T>
VerificationReport check_approximation_bound(const RandomizedTree& rt,
                                             const TabulatedFunction& f,
                                             const TabulatedFunction& g) {
  if (!f.compatible_with(g)) throw DomainError("f and g live on different spaces");
  require_computes(rt, f);
  const auto inf = influences<T>(g);
  if (is_zero(inf.max)) {
    return make_skipped_report("approximation", "g is constant: Inf_max(g) = 0", mode_of<T>());
  }
  const T eps = mean_distance<T>(f, g);
  const T lhs = T((variation<T>(g) - 2 * eps) / inf.max);
  const auto d = delta_randomized<T>(rt, f.space());
  T cost = T(0);
  for (const auto& v : d) cost += v;
  auto r = make_report<T>("approximation", lhs, cost);
  r.notes.push_back("eps = " + Number(eps).to_string());
  r.notes.push_back("Dev[g] is undefined in the source; Vr[g] is used in its place");
  return r;
}

template <Scalar T>
HybridTrace<T> hybrid_trace(const DecisionTree& tree, const TabulatedFunction& f, PointIndex x,
                            PointIndex y) {
  require_computes(tree, f);
  const auto& space = f.space();
  if (x >= space.point_count() || y >= space.point_count()) {
    throw DomainError("point index out of range");
  }
  HybridTrace<T> h{x, y, evaluate(tree, space, x).queried, {}, {}, true};
  const std::size_t s = h.query_sequence.size();
  for (std::size_t t = 0; t <= s; ++t) {
    PointIndex u = y;
    for (std::size_t r = t; r < s; ++r) {
      const auto i = h.query_sequence[r];
      u = space.with_value(u, i, space.value_of(x, i));
    }
    h.hybrids.push_back(u);
  }
  if (h.hybrids.back() != y) throw Error("hybrid u[s] differs from y");
  if (f(h.hybrids.front()) != f(x)) throw Error("f(u[0]) differs from f(x)");
  const auto& outs = f.outputs();
  T total = T(0);
  for (std::size_t t = 1; t <= s; ++t) {
    h.step_distances.push_back(outs.distance<T>(f(h.hybrids[t - 1]), f(h.hybrids[t])));
    total += h.step_distances.back();
  }
  h.endpoint_bounded = !less_than<T>(total, outs.distance<T>(f(x), f(y)));
  return h;
}

template <Scalar T>
T hybrid_aggregate(const DecisionTree& tree, const TabulatedFunction& f) {
  require_computes(tree, f);
  const auto& space = f.space();
  const auto& outs = f.outputs();
  const auto n = space.point_count();
  std::vector<T> prob(n);
  for (PointIndex x = 0; x < n; ++x) prob[x] = point_probability<T>(space, x);
  T total = T(0);
  for (PointIndex x = 0; x < n; ++x) {
    const auto queried = evaluate(tree, space, x).queried;
    for (PointIndex y = 0; y < n; ++y) {
      // Walk from u[0] towards y, replacing one x-coordinate at a time.
      PointIndex u = y;
      for (auto i : queried) u = space.with_value(u, i, space.value_of(x, i));
      T steps = T(0);
      for (auto i : queried) {
        const PointIndex next = space.with_value(u, i, space.value_of(y, i));
        steps += outs.distance<T>(f(u), f(next));
        u = next;
      }
      total += prob[x] * prob[y] * steps;
    }
  }
  return total;
}

VerificationReport check_os_inequality(const TabulatedFunction& f) {
  const auto bias = f.space().cube_bias();
  if (!bias) throw DomainError("OS inequality needs a biased cube with a common p");
  if (!is_monotone(f)) throw Refused("OS inequality needs a monotone function");
  const double p = bias->to_double();
  const double total = influences<double>(f).total;
  const double cost = optimal_expected_cost<double>(f).cost;
  return make_report<double>("os", total, 2.0 * std::sqrt(p * (1.0 - p) * cost), kOsTolerance);
}

Number talagrand_diagnostic(const TabulatedFunction& f) {
  double sum = 0.0;
  for (double v : influences<double>(f).values) {
    if (v <= 0.0) continue;
    if (v >= 1.0) return Number::infinity();
    sum += v / std::log(1.0 / v);
  }
  return Number(sum);
}

double binary_entropy(double p) {
  auto term = [](double x) { return x <= 0.0 ? 0.0 : -x * std::log2(x); };
  return term(p) + term(1.0 - p);
}

VerificationReport check_entropy_bound(const DecisionTree& tree, const TabulatedFunction& f,
                                       double optimal_cost, double tolerance) {
  const auto bias = f.space().cube_bias();
  if (!bias) throw DomainError("entropy bound needs a biased cube with a common p");
  const double p = bias->to_double();
  if (!(p > 0.0 && p < 1.0)) throw DomainError("entropy bound needs 0 < p < 1");
  require_computes(tree, f);
  const double rhs = std::log2(static_cast<double>(tree.leaf_count())) / binary_entropy(p);
  return make_report<double>("entropy", optimal_cost, rhs, tolerance);
}

VerificationReport check_entropy_bound(const DecisionTree& tree, const TabulatedFunction& f) {
  return check_entropy_bound(tree, f, optimal_expected_cost<double>(f).cost);
}

#define DTINF_INSTANTIATE(T)                                                                      \
  template VerificationReport check_main<T>(const DecisionTree&, const TabulatedFunction&);      \
  template VerificationReport check_imax_corollary<T>(const TabulatedFunction&);                 \
  template VerificationReport check_two_function<T>(const RandomizedTree&,                       \
                                                    const TabulatedFunction&,                    \
                                                    const TabulatedFunction&);                   \
  template VerificationReport check_covariance<T>(const RandomizedTree&, const TabulatedFunction&, \
                                                  const TabulatedFunction&);                     \
  template DefectResult<T> defect<T>(const OutputSpace&, std::size_t, std::uint64_t);            \
  template VerificationReport check_semimetric<T>(const RandomizedTree&, const TabulatedFunction&, \
                                                  const TabulatedFunction&);                     \
  template RealCorollaryReports check_real_corollary<T>(const RandomizedTree&,                   \
                                                        const TabulatedFunction&);               \
  template VerificationReport check_efron_stein<T>(const TabulatedFunction&);                    \
  template VerificationReport check_improvement<T>(const DecisionTree&, const TabulatedFunction&); \
  template VerificationReport check_separated_equality<T>(const DecisionTree&,                   \
                                                          const TabulatedFunction&);             \
  template VerificationReport check_approximation_bound<T>(                                      \
      const RandomizedTree&, const TabulatedFunction&, const TabulatedFunction&);                \
  template HybridTrace<T> hybrid_trace<T>(const DecisionTree&, const TabulatedFunction&,         \
                                          PointIndex, PointIndex);                               \
  template T hybrid_aggregate<T>(const DecisionTree&, const TabulatedFunction&);

DTINF_INSTANTIATE(Rational)
DTINF_INSTANTIATE(double)

}  // namespace dtinf
