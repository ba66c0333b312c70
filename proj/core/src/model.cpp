#include "dtinf/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dtinf {

namespace {

void check_labels_distinct(const std::vector<std::string>& labels, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw DomainError(what + ": empty label");
    if (!seen.insert(l).second) throw DomainError(what + ": duplicate label '" + l + "'");
  }
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += v[i];
  }
  return out;
}

}  // namespace

std::optional<std::size_t> CoordDomain::index_of(std::string_view label) const {
  for (std::size_t a = 0; a < values.size(); ++a) {
    if (values[a] == label) return a;
  }
  return std::nullopt;
}

CoordDomain CoordDomain::exact_domain(std::vector<std::string> values,
                                      std::vector<Rational> weights) {
  CoordDomain d;
  d.values = std::move(values);
  d.weights.reserve(weights.size());
  for (const auto& w : weights) d.weights.push_back(to_double(w));
  d.exact_weights = std::move(weights);
  for (auto& w : d.exact_weights) w.canonicalize();
  return d;
}

CoordDomain CoordDomain::float_domain(std::vector<std::string> values,
                                      std::vector<double> weights) {
  CoordDomain d;
  d.values = std::move(values);
  d.weights = std::move(weights);
  return d;
}

bool operator==(const CoordDomain& a, const CoordDomain& b) {
  return a.values == b.values && a.weights == b.weights && a.exact_weights == b.exact_weights;
}

ProductSpace::ProductSpace(std::vector<CoordDomain> coords, std::uint64_t cap)
    : coords_(std::move(coords)), cap_(cap) {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    auto& c = coords_[i];
    const std::string where = "coordinate " + std::to_string(i + 1);
    if (c.values.empty()) throw DomainError(where + ": no values");
    if (c.weights.size() != c.values.size()) {
      throw DomainError(where + ": " + std::to_string(c.values.size()) + " values but " +
                        std::to_string(c.weights.size()) + " weights");
    }
    if (c.exact() && c.exact_weights.size() != c.values.size()) {
      throw DomainError(where + ": exact weight count mismatch");
    }
    check_labels_distinct(c.values, where);
    double sum = 0.0;
    for (double w : c.weights) {
      if (!(w >= 0.0)) throw DomainError(where + ": negative weight");
      sum += w;
    }
    if (c.exact()) {
      Rational exact_sum = 0;
      for (const auto& w : c.exact_weights) {
        if (sgn(w) < 0) throw DomainError(where + ": negative weight");
        exact_sum += w;
      }
      if (exact_sum != 1) {
        // Decimal weights such as 1/3 ~ 0.333... only sum to 1 approximately.
        if (std::fabs(sum - 1.0) > kWeightSumTolerance) {
          throw DomainError(where + ": weights sum " + to_fraction_string(exact_sum) + " != 1");
        }
        c.exact_weights.clear();
      }
    } else if (std::fabs(sum - 1.0) > kWeightSumTolerance) {
      throw DomainError(where + ": weights sum " + to_decimal_string(sum) + " != 1");
    }
    exact_ = exact_ && c.exact();
  }

  strides_.assign(coords_.size(), 1);
  point_count_ = 1;
  for (std::size_t k = coords_.size(); k-- > 0;) {
    strides_[k] = point_count_;
    const auto size = static_cast<std::uint64_t>(coords_[k].size());
    if (point_count_ > cap_ / size) {
      throw CapExceeded("product space has more than " + std::to_string(cap_) + " points");
    }
    point_count_ *= size;
  }
}

ProductSpace ProductSpace::biased_cube(std::size_t n, const Rational& p, std::uint64_t cap) {
  if (p < 0 || p > 1) throw DomainError("bias p must lie in [0,1]");
  std::vector<CoordDomain> coords(n, CoordDomain::exact_domain({"-1", "1"}, {Rational(1 - p), p}));
  return ProductSpace(std::move(coords), cap);
}

ProductSpace ProductSpace::biased_cube(std::size_t n, double p, std::uint64_t cap) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bias p must lie in [0,1]");
  std::vector<CoordDomain> coords(n, CoordDomain::float_domain({"-1", "1"}, {1.0 - p, p}));
  return ProductSpace(std::move(coords), cap);
}

ProductSpace ProductSpace::biased_cube(std::size_t n, const Number& p, std::uint64_t cap) {
  if (p.is_exact()) return biased_cube(n, p.exact(), cap);
  return biased_cube(n, p.to_double(), cap);
}

bool ProductSpace::degenerate() const {
  return std::any_of(coords_.begin(), coords_.end(), [](const auto& c) { return c.size() < 2; });
}

bool ProductSpace::is_binary_cube() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const auto& c) {
    return c.size() == 2 && c.values[0] == "-1" && (c.values[1] == "1" || c.values[1] == "+1");
  });
}

std::optional<Number> ProductSpace::cube_bias() const {
  if (!is_binary_cube() || coords_.empty()) return std::nullopt;
  for (const auto& c : coords_) {
    if (c.weights != coords_.front().weights || c.exact_weights != coords_.front().exact_weights) {
      return std::nullopt;
    }
  }
  if (exact_) return Number(coords_.front().exact_weights[1]);
  return Number(coords_.front().weights[1]);
}

std::vector<std::size_t> ProductSpace::decode(PointIndex x) const {
  if (x >= point_count_) throw DomainError("point index out of range");
  std::vector<std::size_t> values(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) values[i] = value_of(x, i);
  return values;
}

PointIndex ProductSpace::encode(std::span<const std::size_t> values) const {
  if (values.size() != coords_.size()) throw DomainError("encode: wrong number of coordinates");
  PointIndex x = 0;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (values[i] >= coords_[i].size()) throw DomainError("encode: value index out of range");
    x += values[i] * strides_[i];
  }
  return x;
}

std::string ProductSpace::format_point(PointIndex x) const {
  std::string out = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) out += ',';
    out += coords_[i].values[value_of(x, i)];
  }
  return out + ")";
}

void ProductSpace::require_exact() const {
  if (!exact_) throw DomainError("product space has no exact weights; use float mode");
}

// ---------------------------------------------------------------------------

OutputSpace::OutputSpace(std::vector<std::string> labels, std::vector<double> dist,
                         std::vector<Rational> exact_dist, DistanceKind kind, std::string tag)
    : labels_(std::move(labels)),
      dist_(std::move(dist)),
      exact_dist_(std::move(exact_dist)),
      kind_(kind),
      tag_(std::move(tag)) {
  const std::size_t m = labels_.size();
  if (m == 0) throw DomainError("output space has no labels");
  check_labels_distinct(labels_, "outputs");
  if (dist_.size() != m * m) {
    throw DomainError("distance table needs " + std::to_string(m * m) + " entries, got " +
                      std::to_string(dist_.size()));
  }
  if (!exact_dist_.empty() && exact_dist_.size() != m * m) {
    throw DomainError("exact distance table has the wrong size");
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const double d = dist_[a * m + b];
      if (!(d >= 0.0)) throw DomainError("negative distance between '" + labels_[a] + "' and '" + labels_[b] + "'");
      if (a == b && d != 0.0) throw DomainError("nonzero self-distance for '" + labels_[a] + "'");
      if (d != dist_[b * m + a]) {
        throw DomainError("asymmetric distance between '" + labels_[a] + "' and '" + labels_[b] + "'");
      }
      if (exact()) {
        const auto& q = exact_dist_[a * m + b];
        if (sgn(q) < 0 || (a == b && q != 0) || q != exact_dist_[b * m + a]) {
          throw DomainError("invalid exact distance between '" + labels_[a] + "' and '" + labels_[b] + "'");
        }
      }
    }
  }
  if (kind_ == DistanceKind::metric) {
    if (auto bad = triangle_violation()) {
      throw DomainError("triangle inequality fails for ('" + labels_[(*bad)[0]] + "','" +
                        labels_[(*bad)[1]] + "','" + labels_[(*bad)[2]] +
                        "'); declare the space semimetric");
    }
  }
  std::vector<Rational> values;
  values.reserve(m);
  for (const auto& l : labels_) {
    auto q = parse_rational(l);
    if (!q) break;
    values.push_back(*q);
  }
  if (values.size() == m) numeric_ = std::move(values);
}

std::optional<std::array<std::size_t, 3>> OutputSpace::triangle_violation() const {
  const std::size_t m = labels_.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      for (std::size_t c = 0; c < m; ++c) {
        bool bad;
        if (exact()) {
          bad = exact_dist_[a * m + c] > exact_dist_[a * m + b] + exact_dist_[b * m + c];
        } else {
          const double lhs = dist_[a * m + c];
          const double rhs = dist_[a * m + b] + dist_[b * m + c];
          bad = lhs > rhs + kWeightSumTolerance * std::max(1.0, lhs);
        }
        if (bad) return std::array<std::size_t, 3>{a, b, c};
      }
    }
  }
  return std::nullopt;
}

std::optional<std::size_t> OutputSpace::index_of(std::string_view label) const {
  for (std::size_t z = 0; z < labels_.size(); ++z) {
    if (labels_[z] == label) return z;
  }
  return std::nullopt;
}

namespace {

template <class Fn>
OutputSpace from_distance(std::vector<std::string> labels, DistanceKind kind, std::string tag,
                          Fn&& exact_distance) {
  const std::size_t m = labels.size();
  std::vector<Rational> exact(m * m);
  std::vector<double> approx(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      exact[a * m + b] = exact_distance(a, b);
      approx[a * m + b] = to_double(exact[a * m + b]);
    }
  }
  return OutputSpace(std::move(labels), std::move(approx), std::move(exact), kind, std::move(tag));
}

std::vector<Rational> numeric_labels(const std::vector<std::string>& labels, const std::string& name) {
  std::vector<Rational> values;
  for (const auto& l : labels) {
    auto q = parse_rational(l);
    if (!q) throw DomainError(name + " needs numeric output labels; got '" + l + "'");
    values.push_back(*q);
  }
  return values;
}

}  // namespace

OutputSpace OutputSpace::discrete(std::vector<std::string> labels) {
  return from_distance(std::move(labels), DistanceKind::metric, "discrete",
                       [](std::size_t a, std::size_t b) { return Rational(a == b ? 0 : 1); });
}

OutputSpace OutputSpace::boolean(std::vector<std::string> labels) {
  if (labels.size() != 2) {
    throw DomainError("boolean output space needs exactly 2 labels, got: " + join(labels));
  }
  return from_distance(std::move(labels), DistanceKind::metric, "boolean",
                       [](std::size_t a, std::size_t b) { return Rational(a == b ? 0 : 2); });
}

OutputSpace OutputSpace::rho1(std::vector<std::string> labels) {
  auto v = numeric_labels(labels, "rho1");
  return from_distance(std::move(labels), DistanceKind::metric, "rho1",
                       [&](std::size_t a, std::size_t b) { return Rational(abs(v[a] - v[b])); });
}

OutputSpace OutputSpace::rho2(std::vector<std::string> labels) {
  auto v = numeric_labels(labels, "rho2");
  return from_distance(std::move(labels), DistanceKind::semimetric, "rho2",
                       [&](std::size_t a, std::size_t b) {
                         Rational d = v[a] - v[b];
                         return Rational(d * d / 2);
                       });
}

OutputSpace OutputSpace::builtin(const std::string& name, std::vector<std::string> labels) {
  if (name == "discrete") return discrete(std::move(labels));
  if (name == "boolean") return boolean(std::move(labels));
  if (name == "rho1") return rho1(std::move(labels));
  if (name == "rho2") return rho2(std::move(labels));
  throw DomainError("unknown distance '" + name + "' (expected discrete|boolean|rho1|rho2)");
}

// ---------------------------------------------------------------------------

TabulatedFunction::TabulatedFunction(std::shared_ptr<const ProductSpace> space,
                                     std::shared_ptr<const OutputSpace> outputs,
                                     std::vector<std::uint32_t> table)
    : space_(std::move(space)), outputs_(std::move(outputs)), table_(std::move(table)) {
  if (!space_ || !outputs_) throw DomainError("function needs a space and an output space");
  if (table_.size() != space_->point_count()) {
    throw DomainError("table has " + std::to_string(table_.size()) + " entries; space has " +
                      std::to_string(space_->point_count()) + " points");
  }
  for (auto z : table_) {
    if (z >= outputs_->size()) throw DomainError("table entry out of output range");
  }
}

bool TabulatedFunction::is_constant() const {
  return std::all_of(table_.begin(), table_.end(), [&](auto z) { return z == table_.front(); });
}

TabulatedFunction TabulatedFunction::with_outputs(std::shared_ptr<const OutputSpace> outputs) const {
  if (!outputs || outputs->labels() != outputs_->labels()) {
    throw DomainError("with_outputs: label sets differ");
  }
  return TabulatedFunction(space_, std::move(outputs), table_);
}

TabulatedFunction TabulatedFunction::with_space(std::shared_ptr<const ProductSpace> space) const {
  if (!space || space->dimension() != space_->dimension()) {
    throw DomainError("with_space: dimension differs");
  }
  for (std::size_t i = 0; i < space_->dimension(); ++i) {
    if (space->coord(i).values != space_->coord(i).values) {
      throw DomainError("with_space: coordinate " + std::to_string(i + 1) + " has other values");
    }
  }
  return TabulatedFunction(std::move(space), outputs_, table_);
}

bool TabulatedFunction::compatible_with(const TabulatedFunction& other) const {
  return (space_ == other.space_ || *space_ == *other.space_) &&
         (outputs_ == other.outputs_ || *outputs_ == *other.outputs_);
}

}  // namespace dtinf
