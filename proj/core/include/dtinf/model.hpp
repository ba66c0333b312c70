#pragma once

// Product probability spaces, (semi)metric output spaces and tabulated
// functions between them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtinf/errors.hpp"
#include "dtinf/number.hpp"

namespace dtinf {

/// Mixed-radix index of a point; the last coordinate varies fastest.
using PointIndex = std::uint64_t;

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 24;

/// One coordinate: value labels with their probabilities. `exact_weights` is
/// empty when the weights are only known as doubles.
struct CoordDomain {
  std::vector<std::string> values;
  std::vector<double> weights;
  std::vector<Rational> exact_weights;

  std::size_t size() const { return values.size(); }
  bool exact() const { return !exact_weights.empty(); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  static CoordDomain exact_domain(std::vector<std::string> values, std::vector<Rational> weights);
  static CoordDomain float_domain(std::vector<std::string> values, std::vector<double> weights);

  friend bool operator==(const CoordDomain& a, const CoordDomain& b);
};

class ProductSpace {
 public:
  /// Validates every coordinate. Throws DomainError on bad weights or labels
  /// and CapExceeded when the point count exceeds `cap`.
  explicit ProductSpace(std::vector<CoordDomain> coords,
                        std::uint64_t cap = kDefaultEnumerationCap);

  /// {-1,+1}^n with weights {1-p, p}.
  static ProductSpace biased_cube(std::size_t n, const Rational& p,
                                  std::uint64_t cap = kDefaultEnumerationCap);
  static ProductSpace biased_cube(std::size_t n, double p,
                                  std::uint64_t cap = kDefaultEnumerationCap);
  static ProductSpace biased_cube(std::size_t n, const Number& p,
                                  std::uint64_t cap = kDefaultEnumerationCap);

  std::size_t dimension() const { return coords_.size(); }
  std::uint64_t point_count() const { return point_count_; }
  std::uint64_t cap() const { return cap_; }
  const CoordDomain& coord(std::size_t i) const { return coords_.at(i); }
  std::span<const CoordDomain> coords() const { return coords_; }
  std::size_t domain_size(std::size_t i) const { return coords_.at(i).size(); }

  /// True when every coordinate carries exact weights.
  bool exact() const { return exact_; }
  /// True when some coordinate has a single value.
  bool degenerate() const;
  /// Every coordinate has labels exactly {"-1", "1"} in that order.
  bool is_binary_cube() const;
  /// Common Pr[x_i = 1] of a binary cube whose coordinates all share it.
  std::optional<Number> cube_bias() const;

  template <Scalar T>
  const T& weight(std::size_t i, std::size_t a) const {
    if constexpr (std::same_as<T, Rational>) {
      require_exact();
      return coords_[i].exact_weights[a];
    } else {
      return coords_[i].weights[a];
    }
  }

  std::uint64_t stride(std::size_t i) const { return strides_[i]; }
  std::size_t value_of(PointIndex x, std::size_t i) const {
    return static_cast<std::size_t>((x / strides_[i]) % coords_[i].size());
  }
  PointIndex with_value(PointIndex x, std::size_t i, std::size_t a) const {
    return x - value_of(x, i) * strides_[i] + a * strides_[i];
  }

  std::vector<std::size_t> decode(PointIndex x) const;
  PointIndex encode(std::span<const std::size_t> values) const;
  /// "(-1,1,1)" style rendering using value labels.
  std::string format_point(PointIndex x) const;

  /// Throws DomainError unless exact weights are available.
  void require_exact() const;

  friend bool operator==(const ProductSpace& a, const ProductSpace& b) {
    return a.coords_ == b.coords_;
  }

 private:
  std::vector<CoordDomain> coords_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t point_count_ = 1;
  std::uint64_t cap_;
  bool exact_ = true;
};

/// Probability of one point: the product of its coordinate weights.
template <Scalar T>
T point_probability(const ProductSpace& space, PointIndex x) {
  if (x >= space.point_count()) throw DomainError("point index out of range");
  T p = T(1);
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    p *= space.weight<T>(i, space.value_of(x, i));
  }
  return p;
}

enum class DistanceKind { metric, semimetric };

/// Finite output set with a symmetric nonnegative distance table.
class OutputSpace {
 public:
  /// `exact_dist` may be empty (float-only). Throws DomainError when the
  /// table is not symmetric, has a nonzero diagonal or a negative entry,
  /// or when kind == metric and the triangle inequality fails.
  OutputSpace(std::vector<std::string> labels, std::vector<double> dist,
              std::vector<Rational> exact_dist, DistanceKind kind, std::string tag = "custom");

  /// d = 1 on distinct labels.
  static OutputSpace discrete(std::vector<std::string> labels);
  /// Two labels at distance 2, i.e. |z - z'| on {-1, 1}.
  static OutputSpace boolean(std::vector<std::string> labels = {"-1", "1"});
  /// |z - z'| on numeric labels.
  static OutputSpace rho1(std::vector<std::string> labels);
  /// (z - z')^2 / 2 on numeric labels; always tagged semimetric.
  static OutputSpace rho2(std::vector<std::string> labels);
  /// Builds one of the named distances: discrete|boolean|rho1|rho2.
  static OutputSpace builtin(const std::string& name, std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t z) const { return labels_.at(z); }
  std::optional<std::size_t> index_of(std::string_view label) const;
  DistanceKind kind() const { return kind_; }
  const std::string& tag() const { return tag_; }
  bool exact() const { return !exact_dist_.empty(); }

  /// Numeric value of every label, when all labels parse as numbers.
  const std::optional<std::vector<Rational>>& numeric_values() const { return numeric_; }
  bool is_real() const { return numeric_.has_value(); }

  template <Scalar T>
  const T& distance(std::size_t z, std::size_t w) const {
    if constexpr (std::same_as<T, Rational>) {
      if (!exact()) throw DomainError("output space '" + tag_ + "' has no exact distances");
      return exact_dist_[z * labels_.size() + w];
    } else {
      return dist_[z * labels_.size() + w];
    }
  }

  /// First triple violating d(a,c) <= d(a,b) + d(b,c), if any.
  std::optional<std::array<std::size_t, 3>> triangle_violation() const;

  friend bool operator==(const OutputSpace& a, const OutputSpace& b) {
    return a.labels_ == b.labels_ && a.dist_ == b.dist_ && a.exact_dist_ == b.exact_dist_ &&
           a.kind_ == b.kind_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::vector<Rational> exact_dist_;
  DistanceKind kind_;
  std::string tag_;
  std::optional<std::vector<Rational>> numeric_;
};

/// f : space -> outputs, stored as one output index per point.
class TabulatedFunction {
 public:
  TabulatedFunction(std::shared_ptr<const ProductSpace> space,
                    std::shared_ptr<const OutputSpace> outputs, std::vector<std::uint32_t> table);

  const ProductSpace& space() const { return *space_; }
  const OutputSpace& outputs() const { return *outputs_; }
  const std::shared_ptr<const ProductSpace>& space_ptr() const { return space_; }
  const std::shared_ptr<const OutputSpace>& outputs_ptr() const { return outputs_; }
  std::span<const std::uint32_t> table() const { return table_; }
  std::uint32_t operator()(PointIndex x) const { return table_[x]; }
  std::uint32_t at(PointIndex x) const { return table_.at(x); }
  const std::string& label_at(PointIndex x) const { return outputs_->label(table_.at(x)); }
  std::size_t dimension() const { return space_->dimension(); }

  bool is_constant() const;
  /// Both sides exact: weights and distances.
  bool exact() const { return space_->exact() && outputs_->exact(); }

  /// Same table viewed in another output space with identical labels.
  TabulatedFunction with_outputs(std::shared_ptr<const OutputSpace> outputs) const;
  /// Same table over a space of identical shape (e.g. another bias p).
  TabulatedFunction with_space(std::shared_ptr<const ProductSpace> space) const;

  /// Two functions on the same space and output space.
  bool compatible_with(const TabulatedFunction& other) const;

 private:
  std::shared_ptr<const ProductSpace> space_;
  std::shared_ptr<const OutputSpace> outputs_;
  std::vector<std::uint32_t> table_;
};

/// Builds a function by evaluating `fn` on the decoded value indices of each point.
template <class Fn>
TabulatedFunction tabulate(std::shared_ptr<const ProductSpace> space,
                           std::shared_ptr<const OutputSpace> outputs, Fn&& fn) {
  std::vector<std::uint32_t> table(space->point_count());
  for (PointIndex x = 0; x < space->point_count(); ++x) {
    table[x] = static_cast<std::uint32_t>(fn(space->decode(x)));
  }
  return TabulatedFunction(std::move(space), std::move(outputs), std::move(table));
}

}  // namespace dtinf
