#pragma once

// Minimum expected cost Delta(f) and minimum depth D(f) over all decision
// trees computing f, with witness trees, plus a brute-force enumerator of
// decision trees used as an oracle on small binary cubes.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtinf/model.hpp"
#include "dtinf/tree.hpp"

namespace dtinf {

/// A restriction of f: coordinates fixed by `assignment` are gone, and the
/// table runs over the free coordinates (ascending, last fastest).
class Subfunction {
 public:
  static Subfunction of(const TabulatedFunction& f);
  /// Applies a partial assignment (nullopt = free) to f.
  static Subfunction restriction(const TabulatedFunction& f,
                                 const std::vector<std::optional<std::size_t>>& assignment);

  const std::vector<std::size_t>& free() const { return free_; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  bool is_constant() const;

  /// Fixes free coordinate at position `pos` to value index `a`.
  Subfunction restrict(std::size_t pos, std::size_t a, const ProductSpace& space) const;
  /// Whether the table changes along free position `pos`.
  bool depends_on(std::size_t pos, const ProductSpace& space) const;
  /// Drops every free coordinate the table does not depend on.
  Subfunction reduced(const ProductSpace& space) const;

  /// Key identifying the subfunction up to renaming of free coordinates that
  /// share a class: class of each free coordinate, then the table.
  std::string signature(const std::vector<std::uint32_t>& coord_class) const;

 private:
  std::vector<std::size_t> free_;
  std::vector<std::uint32_t> table_;
};

/// Coordinates with identical value count and weights share a class.
std::vector<std::uint32_t> weight_classes(const ProductSpace& space);

/// Signature of f restricted by `assignment`, reduced to relevant coordinates.
std::string restriction_signature(const TabulatedFunction& f,
                                  const std::vector<std::optional<std::size_t>>& assignment);

struct SolverLimits {
  /// Memo entries allowed before CapExceeded is thrown.
  std::size_t max_states = std::size_t{1} << 25;
};

template <Scalar T>
struct OptimalCost {
  T cost;
  DecisionTree witness;
  std::size_t states;
};

/// Delta(f) = min over trees T computing f of E[#queries]. Ties between
/// coordinates go to the lowest index.
template <Scalar T>
OptimalCost<T> optimal_expected_cost(const TabulatedFunction& f, SolverLimits limits = {});

struct OptimalDepth {
  std::size_t depth;
  DecisionTree witness;
  std::size_t states;
};

/// D(f) = min over trees computing f of the worst-case number of queries.
OptimalDepth optimal_depth(const TabulatedFunction& f, SolverLimits limits = {});

/// Largest dimension enumerate_all_ddts accepts.
inline constexpr std::size_t kMaxEnumerationDimension = 4;

/// Calls `visit` on every tree computing f that only queries coordinates the
/// current restriction depends on (so constant restrictions are leaves).
/// Refuses (throws Refused) unless f is on a binary space with n <= 4.
void for_each_ddt(const TabulatedFunction& f, const std::function<void(const DecisionTree&)>& visit);

std::vector<DecisionTree> enumerate_all_ddts(const TabulatedFunction& f);

std::uint64_t count_ddts(const TabulatedFunction& f);

}  // namespace dtinf
