#pragma once

// Deterministic and randomized decision trees over a ProductSpace, with the
// query-probability measures and the structural predicates (read-once,
// separated) that govern when the main inequality is tight.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtinf/model.hpp"
#include "dtinf/number.hpp"

namespace dtinf {

/// A leaf carries an output index; a query node reads one coordinate and has
/// one child per value of that coordinate, in value order.
class DecisionTree {
 public:
  static DecisionTree leaf(std::uint32_t label);
  static DecisionTree query(std::size_t coord, std::vector<DecisionTree> children);

  bool is_leaf() const { return children_.empty(); }
  /// Queried coordinate (0-based). Only meaningful for query nodes.
  std::size_t coord() const { return coord_; }
  /// Output index. Only meaningful for leaves.
  std::uint32_t label() const { return label_; }
  std::span<const DecisionTree> children() const { return children_; }
  const DecisionTree& child(std::size_t a) const { return children_.at(a); }

  std::size_t node_count() const;
  std::size_t leaf_count() const;

  /// Follows a path of child indices from this node.
  const DecisionTree& descend(std::span<const std::size_t> path) const;

  friend bool operator==(const DecisionTree& a, const DecisionTree& b) = default;

 private:
  DecisionTree() = default;

  std::size_t coord_ = 0;
  std::uint32_t label_ = 0;
  std::vector<DecisionTree> children_;
};

/// Throws DomainError unless every query node has one child per value of its
/// coordinate, no coordinate repeats on a root-leaf path, and every leaf label
/// indexes `outputs`.
void validate(const DecisionTree& tree, const ProductSpace& space, const OutputSpace& outputs);
void validate(const DecisionTree& tree, const ProductSpace& space);

struct Evaluation {
  std::uint32_t label;
  /// Coordinates read, in query order.
  std::vector<std::size_t> queried;
};

Evaluation evaluate(const DecisionTree& tree, const ProductSpace& space, PointIndex x);

/// Output index only; no allocation.
std::uint32_t evaluate_label(const DecisionTree& tree, const ProductSpace& space, PointIndex x);

/// True iff the tree's output equals f on every point. Throws DomainError when
/// the tree is not well formed for f's space and outputs.
bool computes(const DecisionTree& tree, const TabulatedFunction& f);

/// The function computed by a tree.
TabulatedFunction tabulate(const DecisionTree& tree, std::shared_ptr<const ProductSpace> space,
                           std::shared_ptr<const OutputSpace> outputs);

/// delta_i = Pr[tree queries coordinate i], summed over root-to-node path
/// probabilities.
template <Scalar T>
std::vector<T> delta(const DecisionTree& tree, const ProductSpace& space);

/// Same quantity by evaluating the tree on every point. Independent of the
/// path-summation route; used as a cross-check.
template <Scalar T>
std::vector<T> delta_by_enumeration(const DecisionTree& tree, const ProductSpace& space);

/// Expected number of queries, sum of delta.
template <Scalar T>
T expected_cost(const DecisionTree& tree, const ProductSpace& space);

/// Longest root-leaf path.
std::size_t depth(const DecisionTree& tree);

bool is_read_once(const DecisionTree& tree);

/// Two subtrees that disagree on a point while reading a common coordinate.
/// Nodes are given as child-index paths from the root.
struct SeparationWitness {
  std::vector<std::size_t> first_node;
  std::vector<std::size_t> second_node;
  PointIndex point;
  std::size_t shared_coord;
  std::uint32_t first_label;
  std::uint32_t second_label;
};

/// First violation of separatedness, scanning every ordered pair of nodes
/// (including a node with itself and with its ancestors) and every point.
std::optional<SeparationWitness> separation_witness(const DecisionTree& tree,
                                                    const ProductSpace& space);
bool is_separated(const DecisionTree& tree, const ProductSpace& space);

/// "1/0" style rendering of a node path ("root" for the empty path).
std::string format_node_path(std::span<const std::size_t> path);

/// A factor of a disjoint composition: a function on its own block of
/// variables together with a tree computing it.
struct CompositionFactor {
  DecisionTree tree;
  TabulatedFunction function;
};

struct ComposedTree {
  std::shared_ptr<const ProductSpace> space;
  DecisionTree tree;
};

/// Replaces each query of outer coordinate j by factor j's tree, whose leaves
/// continue into the outer child selected by the factor's output label. The
/// composed space concatenates the factor spaces in order.
ComposedTree compose_disjoint(const DecisionTree& outer, const ProductSpace& outer_space,
                              std::span<const CompositionFactor> factors);

/// A probability distribution over decision trees.
class RandomizedTree {
 public:
  struct Branch {
    Number probability;
    DecisionTree tree;
  };

  /// Throws DomainError on negative probabilities or a total other than 1.
  explicit RandomizedTree(std::vector<Branch> branches);
  static RandomizedTree single(DecisionTree tree);

  std::span<const Branch> branches() const { return branches_; }
  bool exact() const { return exact_; }

  template <Scalar T>
  T probability(std::size_t b) const {
    if constexpr (std::same_as<T, Rational>) {
      if (!exact_) throw DomainError("randomized tree has inexact branch probabilities");
      return branches_[b].probability.exact();
    } else {
      return branches_[b].probability.to_double();
    }
  }

 private:
  std::vector<Branch> branches_;
  bool exact_ = true;
};

bool computes(const RandomizedTree& rt, const TabulatedFunction& f);

/// Probability-weighted average of per-branch delta vectors.
template <Scalar T>
std::vector<T> delta_randomized(const RandomizedTree& rt, const ProductSpace& space);

/// Longest path in any tree of the support.
std::size_t max_depth(const RandomizedTree& rt);

}  // namespace dtinf
