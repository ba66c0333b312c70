#include "dtinf/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dtinf {

DecisionTree DecisionTree::leaf(std::uint32_t label) {
  DecisionTree t;
  t.label_ = label;
  return t;
}

DecisionTree DecisionTree::query(std::size_t coord, std::vector<DecisionTree> children) {
  if (children.empty()) throw DomainError("query node needs at least one child");
  DecisionTree t;
  t.coord_ = coord;
  t.children_ = std::move(children);
  return t;
}

std::size_t DecisionTree::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children_) n += c.node_count();
  return n;
}

std::size_t DecisionTree::leaf_count() const {
  if (is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& c : children_) n += c.leaf_count();
  return n;
}

const DecisionTree& DecisionTree::descend(std::span<const std::size_t> path) const {
  const DecisionTree* node = this;
  for (auto a : path) node = &node->child(a);
  return *node;
}

namespace {

void validate_node(const DecisionTree& t, const ProductSpace& space, const OutputSpace* outputs,
                   std::vector<bool>& on_path) {
  if (t.is_leaf()) {
    if (outputs && t.label() >= outputs->size()) {
      throw DomainError("leaf label index " + std::to_string(t.label()) + " out of range");
    }
    return;
  }
  const auto i = t.coord();
  if (i >= space.dimension()) {
    throw DomainError("tree queries coordinate " + std::to_string(i + 1) + " of a " +
                      std::to_string(space.dimension()) + "-coordinate space");
  }
  if (on_path[i]) {
    throw DomainError("coordinate " + std::to_string(i + 1) + " repeats on a root-leaf path");
  }
  if (t.children().size() != space.domain_size(i)) {
    throw DomainError("query of coordinate " + std::to_string(i + 1) + " has " +
                      std::to_string(t.children().size()) + " children; domain has " +
                      std::to_string(space.domain_size(i)) + " values");
  }
  on_path[i] = true;
  for (const auto& c : t.children()) validate_node(c, space, outputs, on_path);
  on_path[i] = false;
}

}  // namespace

void validate(const DecisionTree& tree, const ProductSpace& space, const OutputSpace& outputs) {
  std::vector<bool> on_path(space.dimension(), false);
  validate_node(tree, space, &outputs, on_path);
}

void validate(const DecisionTree& tree, const ProductSpace& space) {
  std::vector<bool> on_path(space.dimension(), false);
  validate_node(tree, space, nullptr, on_path);
}

Evaluation evaluate(const DecisionTree& tree, const ProductSpace& space, PointIndex x) {
  Evaluation e{0, {}};
  const DecisionTree* node = &tree;
  while (!node->is_leaf()) {
    e.queried.push_back(node->coord());
    node = &node->child(space.value_of(x, node->coord()));
  }
  e.label = node->label();
  return e;
}

std::uint32_t evaluate_label(const DecisionTree& tree, const ProductSpace& space, PointIndex x) {
  const DecisionTree* node = &tree;
  while (!node->is_leaf()) node = &node->children()[space.value_of(x, node->coord())];
  return node->label();
}

bool computes(const DecisionTree& tree, const TabulatedFunction& f) {
  validate(tree, f.space(), f.outputs());
  for (PointIndex x = 0; x < f.space().point_count(); ++x) {
    if (evaluate_label(tree, f.space(), x) != f(x)) return false;
  }
  return true;
}

TabulatedFunction tabulate(const DecisionTree& tree, std::shared_ptr<const ProductSpace> space,
                           std::shared_ptr<const OutputSpace> outputs) {
  validate(tree, *space, *outputs);
  std::vector<std::uint32_t> table(space->point_count());
  for (PointIndex x = 0; x < space->point_count(); ++x) table[x] = evaluate_label(tree, *space, x);
  return TabulatedFunction(std::move(space), std::move(outputs), std::move(table));
}

namespace {

template <Scalar T>
void accumulate_delta(const DecisionTree& t, const ProductSpace& space, const T& reach,
                      std::vector<T>& out) {
  if (t.is_leaf()) return;
  const auto i = t.coord();
  out[i] += reach;
  for (std::size_t a = 0; a < t.children().size(); ++a) {
    const auto& w = space.weight<T>(i, a);
    if (w == 0) continue;
    accumulate_delta<T>(t.child(a), space, T(reach * w), out);
  }
}

}  // namespace

template <Scalar T>
std::vector<T> delta(const DecisionTree& tree, const ProductSpace& space) {
  validate(tree, space);
  std::vector<T> out(space.dimension(), T(0));
  accumulate_delta<T>(tree, space, T(1), out);
  return out;
}

template <Scalar T>
std::vector<T> delta_by_enumeration(const DecisionTree& tree, const ProductSpace& space) {
  validate(tree, space);
  std::vector<T> out(space.dimension(), T(0));
  for (PointIndex x = 0; x < space.point_count(); ++x) {
    const T p = point_probability<T>(space, x);
    for (auto i : evaluate(tree, space, x).queried) out[i] += p;
  }
  return out;
}

template <Scalar T>
T expected_cost(const DecisionTree& tree, const ProductSpace& space) {
  T total = T(0);
  for (const auto& d : delta<T>(tree, space)) total += d;
  return total;
}

std::size_t depth(const DecisionTree& tree) {
  if (tree.is_leaf()) return 0;
  std::size_t d = 0;
  for (const auto& c : tree.children()) d = std::max(d, depth(c));
  return d + 1;
}

bool is_read_once(const DecisionTree& tree) {
  std::vector<std::size_t> seen;
  std::function<bool(const DecisionTree&)> walk = [&](const DecisionTree& t) {
    if (t.is_leaf()) return true;
    if (std::find(seen.begin(), seen.end(), t.coord()) != seen.end()) return false;
    seen.push_back(t.coord());
    return std::all_of(t.children().begin(), t.children().end(), walk);
  };
  return walk(tree);
}

std::string format_node_path(std::span<const std::size_t> path) {
  if (path.empty()) return "root";
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k) s += '/';
    s += std::to_string(path[k]);
  }
  return s;
}

std::optional<SeparationWitness> separation_witness(const DecisionTree& tree,
                                                    const ProductSpace& space) {
  validate(tree, space);
  struct NodeRef {
    const DecisionTree* node;
    std::vector<std::size_t> path;
  };
  std::vector<NodeRef> nodes;
  std::function<void(const DecisionTree&, std::vector<std::size_t>&)> collect =
      [&](const DecisionTree& t, std::vector<std::size_t>& path) {
        nodes.push_back({&t, path});
        for (std::size_t a = 0; a < t.children().size(); ++a) {
          path.push_back(a);
          collect(t.child(a), path);
          path.pop_back();
        }
      };
  std::vector<std::size_t> scratch;
  collect(tree, scratch);

  // Two subtrees with different outputs on x violate separatedness exactly
  // when some coordinate is read by both on x, so it suffices to remember,
  // per coordinate, the output of the first subtree that read it.
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> reader(space.dimension(), kNone);
  std::vector<std::uint32_t> reader_label(space.dimension(), 0);
  for (PointIndex x = 0; x < space.point_count(); ++x) {
    std::fill(reader.begin(), reader.end(), kNone);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto e = evaluate(*nodes[k].node, space, x);
      for (auto i : e.queried) {
        if (reader[i] == kNone) {
          reader[i] = k;
          reader_label[i] = e.label;
        } else if (reader_label[i] != e.label) {
          return SeparationWitness{nodes[reader[i]].path, nodes[k].path, x, i, reader_label[i],
                                   e.label};
        }
      }
    }
  }
  return std::nullopt;
}

bool is_separated(const DecisionTree& tree, const ProductSpace& space) {
  return !separation_witness(tree, space).has_value();
}

namespace {

struct BlockMap {
  std::size_t offset;
  // factor output index -> outer value index
  std::vector<std::size_t> value_of_output;
};

DecisionTree compose_node(const DecisionTree& outer, std::span<const CompositionFactor> factors,
                          std::span<const BlockMap> blocks);

DecisionTree splice_factor(const DecisionTree& factor_node, const DecisionTree& outer,
                           std::span<const CompositionFactor> factors,
                           std::span<const BlockMap> blocks, std::size_t j) {
  if (factor_node.is_leaf()) {
    const auto a = blocks[j].value_of_output[factor_node.label()];
    return compose_node(outer.child(a), factors, blocks);
  }
  std::vector<DecisionTree> children;
  children.reserve(factor_node.children().size());
  for (const auto& c : factor_node.children()) {
    children.push_back(splice_factor(c, outer, factors, blocks, j));
  }
  return DecisionTree::query(blocks[j].offset + factor_node.coord(), std::move(children));
}

DecisionTree compose_node(const DecisionTree& outer, std::span<const CompositionFactor> factors,
                          std::span<const BlockMap> blocks) {
  if (outer.is_leaf()) return outer;
  const auto j = outer.coord();
  return splice_factor(factors[j].tree, outer, factors, blocks, j);
}

}  // namespace

ComposedTree compose_disjoint(const DecisionTree& outer, const ProductSpace& outer_space,
                              std::span<const CompositionFactor> factors) {
  validate(outer, outer_space);
  if (factors.size() != outer_space.dimension()) {
    throw DomainError("compose_disjoint: " + std::to_string(factors.size()) + " factors for " +
                      std::to_string(outer_space.dimension()) + " outer coordinates");
  }
  std::vector<CoordDomain> coords;
  std::vector<BlockMap> blocks;
  std::uint64_t cap = outer_space.cap();
  for (std::size_t j = 0; j < factors.size(); ++j) {
    const auto& f = factors[j].function;
    if (!computes(factors[j].tree, f)) {
      throw DomainError("compose_disjoint: factor " + std::to_string(j + 1) +
                        " tree does not compute its function");
    }
    const auto& domain = outer_space.coord(j);
    const auto& labels = f.outputs().labels();
    if (labels.size() != domain.size()) {
      throw DomainError("compose_disjoint: factor " + std::to_string(j + 1) +
                        " output space does not match outer coordinate domain");
    }
    BlockMap block{coords.size(), {}};
    for (const auto& l : labels) {
      auto a = domain.index_of(l);
      if (!a) {
        throw DomainError("compose_disjoint: factor " + std::to_string(j + 1) + " output '" + l +
                          "' is not a value of outer coordinate " + std::to_string(j + 1));
      }
      block.value_of_output.push_back(*a);
    }
    blocks.push_back(std::move(block));
    for (const auto& c : f.space().coords()) coords.push_back(c);
    cap = std::max(cap, f.space().cap());
  }
  auto space = std::make_shared<const ProductSpace>(std::move(coords), cap);
  return ComposedTree{std::move(space), compose_node(outer, factors, blocks)};
}

// ---------------------------------------------------------------------------

RandomizedTree::RandomizedTree(std::vector<Branch> branches) : branches_(std::move(branches)) {
  if (branches_.empty()) throw DomainError("randomized tree needs at least one branch");
  Rational exact_sum = 0;
  double sum = 0.0;
  for (const auto& b : branches_) {
    if (b.probability.to_double() < 0.0) throw DomainError("negative branch probability");
    exact_ = exact_ && b.probability.is_exact();
    if (b.probability.is_exact()) exact_sum += b.probability.exact();
    sum += b.probability.to_double();
  }
  if (exact_ ? exact_sum != 1 : std::fabs(sum - 1.0) > kWeightSumTolerance) {
    throw DomainError("branch probabilities do not sum to 1");
  }
}

RandomizedTree RandomizedTree::single(DecisionTree tree) {
  std::vector<Branch> b;
  b.push_back({Number(Rational(1)), std::move(tree)});
  return RandomizedTree(std::move(b));
}

bool computes(const RandomizedTree& rt, const TabulatedFunction& f) {
  return std::all_of(rt.branches().begin(), rt.branches().end(),
                     [&](const auto& b) { return computes(b.tree, f); });
}

template <Scalar T>
std::vector<T> delta_randomized(const RandomizedTree& rt, const ProductSpace& space) {
  std::vector<T> out(space.dimension(), T(0));
  for (std::size_t b = 0; b < rt.branches().size(); ++b) {
    const T w = rt.probability<T>(b);
    const auto d = delta<T>(rt.branches()[b].tree, space);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * d[i];
  }
  return out;
}

std::size_t max_depth(const RandomizedTree& rt) {
  std::size_t k = 0;
  for (const auto& b : rt.branches()) k = std::max(k, depth(b.tree));
  return k;
}

template std::vector<Rational> delta<Rational>(const DecisionTree&, const ProductSpace&);
template std::vector<double> delta<double>(const DecisionTree&, const ProductSpace&);
template std::vector<Rational> delta_by_enumeration<Rational>(const DecisionTree&, const ProductSpace&);
template std::vector<double> delta_by_enumeration<double>(const DecisionTree&, const ProductSpace&);
template Rational expected_cost<Rational>(const DecisionTree&, const ProductSpace&);
template double expected_cost<double>(const DecisionTree&, const ProductSpace&);
template std::vector<Rational> delta_randomized<Rational>(const RandomizedTree&, const ProductSpace&);
template std::vector<double> delta_randomized<double>(const RandomizedTree&, const ProductSpace&);

}  // namespace dtinf
