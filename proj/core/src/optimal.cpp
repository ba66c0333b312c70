#include "dtinf/optimal.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace dtinf {

Subfunction Subfunction::of(const TabulatedFunction& f) {
  Subfunction s;
  s.free_.resize(f.dimension());
  for (std::size_t i = 0; i < s.free_.size(); ++i) s.free_[i] = i;
  s.table_.assign(f.table().begin(), f.table().end());
  return s;
}

Subfunction Subfunction::restriction(const TabulatedFunction& f,
                                     const std::vector<std::optional<std::size_t>>& assignment) {
  if (assignment.size() != f.dimension()) throw DomainError("assignment has the wrong length");
  Subfunction s = of(f);
  // Restrict from the highest coordinate down so positions stay valid.
  for (std::size_t i = assignment.size(); i-- > 0;) {
    if (!assignment[i]) continue;
    if (*assignment[i] >= f.space().domain_size(i)) throw DomainError("assignment value out of range");
    s = s.restrict(i, *assignment[i], f.space());
  }
  return s;
}

bool Subfunction::is_constant() const {
  return std::all_of(table_.begin(), table_.end(), [&](auto z) { return z == table_.front(); });
}

namespace {

struct Layout {
  std::size_t outer;
  std::size_t radix;
  std::size_t inner;
};

Layout layout_of(const std::vector<std::size_t>& free, std::size_t pos, const ProductSpace& space) {
  Layout l{1, space.domain_size(free[pos]), 1};
  for (std::size_t k = 0; k < pos; ++k) l.outer *= space.domain_size(free[k]);
  for (std::size_t k = pos + 1; k < free.size(); ++k) l.inner *= space.domain_size(free[k]);
  return l;
}

}  // namespace

Subfunction Subfunction::restrict(std::size_t pos, std::size_t a, const ProductSpace& space) const {
  const auto l = layout_of(free_, pos, space);
  Subfunction s;
  s.free_ = free_;
  s.free_.erase(s.free_.begin() + static_cast<std::ptrdiff_t>(pos));
  s.table_.resize(l.outer * l.inner);
  for (std::size_t o = 0; o < l.outer; ++o) {
    const auto* src = table_.data() + (o * l.radix + a) * l.inner;
    std::copy(src, src + l.inner, s.table_.begin() + static_cast<std::ptrdiff_t>(o * l.inner));
  }
  return s;
}

bool Subfunction::depends_on(std::size_t pos, const ProductSpace& space) const {
  const auto l = layout_of(free_, pos, space);
  for (std::size_t o = 0; o < l.outer; ++o) {
    const auto* base = table_.data() + o * l.radix * l.inner;
    for (std::size_t a = 1; a < l.radix; ++a) {
      if (!std::equal(base, base + l.inner, base + a * l.inner)) return true;
    }
  }
  return false;
}

Subfunction Subfunction::reduced(const ProductSpace& space) const {
  Subfunction s = *this;
  for (std::size_t pos = s.free_.size(); pos-- > 0;) {
    if (!s.depends_on(pos, space)) s = s.restrict(pos, 0, space);
  }
  return s;
}

std::string Subfunction::signature(const std::vector<std::uint32_t>& coord_class) const {
  std::string key;
  key.reserve(4 + free_.size() * 4 + table_.size() * 2);
  auto put32 = [&](std::uint32_t v) {
    for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  };
  put32(static_cast<std::uint32_t>(free_.size()));
  for (auto i : free_) put32(coord_class[i]);
  const bool narrow = std::all_of(table_.begin(), table_.end(), [](auto z) { return z < 256; });
  key.push_back(narrow ? 'n' : 'w');
  for (auto z : table_) {
    if (narrow) {
      key.push_back(static_cast<char>(z));
    } else {
      put32(z);
    }
  }
  return key;
}

std::vector<std::uint32_t> weight_classes(const ProductSpace& space) {
  std::vector<std::uint32_t> cls(space.dimension());
  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& c = space.coord(i);
    std::size_t k = 0;
    for (; k < reps.size(); ++k) {
      const auto& r = space.coord(reps[k]);
      if (r.size() == c.size() && r.weights == c.weights && r.exact_weights == c.exact_weights) break;
    }
    if (k == reps.size()) reps.push_back(i);
    cls[i] = static_cast<std::uint32_t>(k);
  }
  return cls;
}

std::string restriction_signature(const TabulatedFunction& f,
                                  const std::vector<std::optional<std::size_t>>& assignment) {
  return Subfunction::restriction(f, assignment).reduced(f.space()).signature(weight_classes(f.space()));
}

namespace {

// Shared memoized recursion for Delta(f) (weighted sum over children) and
// D(f) (max over children). Subproblems are reduced subfunctions; the memo
// stores the chosen position within the reduced free list, which is the same
// for every subfunction sharing a signature.
template <class Value, class Combine>
class Solver {
 public:
  Solver(const ProductSpace& space, std::vector<std::uint32_t> classes, SolverLimits limits,
         Combine combine)
      : space_(space), classes_(std::move(classes)), limits_(limits), combine_(std::move(combine)) {}

  const Value& solve(const Subfunction& s) {
    if (s.free().empty()) return zero_;
    auto key = s.signature(classes_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.value;

    std::optional<Value> best;
    std::uint32_t best_pos = 0;
    for (std::size_t pos = 0; pos < s.free().size(); ++pos) {
      std::vector<Value> children;
      const auto r = space_.domain_size(s.free()[pos]);
      children.reserve(r);
      for (std::size_t a = 0; a < r; ++a) {
        children.push_back(solve(s.restrict(pos, a, space_).reduced(space_)));
      }
      Value v = combine_(s.free()[pos], children);
      if (!best || v < *best) {
        best = std::move(v);
        best_pos = static_cast<std::uint32_t>(pos);
      }
    }
    if (memo_.size() >= limits_.max_states) {
      throw CapExceeded("optimal-tree search exceeded " + std::to_string(limits_.max_states) + " states");
    }
    auto [it, inserted] = memo_.emplace(std::move(key), Entry{std::move(*best), best_pos});
    return it->second.value;
  }

  DecisionTree witness(const Subfunction& s) {
    if (s.free().empty()) return DecisionTree::leaf(s.table().front());
    solve(s);
    const auto pos = memo_.at(s.signature(classes_)).best_pos;
    const auto r = space_.domain_size(s.free()[pos]);
    std::vector<DecisionTree> children;
    children.reserve(r);
    for (std::size_t a = 0; a < r; ++a) {
      children.push_back(witness(s.restrict(pos, a, space_).reduced(space_)));
    }
    return DecisionTree::query(s.free()[pos], std::move(children));
  }

  std::size_t states() const { return memo_.size(); }

 private:
  struct Entry {
    Value value;
    std::uint32_t best_pos;
  };

  const ProductSpace& space_;
  std::vector<std::uint32_t> classes_;
  SolverLimits limits_;
  Combine combine_;
  Value zero_{0};
  std::unordered_map<std::string, Entry> memo_;
};

}  // namespace

template <Scalar T>
OptimalCost<T> optimal_expected_cost(const TabulatedFunction& f, SolverLimits limits) {
  const auto& space = f.space();
  if constexpr (std::same_as<T, Rational>) space.require_exact();
  auto combine = [&space](std::size_t coord, const std::vector<T>& children) {
    T total = T(1);
    for (std::size_t a = 0; a < children.size(); ++a) {
      const auto& w = space.weight<T>(coord, a);
      if (w != 0) total += w * children[a];
    }
    return total;
  };
  Solver<T, decltype(combine)> solver(space, weight_classes(space), limits, combine);
  const auto root = Subfunction::of(f).reduced(space);
  T cost = solver.solve(root);
  auto witness = solver.witness(root);
  return {std::move(cost), std::move(witness), solver.states()};
}

OptimalDepth optimal_depth(const TabulatedFunction& f, SolverLimits limits) {
  const auto& space = f.space();
  std::vector<std::uint32_t> classes(space.dimension());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    classes[i] = static_cast<std::uint32_t>(space.domain_size(i));
  }
  auto combine = [](std::size_t, const std::vector<std::size_t>& children) {
    return 1 + *std::max_element(children.begin(), children.end());
  };
  Solver<std::size_t, decltype(combine)> solver(space, std::move(classes), limits, combine);
  const auto root = Subfunction::of(f).reduced(space);
  const auto d = solver.solve(root);
  auto witness = solver.witness(root);
  return {d, std::move(witness), solver.states()};
}

namespace {

class Enumerator {
 public:
  explicit Enumerator(const ProductSpace& space) : space_(space) {}

  const std::vector<DecisionTree>& trees(const Subfunction& s) {
    auto key = std::make_pair(s.free(), s.table());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<DecisionTree> out;
    if (s.is_constant()) {
      out.push_back(DecisionTree::leaf(s.table().front()));
    } else {
      for (std::size_t pos = 0; pos < s.free().size(); ++pos) {
        if (!s.depends_on(pos, space_)) continue;
        const auto r = space_.domain_size(s.free()[pos]);
        std::vector<const std::vector<DecisionTree>*> options;
        for (std::size_t a = 0; a < r; ++a) options.push_back(&trees(s.restrict(pos, a, space_)));
        // Cartesian product over the children's alternatives.
        std::vector<std::size_t> pick(r, 0);
        while (true) {
          std::vector<DecisionTree> children;
          for (std::size_t a = 0; a < r; ++a) children.push_back((*options[a])[pick[a]]);
          out.push_back(DecisionTree::query(s.free()[pos], std::move(children)));
          std::size_t a = r;
          while (a-- > 0) {
            if (++pick[a] < options[a]->size()) break;
            pick[a] = 0;
          }
          if (a == static_cast<std::size_t>(-1)) break;
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  const ProductSpace& space_;
  std::map<std::pair<std::vector<std::size_t>, std::vector<std::uint32_t>>, std::vector<DecisionTree>> memo_;
};

void require_enumerable(const TabulatedFunction& f) {
  const auto& space = f.space();
  if (space.dimension() > kMaxEnumerationDimension) {
    throw Refused("tree enumeration is limited to n <= " + std::to_string(kMaxEnumerationDimension));
  }
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    if (space.domain_size(i) != 2) throw Refused("tree enumeration needs binary coordinates");
  }
}

}  // namespace

void for_each_ddt(const TabulatedFunction& f, const std::function<void(const DecisionTree&)>& visit) {
  for (const auto& t : enumerate_all_ddts(f)) visit(t);
}

std::vector<DecisionTree> enumerate_all_ddts(const TabulatedFunction& f) {
  require_enumerable(f);
  Enumerator e(f.space());
  return e.trees(Subfunction::of(f));
}

std::uint64_t count_ddts(const TabulatedFunction& f) { return enumerate_all_ddts(f).size(); }

template OptimalCost<Rational> optimal_expected_cost<Rational>(const TabulatedFunction&, SolverLimits);
template OptimalCost<double> optimal_expected_cost<double>(const TabulatedFunction&, SolverLimits);

}  // namespace dtinf
