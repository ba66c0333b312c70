#include "dtinf/families.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "dtinf/io.hpp"

namespace dtinf {

namespace {

constexpr std::uint32_t kFalse = 0;
constexpr std::uint32_t kTrue = 1;

const char* const kFigure1Tree =
    "(q 1 (-1 (q 2 (-1 (q 3 (-1 (leaf 0)) (1 (leaf 2)))) (1 (leaf -1))))"
    " (1 (q 3 (-1 (leaf -1)) (1 (q 2 (-1 (leaf 2)) (1 (leaf 0)))))))";

std::shared_ptr<const OutputSpace> boolean_outputs() {
  static const auto outputs = std::make_shared<const OutputSpace>(OutputSpace::boolean());
  return outputs;
}

std::shared_ptr<const ProductSpace> cube(std::size_t n, const Number& p, std::uint64_t cap) {
  if (n >= 63) throw CapExceeded("dimension " + std::to_string(n) + " exceeds the cap");
  return std::make_shared<const ProductSpace>(ProductSpace::biased_cube(n, p, cap));
}

template <class Pred>
TabulatedFunction boolean_function(std::size_t n, const Number& p, std::uint64_t cap, Pred pred) {
  return tabulate(cube(n, p, cap), boolean_outputs(), [&](const std::vector<std::size_t>& v) {
    return pred(v) ? kTrue : kFalse;
  });
}

// Query coords[from], then continue only on `go`; the other value answers
// immediately. AND continues on +1, OR on -1.
DecisionTree chain_tree(const std::vector<std::size_t>& coords, std::size_t from, std::size_t go) {
  const std::uint32_t stop = go == 1 ? kFalse : kTrue;
  const std::uint32_t end = go == 1 ? kTrue : kFalse;
  std::vector<DecisionTree> kids(2, DecisionTree::leaf(stop));
  kids[go] = from + 1 == coords.size() ? DecisionTree::leaf(end) : chain_tree(coords, from + 1, go);
  return DecisionTree::query(coords[from], std::move(kids));
}

std::vector<std::size_t> iota(std::size_t n, std::size_t start = 0) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), start);
  return v;
}

DecisionTree parity_tree(std::size_t i, std::size_t n, std::size_t ones) {
  if (i == n) return DecisionTree::leaf(ones % 2 == n % 2 ? kTrue : kFalse);
  return DecisionTree::query(i, {parity_tree(i + 1, n, ones), parity_tree(i + 1, n, ones + 1)});
}

std::vector<std::size_t> transposition(std::size_t n, std::size_t a, std::size_t b) {
  auto perm = iota(n);
  std::swap(perm[a], perm[b]);
  return perm;
}

std::vector<std::vector<std::size_t>> adjacent_transpositions(std::size_t n) {
  std::vector<std::vector<std::size_t>> gens;
  for (std::size_t i = 0; i + 1 < n; ++i) gens.push_back(transposition(n, i, i + 1));
  return gens;
}

// Swaps the blocks [a, a+len) and [b, b+len).
std::vector<std::size_t> block_swap(std::size_t n, std::size_t a, std::size_t b, std::size_t len) {
  auto perm = iota(n);
  for (std::size_t t = 0; t < len; ++t) std::swap(perm[a + t], perm[b + t]);
  return perm;
}

std::size_t pow4(std::size_t k) { return std::size_t{1} << (2 * k); }

bool fk_value(std::size_t k, const std::vector<std::size_t>& v, std::size_t offset) {
  if (k == 0) return v[offset] == 1;
  const std::size_t m = pow4(k - 1);
  return (fk_value(k - 1, v, offset) && fk_value(k - 1, v, offset + m)) ||
         (fk_value(k - 1, v, offset + 2 * m) && fk_value(k - 1, v, offset + 3 * m));
}

// OR of two ANDs over coordinates 0..3.
DecisionTree tribes_outer_tree() {
  const DecisionTree second = chain_tree({2, 3}, 0, 1);
  // First AND over 0,1; on false fall through to the second AND.
  auto on_false = second;
  std::vector<DecisionTree> inner{on_false, DecisionTree::leaf(kTrue)};
  DecisionTree after_first = DecisionTree::query(1, std::move(inner));
  return DecisionTree::query(0, {second, after_first});
}

Family fk_family(std::size_t k, const Number& p, std::uint64_t cap) {
  if (k > kMaxRecursiveLevel) {
    throw CapExceeded("fk is tabulated only for k <= " + std::to_string(kMaxRecursiveLevel));
  }
  const std::size_t n = pow4(k);
  Family fam{{}, boolean_function(n, p, cap, [&](const auto& v) { return fk_value(k, v, 0); }),
             std::nullopt, {}, std::nullopt};
  // Recursive disjoint composition of read-once trees.
  DecisionTree tree = DecisionTree::query(0, {DecisionTree::leaf(kFalse), DecisionTree::leaf(kTrue)});
  auto sub = boolean_function(1, p, cap, [](const auto& v) { return v[0] == 1; });
  const auto outer_space = ProductSpace::biased_cube(4, p, cap);
  for (std::size_t level = 1; level <= k; ++level) {
    std::vector<CompositionFactor> factors(4, CompositionFactor{tree, sub});
    auto composed = compose_disjoint(tribes_outer_tree(), outer_space, factors);
    tree = composed.tree;
    const std::size_t lk = level;
    sub = boolean_function(pow4(level), p, cap, [&](const auto& v) { return fk_value(lk, v, 0); });
  }
  fam.tree = std::move(tree);
  for (std::size_t level = 1; level <= k; ++level) {
    const std::size_t m = pow4(level - 1);
    for (std::size_t start = 0; start < n; start += 4 * m) {
      fam.automorphisms.push_back(block_swap(n, start, start + m, m));
      fam.automorphisms.push_back(block_swap(n, start, start + 2 * m, 2 * m));
    }
  }
  return fam;
}

Family tribes_family(std::size_t w, std::size_t s, const Number& p, std::uint64_t cap) {
  const std::size_t n = w * s;
  auto f = boolean_function(n, p, cap, [&](const auto& v) {
    for (std::size_t t = 0; t < s; ++t) {
      bool all = true;
      for (std::size_t j = 0; j < w; ++j) all = all && v[t * w + j] == 1;
      if (all) return true;
    }
    return false;
  });
  Family fam{{}, std::move(f), std::nullopt, {}, std::nullopt};
  const auto outer_space = ProductSpace::biased_cube(s, p, cap);
  const auto and_w = boolean_function(w, p, cap, [](const auto& v) {
    return std::all_of(v.begin(), v.end(), [](std::size_t a) { return a == 1; });
  });
  std::vector<CompositionFactor> factors(s, CompositionFactor{chain_tree(iota(w), 0, 1), and_w});
  fam.tree = compose_disjoint(chain_tree(iota(s), 0, 0), outer_space, factors).tree;
  for (std::size_t t = 0; t < s; ++t) {
    for (std::size_t j = 0; j + 1 < w; ++j) {
      fam.automorphisms.push_back(transposition(n, t * w + j, t * w + j + 1));
    }
    if (t + 1 < s) fam.automorphisms.push_back(block_swap(n, t * w, (t + 1) * w, w));
  }
  return fam;
}

Family figure1_family(std::uint64_t cap) {
  auto space = cube(3, Number(Rational(1, 2)), cap);
  auto outputs = std::make_shared<const OutputSpace>(OutputSpace::rho2({"-1", "0", "2"}));
  // Labels 0,2,-1,-1,-1,2,-1,0 as output indices.
  TabulatedFunction f(space, outputs, {1, 2, 0, 0, 0, 2, 0, 1});
  auto tree = parse_tree(kFigure1Tree, *space, *outputs);
  return Family{{}, std::move(f), std::move(tree), {}, std::nullopt};
}

std::size_t to_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DomainError("bad family parameter '" + std::string(s) + "'");
  }
  return v;
}

std::size_t expected_params(const std::string& name) {
  if (name == "sel" || name == "figure1") return 0;
  if (name == "tribes" || name == "graph") return 2;
  return 1;
}

}  // namespace

std::string FamilySpec::to_string() const {
  std::string s = name;
  if (name == "graph") return s + ":" + property + "," + std::to_string(params.at(0));
  for (std::size_t i = 0; i < params.size(); ++i) {
    s += (i == 0 ? ":" : ",") + std::to_string(params[i]);
  }
  return s;
}

FamilySpec parse_family(std::string_view text) {
  FamilySpec spec;
  const auto colon = text.find(':');
  spec.name = std::string(text.substr(0, colon));
  std::transform(spec.name.begin(), spec.name.end(), spec.name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const std::vector<std::string> known{"and",    "or",     "xor",      "maj",
                                              "sel",    "tribes", "fk",       "graph",
                                              "dictator", "constant", "figure1"};
  if (std::find(known.begin(), known.end(), spec.name) == known.end()) {
    throw DomainError("unknown family '" + spec.name + "'");
  }
  std::vector<std::string_view> parts;
  if (colon != std::string_view::npos) {
    auto rest = text.substr(colon + 1);
    while (true) {
      const auto comma = rest.find(',');
      parts.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  if (parts.size() != expected_params(spec.name)) {
    throw DomainError("family '" + spec.name + "' takes " +
                      std::to_string(expected_params(spec.name)) + " parameter(s)");
  }
  if (spec.name == "graph") {
    spec.property = std::string(parts[0]);
    spec.params.push_back(to_size(parts[1]));
  } else {
    for (auto part : parts) spec.params.push_back(to_size(part));
  }
  return spec;
}

std::vector<std::pair<std::size_t, std::size_t>> graph_edges(std::size_t v) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j) edges.emplace_back(i, j);
  return edges;
}

TabulatedFunction graph_property(std::size_t v, const std::string& property, const Number& p,
                                 std::uint64_t cap) {
  if (v < 2) throw DomainError("graph properties need at least 2 vertices");
  if (v > kMaxGraphVertices) {
    throw CapExceeded("graph properties are limited to v <= " + std::to_string(kMaxGraphVertices));
  }
  const auto edges = graph_edges(v);
  const std::size_t m = edges.size();
  if (property == "nonempty") {
    return boolean_function(m, p, cap, [](const auto& x) {
      return std::any_of(x.begin(), x.end(), [](std::size_t a) { return a == 1; });
    });
  }
  if (property == "triangle") {
    return boolean_function(m, p, cap, [&](const auto& x) {
      std::vector<std::vector<bool>> adj(v, std::vector<bool>(v, false));
      for (std::size_t e = 0; e < m; ++e) {
        adj[edges[e].first][edges[e].second] = adj[edges[e].second][edges[e].first] = x[e] == 1;
      }
      for (std::size_t a = 0; a < v; ++a)
        for (std::size_t b = a + 1; b < v; ++b)
          for (std::size_t c = b + 1; c < v; ++c)
            if (adj[a][b] && adj[b][c] && adj[a][c]) return true;
      return false;
    });
  }
  if (property == "connectivity") {
    return boolean_function(m, p, cap, [&](const auto& x) {
      std::vector<std::size_t> parent = iota(v);
      auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      std::size_t components = v;
      for (std::size_t e = 0; e < m; ++e) {
        if (x[e] != 1) continue;
        auto a = find(edges[e].first), b = find(edges[e].second);
        if (a != b) {
          parent[a] = b;
          --components;
        }
      }
      return components == 1;
    });
  }
  throw DomainError("unknown graph property '" + property + "'");
}

Family build(const FamilySpec& spec, const Number& p, std::uint64_t cap) {
  const auto& name = spec.name;
  const std::size_t n = spec.params.empty() ? 0 : spec.params[0];
  auto need_positive = [&] {
    if (n == 0) throw DomainError("family '" + name + "' needs n >= 1");
  };
  Family fam = [&]() -> Family {
    if (name == "and" || name == "or") {
      need_positive();
      const bool is_and = name == "and";
      auto f = boolean_function(n, p, cap, [&](const auto& v) {
        const auto want = is_and ? 1u : 0u;
        const bool all = std::all_of(v.begin(), v.end(), [&](std::size_t a) { return a == want; });
        return is_and ? all : !all;
      });
      return {{}, std::move(f), chain_tree(iota(n), 0, is_and ? 1 : 0),
              adjacent_transpositions(n), std::nullopt};
    }
    if (name == "xor") {
      need_positive();
      // +1 when the number of -1 coordinates is even (the product of the
      // coordinates).
      auto f = boolean_function(n, p, cap, [](const auto& v) {
        return std::count(v.begin(), v.end(), 0u) % 2 == 0;
      });
      return {{}, std::move(f), parity_tree(0, n, 0), adjacent_transpositions(n), std::nullopt};
    }
    if (name == "maj") {
      if (n % 2 == 0) throw DomainError("maj needs an odd number of variables");
      auto f = boolean_function(n, p, cap, [&](const auto& v) {
        return 2 * static_cast<std::size_t>(std::count(v.begin(), v.end(), 1u)) > n;
      });
      std::optional<DecisionTree> tree;
      if (n == 1) {
        tree = DecisionTree::query(0, {DecisionTree::leaf(kFalse), DecisionTree::leaf(kTrue)});
      } else if (n == 3) {
        auto third = DecisionTree::query(2, {DecisionTree::leaf(kFalse), DecisionTree::leaf(kTrue)});
        tree = DecisionTree::query(
            0, {DecisionTree::query(1, {DecisionTree::leaf(kFalse), third}),
                DecisionTree::query(1, {third, DecisionTree::leaf(kTrue)})});
      }
      return {{}, std::move(f), std::move(tree), adjacent_transpositions(n), std::nullopt};
    }
    if (name == "sel") {
      auto f = boolean_function(3, p, cap, [](const auto& v) { return v[0] == 1 ? v[1] == 1 : v[2] == 1; });
      auto leaf_of = [](std::size_t c) {
        return DecisionTree::query(c, {DecisionTree::leaf(kFalse), DecisionTree::leaf(kTrue)});
      };
      return {{}, std::move(f), DecisionTree::query(0, {leaf_of(2), leaf_of(1)}), {}, std::nullopt};
    }
    if (name == "dictator") {
      need_positive();
      auto f = boolean_function(n, p, cap, [](const auto& v) { return v[0] == 1; });
      return {{}, std::move(f),
              DecisionTree::query(0, {DecisionTree::leaf(kFalse), DecisionTree::leaf(kTrue)}),
              {},
              std::nullopt};
    }
    if (name == "constant") {
      auto f = boolean_function(n, p, cap, [](const auto&) { return true; });
      return {{}, std::move(f), DecisionTree::leaf(kTrue), adjacent_transpositions(n), std::nullopt};
    }
    if (name == "tribes") {
      if (spec.params.at(0) == 0 || spec.params.at(1) == 0) {
        throw DomainError("tribes needs positive width and count");
      }
      return tribes_family(spec.params[0], spec.params[1], p, cap);
    }
    if (name == "fk") return fk_family(n, p, cap);
    if (name == "figure1") return figure1_family(cap);
    if (name == "graph") {
      auto f = graph_property(n, spec.property, p, cap);
      std::vector<std::vector<std::size_t>> gens;
      const auto edges = graph_edges(n);
      for (std::size_t a = 0; a + 1 < n; ++a) {
        // Vertex transposition (a, a+1) acting on edges.
        auto swap_vertex = [&](std::size_t u) { return u == a ? a + 1 : u == a + 1 ? a : u; };
        std::vector<std::size_t> perm(edges.size());
        for (std::size_t e = 0; e < edges.size(); ++e) {
          auto u = swap_vertex(edges[e].first), w = swap_vertex(edges[e].second);
          if (u > w) std::swap(u, w);
          perm[e] = static_cast<std::size_t>(
              std::find(edges.begin(), edges.end(), std::make_pair(u, w)) - edges.begin());
        }
        gens.push_back(std::move(perm));
      }
      return {{}, std::move(f), std::nullopt, std::move(gens), n};
    }
    throw DomainError("unknown family '" + name + "'");
  }();
  fam.spec = spec;
  return fam;
}

Family build(std::string_view spec, const Number& p, std::uint64_t cap) {
  return build(parse_family(spec), p, cap);
}

namespace {

struct RandomChild {
  const std::vector<bool>& x;
  std::mt19937_64& rng;
  std::size_t cost = 0;

  bool leaf(std::size_t offset) {
    ++cost;
    return x[offset];
  }

  // Gate over two children; AND stops on false, OR stops on true.
  template <class Child>
  bool gate(bool is_and, Child&& child) {
    const bool first = std::bernoulli_distribution(0.5)(rng);
    const std::size_t a = first ? 0 : 1;
    const bool v = child(a);
    if (v != is_and) return v;
    return child(1 - a);
  }

  bool eval(std::size_t k, std::size_t offset) {
    if (k == 0) return leaf(offset);
    const std::size_t m = pow4(k - 1);
    return gate(false, [&](std::size_t side) {
      return gate(true, [&](std::size_t c) { return eval(k - 1, offset + (2 * side + c) * m); });
    });
  }
};

}  // namespace

RandomChildResult random_child_cost(std::size_t k, const std::vector<bool>& x,
                                    std::mt19937_64& rng) {
  if (k > kMaxSampledLevel) throw CapExceeded("random-child evaluation limited to k <= 6");
  if (x.size() != pow4(k)) throw DomainError("input has the wrong length for f_k");
  RandomChild rc{x, rng};
  const bool v = rc.eval(k, 0);
  return {v, rc.cost};
}

MonteCarloEstimate random_child_mean(std::size_t k, double p, std::size_t samples,
                                     std::uint64_t seed) {
  if (samples == 0) throw DomainError("need at least one sample");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(p);
  std::vector<bool> x(pow4(k));
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = bit(rng);
    const double c = static_cast<double>(random_child_cost(k, x, rng).cost);
    sum += c;
    sum_sq += c * c;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) : 0.0;
  return {mean, std::sqrt(var / n), samples};
}

}  // namespace dtinf
