#include "dtinf/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace dtinf {

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string raw(text.substr(pos, end - pos));
    ++number;
    pos = end + 1;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream in(raw);
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

std::size_t parse_count(const std::string& tok, std::size_t line, const std::string& what) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      tok.size() > 9) {
    throw ParseError(line, "expected a nonnegative integer for " + what + ", got '" + tok + "'");
  }
  return static_cast<std::size_t>(std::stoul(tok));
}

Rational parse_number(const std::string& tok, std::size_t line, const std::string& what) {
  auto q = parse_rational(tok);
  if (!q) throw ParseError(line, "bad number '" + tok + "' in " + what);
  return *q;
}

bool is_builtin(const std::string& s) {
  return s == "discrete" || s == "boolean" || s == "rho1" || s == "rho2";
}

OutputSpace parse_outputs(const Line& line) {
  const auto& t = line.tokens;
  auto dist_it = std::find(t.begin() + 1, t.end(), std::string("dist"));
  try {
    if (dist_it == t.end()) {
      if (t.size() < 2) throw ParseError(line.number, "outputs: no labels");
      std::vector<std::string> labels(t.begin() + 1, t.end());
      std::string name = "discrete";
      if (is_builtin(labels.back())) {
        name = labels.back();
        labels.pop_back();
      } else if (labels.back() == "metric" || labels.back() == "semimetric") {
        throw ParseError(line.number, "outputs: '" + labels.back() + "' needs a dist table");
      }
      if (labels.empty()) throw ParseError(line.number, "outputs: no labels");
      return OutputSpace::builtin(name, std::move(labels));
    }
    std::vector<std::string> labels(t.begin() + 1, dist_it);
    DistanceKind kind = DistanceKind::metric;
    if (!labels.empty() && (labels.back() == "metric" || labels.back() == "semimetric")) {
      kind = labels.back() == "metric" ? DistanceKind::metric : DistanceKind::semimetric;
      labels.pop_back();
    }
    if (labels.empty()) throw ParseError(line.number, "outputs: no labels");
    const std::size_t m = labels.size();
    const std::size_t given = static_cast<std::size_t>(t.end() - dist_it - 1);
    if (given != m * m) {
      throw ParseError(line.number, "outputs: dist needs " + std::to_string(m * m) +
                                        " entries, got " + std::to_string(given));
    }
    std::vector<Rational> exact;
    std::vector<double> approx;
    for (auto it = dist_it + 1; it != t.end(); ++it) {
      exact.push_back(parse_number(*it, line.number, "dist"));
      approx.push_back(to_double(exact.back()));
    }
    return OutputSpace(std::move(labels), std::move(approx), std::move(exact), kind);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(line.number, e.what());
  }
}

}  // namespace

TabulatedFunction parse_function(std::string_view text, std::uint64_t cap) {
  const auto lines = tokenize_lines(text);
  std::optional<std::size_t> n;
  std::map<std::size_t, CoordDomain> coords;
  std::map<std::size_t, std::size_t> coord_lines;
  std::optional<OutputSpace> outputs;
  std::vector<std::string> values;
  std::size_t values_line = 0;
  bool in_values = false;

  for (const auto& line : lines) {
    const auto& t = line.tokens;
    const auto& key = t.front();
    if (key == "space") {
      in_values = false;
      if (n) throw ParseError(line.number, "duplicate 'space' header");
      if (t.size() != 2) throw ParseError(line.number, "malformed header: expected 'space <n>'");
      n = parse_count(t[1], line.number, "space dimension");
    } else if (key == "coord") {
      in_values = false;
      if (!n) throw ParseError(line.number, "malformed header: 'coord' before 'space'");
      if (t.size() < 3) throw ParseError(line.number, "malformed coord line");
      const auto i = parse_count(t[1], line.number, "coordinate index");
      if (i < 1 || i > *n) {
        throw ParseError(line.number, "coordinate index " + t[1] + " outside 1.." + std::to_string(*n));
      }
      if (coords.count(i)) throw ParseError(line.number, "duplicate coordinate " + t[1]);
      auto wpos = std::find(t.begin(), t.end(), std::string("weights"));
      if (t[2] != "values" || wpos == t.end()) {
        throw ParseError(line.number, "malformed coord line: expected 'coord <i> values ... weights ...'");
      }
      std::vector<std::string> labels(t.begin() + 3, wpos);
      std::vector<Rational> weights;
      for (auto it = wpos + 1; it != t.end(); ++it) {
        weights.push_back(parse_number(*it, line.number, "weights"));
      }
      if (labels.empty()) throw ParseError(line.number, "coordinate " + t[1] + " has no values");
      if (weights.size() != labels.size()) {
        throw ParseError(line.number, "coordinate " + t[1] + ": " + std::to_string(labels.size()) +
                                          " values but " + std::to_string(weights.size()) + " weights");
      }
      Rational sum = 0;
      double approx = 0.0;
      for (const auto& w : weights) {
        if (sgn(w) < 0) throw ParseError(line.number, "coordinate " + t[1] + ": negative weight");
        sum += w;
        approx += to_double(w);
      }
      if (sum != 1 && std::fabs(approx - 1.0) > kWeightSumTolerance) {
        throw ParseError(line.number, "coordinate " + t[1] + ": weights sum ≠ 1 (sum is " +
                                          to_fraction_string(sum) + ")");
      }
      coords.emplace(i, CoordDomain::exact_domain(std::move(labels), std::move(weights)));
      coord_lines.emplace(i, line.number);
    } else if (key == "outputs") {
      in_values = false;
      if (outputs) throw ParseError(line.number, "duplicate 'outputs' line");
      outputs = parse_outputs(line);
    } else if (key == "values") {
      if (values_line) throw ParseError(line.number, "duplicate 'values' line");
      values_line = line.number;
      in_values = true;
      values.insert(values.end(), t.begin() + 1, t.end());
    } else if (in_values) {
      values.insert(values.end(), t.begin(), t.end());
    } else {
      throw ParseError(line.number, "unknown keyword '" + key + "'");
    }
  }

  if (!n) throw ParseError(lines.empty() ? 1 : lines.front().number, "malformed header: missing 'space <n>'");
  if (coords.size() != *n) {
    for (std::size_t i = 1; i <= *n; ++i) {
      if (!coords.count(i)) throw ParseError(0, "missing 'coord " + std::to_string(i) + "' line");
    }
  }
  if (!outputs) throw ParseError(0, "missing 'outputs' line");
  if (!values_line) throw ParseError(0, "missing 'values' line");

  std::vector<CoordDomain> domains;
  for (auto& [i, c] : coords) domains.push_back(std::move(c));
  std::shared_ptr<const ProductSpace> space;
  try {
    space = std::make_shared<const ProductSpace>(std::move(domains), cap);
  } catch (const CapExceeded&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  if (values.size() != space->point_count()) {
    throw ParseError(values_line, "wrong value count: expected " + std::to_string(space->point_count()) +
                                      " output labels, got " + std::to_string(values.size()));
  }
  std::vector<std::uint32_t> table;
  table.reserve(values.size());
  for (const auto& v : values) {
    auto z = outputs->index_of(v);
    if (!z) throw ParseError(values_line, "unknown output label '" + v + "'");
    table.push_back(static_cast<std::uint32_t>(*z));
  }
  return TabulatedFunction(std::move(space), std::make_shared<const OutputSpace>(std::move(*outputs)),
                           std::move(table));
}

namespace {

std::string weight_string(const CoordDomain& c, std::size_t a) {
  if (c.exact()) return to_fraction_string(c.exact_weights[a]);
  return to_decimal_string(c.weights[a]);
}

}  // namespace

std::string format_function(const TabulatedFunction& f) {
  std::ostringstream out;
  const auto& space = f.space();
  out << "space " << space.dimension() << '\n';
  for (std::size_t i = 0; i < space.dimension(); ++i) {
    const auto& c = space.coord(i);
    out << "coord " << (i + 1) << " values";
    for (const auto& v : c.values) out << ' ' << v;
    out << " weights";
    for (std::size_t a = 0; a < c.size(); ++a) out << ' ' << weight_string(c, a);
    out << '\n';
  }
  const auto& outs = f.outputs();
  out << "outputs";
  for (const auto& l : outs.labels()) out << ' ' << l;
  if (is_builtin(outs.tag())) {
    out << ' ' << outs.tag() << '\n';
  } else {
    out << (outs.kind() == DistanceKind::metric ? " metric" : " semimetric") << " dist";
    for (std::size_t a = 0; a < outs.size(); ++a) {
      for (std::size_t b = 0; b < outs.size(); ++b) {
        out << ' '
            << (outs.exact() ? to_fraction_string(outs.distance<Rational>(a, b))
                             : to_decimal_string(outs.distance<double>(a, b)));
      }
    }
    out << '\n';
  }
  out << "values";
  std::size_t k = 0;
  for (auto z : f.table()) {
    out << ((k > 0 && k % 32 == 0) ? "\n" : " ") << outs.label(z);
    ++k;
  }
  out << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum Kind { open, close, atom, end } kind;
  std::string text;
  std::size_t line;
};

class TreeLexer {
 public:
  explicit TreeLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    if (pos_ >= text_.size()) return {Token::end, "", line_};
    const char c = text_[pos_];
    if (c == '(') return ++pos_, Token{Token::open, "(", line_};
    if (c == ')') return ++pos_, Token{Token::close, ")", line_};
    const auto start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '(' && text_[pos_] != ')') {
      ++pos_;
    }
    return {Token::atom, std::string(text_.substr(start, pos_ - start)), line_};
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class TreeParser {
 public:
  TreeParser(std::string_view text, const ProductSpace& space, const OutputSpace& outputs)
      : lex_(text), space_(space), outputs_(outputs) {
    advance();
  }

  DecisionTree parse_all() {
    auto t = parse_tree();
    if (tok_.kind != Token::end) throw ParseError(tok_.line, "trailing input after tree");
    return t;
  }

 private:
  void advance() { tok_ = lex_.next(); }

  void expect(Token::Kind kind, const char* what) {
    if (tok_.kind != kind) {
      throw ParseError(tok_.line, std::string("expected ") + what +
                                      (tok_.kind == Token::end ? " at end of input" : ", got '" + tok_.text + "'"));
    }
    advance();
  }

  std::string atom(const char* what) {
    if (tok_.kind != Token::atom) {
      throw ParseError(tok_.line, std::string("expected ") + what);
    }
    auto s = tok_.text;
    advance();
    return s;
  }

  DecisionTree parse_tree() {
    expect(Token::open, "'('");
    const auto line = tok_.line;
    const auto head = atom("'leaf' or 'q'");
    if (head == "leaf") {
      const auto label = atom("output label");
      auto z = outputs_.index_of(label);
      if (!z) throw ParseError(line, "unknown output label '" + label + "'");
      expect(Token::close, "')'");
      return DecisionTree::leaf(static_cast<std::uint32_t>(*z));
    }
    if (head != "q") throw ParseError(line, "expected 'leaf' or 'q', got '" + head + "'");
    const auto coord_tok = atom("coordinate index");
    const auto i = parse_count(coord_tok, line, "coordinate index");
    if (i < 1 || i > space_.dimension()) {
      throw ParseError(line, "coordinate " + coord_tok + " outside 1.." + std::to_string(space_.dimension()));
    }
    const auto& domain = space_.coord(i - 1);
    std::vector<std::optional<DecisionTree>> slots(domain.size());
    while (tok_.kind == Token::open) {
      advance();
      const auto value_line = tok_.line;
      const auto value = atom("branch value");
      auto a = domain.index_of(value);
      if (!a) {
        throw ParseError(value_line, "'" + value + "' is not a value of coordinate " + coord_tok);
      }
      if (slots[*a]) throw ParseError(value_line, "duplicate branch for value '" + value + "'");
      slots[*a] = parse_tree();
      expect(Token::close, "')' closing branch");
    }
    expect(Token::close, "')'");
    std::vector<DecisionTree> children;
    for (std::size_t a = 0; a < slots.size(); ++a) {
      if (!slots[a]) {
        throw ParseError(line, "query of coordinate " + coord_tok + " has no branch for value '" +
                                   domain.values[a] + "'");
      }
      children.push_back(std::move(*slots[a]));
    }
    return DecisionTree::query(i - 1, std::move(children));
  }

  TreeLexer lex_;
  Token tok_{Token::end, "", 0};
  const ProductSpace& space_;
  const OutputSpace& outputs_;
};

void format_node(const DecisionTree& t, const ProductSpace& space, const OutputSpace& outputs,
                 std::string& out) {
  if (t.is_leaf()) {
    out += "(leaf " + outputs.label(t.label()) + ")";
    return;
  }
  out += "(q " + std::to_string(t.coord() + 1);
  const auto& domain = space.coord(t.coord());
  for (std::size_t a = 0; a < t.children().size(); ++a) {
    out += " (" + domain.values[a] + " ";
    format_node(t.child(a), space, outputs, out);
    out += ")";
  }
  out += ")";
}

}  // namespace

DecisionTree parse_tree(std::string_view text, const ProductSpace& space, const OutputSpace& outputs) {
  auto tree = TreeParser(text, space, outputs).parse_all();
  try {
    validate(tree, space, outputs);
  } catch (const DomainError& e) {
    throw ParseError(0, e.what());
  }
  return tree;
}

std::string format_tree(const DecisionTree& tree, const ProductSpace& space, const OutputSpace& outputs) {
  std::string out;
  format_node(tree, space, outputs, out);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dtinf
