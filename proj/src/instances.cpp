#include "invforge/instances.hpp"

#include "invforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace invforge {
namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

/// Lines with comments ('c' lines, '#' lines) and blanks removed.
std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

int parse_int(const std::string& tok, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &used);
  } catch (const std::exception&) {
    throw InputError(std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  if (used != tok.size() || v < INT32_MIN || v > INT32_MAX) {
    throw InputError(std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  return static_cast<int>(v);
}

Rational uniform_rational(std::mt19937_64& rng, int range, int max_den) {
  std::uniform_int_distribution<int> den_dist(1, std::max(1, max_den));
  const int den = den_dist(rng);
  std::uniform_int_distribution<long long> num_dist(-static_cast<long long>(range) * den,
                                                    static_cast<long long>(range) * den);
  return make_rational(num_dist(rng), den);
}

}  // namespace

// ---------------------------------------------------------------------------

CnfFormula::CnfFormula(int num_vars, int width, std::vector<Clause> clauses)
    : num_vars_(num_vars), width_(width), clauses_(std::move(clauses)) {
  if (num_vars_ < 1) throw InputError("formula needs at least one variable");
  if (width_ < 1) throw InputError("clause width k must be at least 1");
  if (width_ > num_vars_) throw InputError("clause width exceeds the number of variables");
  for (std::size_t j = 0; j < clauses_.size(); ++j) {
    const Clause& c = clauses_[j];
    if (static_cast<int>(c.size()) != width_) {
      throw InputError("clause " + std::to_string(j + 1) + " has width " + std::to_string(c.size()) +
                       ", expected " + std::to_string(width_));
    }
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (c[a].var < 1 || c[a].var > num_vars_) {
        throw InputError("literal variable " + std::to_string(c[a].var) + " out of range");
      }
      for (std::size_t b = a + 1; b < c.size(); ++b) {
        if (c[a].var == c[b].var) {
          throw InputError("clause " + std::to_string(j + 1) + " repeats variable " + std::to_string(c[a].var));
        }
      }
    }
  }
}

bool CnfFormula::satisfied_by(const std::vector<bool>& assignment) const {
  if (static_cast<int>(assignment.size()) != num_vars_) throw InputError("assignment length mismatch");
  return std::all_of(clauses_.begin(), clauses_.end(), [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(), [&](const Literal& l) {
      return assignment[static_cast<std::size_t>(l.var - 1)] == l.positive;
    });
  });
}

CnfFormula parse_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1, m = -1;
  std::vector<Clause> clauses;
  Clause current;
  bool done = false;
  while (!done && std::getline(in, line)) {
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0] == "c" || toks[0][0] == 'c') continue;
    if (toks[0] == "%") break;
    if (toks[0] == "p") {
      if (n >= 0) throw InputError("duplicate DIMACS header");
      if (toks.size() != 4 || toks[1] != "cnf") throw InputError("malformed DIMACS header: '" + line + "'");
      n = parse_int(toks[2], "variable count");
      m = parse_int(toks[3], "clause count");
      if (n < 1 || m < 0) throw InputError("DIMACS header counts out of range");
      continue;
    }
    if (n < 0) throw InputError("clause before DIMACS header");
    for (const auto& tok : toks) {
      const int lit = parse_int(tok, "literal");
      if (lit == 0) {
        if (current.empty()) throw InputError("empty clause");
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (std::abs(lit) > n) throw InputError("literal " + tok + " out of range");
      current.push_back({std::abs(lit), lit > 0});
    }
  }
  if (n < 0) throw InputError("missing DIMACS header");
  if (!current.empty()) throw InputError("last clause is not 0-terminated");
  if (static_cast<int>(clauses.size()) != m) {
    throw InputError("header declares " + std::to_string(m) + " clauses, found " + std::to_string(clauses.size()));
  }
  int k = clauses.empty() ? 1 : static_cast<int>(clauses.front().size());
  for (const auto& c : clauses) {
    if (static_cast<int>(c.size()) != k) throw InputError("non-uniform clause widths");
  }
  return CnfFormula(n, k, std::move(clauses));
}

std::string emit_dimacs(const CnfFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars() << ' ' << f.num_clauses() << '\n';
  for (const Clause& c : f.clauses()) {
    for (const Literal& l : c) out << (l.positive ? l.var : -l.var) << ' ';
    out << "0\n";
  }
  return out.str();
}

CnfFormula gen_random_ksat(int n, int m, int k, std::uint64_t seed) {
  if (k < 1 || k > n) throw InputError("random k-SAT needs 1 <= k <= n");
  if (m < 0) throw InputError("negative clause count");
  std::mt19937_64 rng(seed);
  std::vector<int> vars(static_cast<std::size_t>(n));
  std::iota(vars.begin(), vars.end(), 1);
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    // Partial Fisher-Yates picks k distinct variables.
    for (int a = 0; a < k; ++a) {
      std::uniform_int_distribution<int> pick(a, n - 1);
      std::swap(vars[static_cast<std::size_t>(a)], vars[static_cast<std::size_t>(pick(rng))]);
    }
    Clause c;
    for (int a = 0; a < k; ++a) c.push_back({vars[static_cast<std::size_t>(a)], (rng() & 1U) != 0});
    std::sort(c.begin(), c.end(), [](const Literal& x, const Literal& y) { return x.var < y.var; });
    clauses.push_back(std::move(c));
  }
  return CnfFormula(n, k, std::move(clauses));
}

// ---------------------------------------------------------------------------

void CvpInstance::validate() const {
  if (basis.cols() < 1 || basis.rows() < 1) throw InputError("CVP basis must be non-empty");
  if (target.size() != basis.rows()) throw InputError("CVP target length does not match basis rows");
  if (radius < 0) throw InputError("CVP radius must be nonnegative");
  if (p < 1) throw InputError("CVP norm exponent must be positive");
  if (gap && *gap < 0) throw InputError("CVP gap must be nonnegative");
}

bool CvpInstance::operator==(const CvpInstance& o) const {
  return basis.rows() == o.basis.rows() && basis.cols() == o.basis.cols() && basis == o.basis &&
         target == o.target && radius == o.radius && p == o.p && gap == o.gap;
}

CvpInstance parse_cvp(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw InputError("empty CVP document");
  const auto header = split_ws(lines[0]);
  if (header.size() != 4 || header[0] != "cvp") throw InputError("CVP header must be 'cvp <d> <n> <p>'");
  const int d = parse_int(header[1], "dimension");
  const int n = parse_int(header[2], "basis size");
  const int p = parse_int(header[3], "norm exponent");
  if (d < 1 || n < 1 || p < 1) throw InputError("CVP header values must be positive");
  const std::size_t expected = static_cast<std::size_t>(d) + 3;
  if (lines.size() != expected && lines.size() != expected + 1) {
    throw InputError("CVP document has " + std::to_string(lines.size()) + " lines, expected " +
                     std::to_string(expected) + " or " + std::to_string(expected + 1));
  }
  CvpInstance c;
  c.p = p;
  c.basis.resize(d, n);
  for (int r = 0; r < d; ++r) {
    const auto row = split_ws(lines[static_cast<std::size_t>(r) + 1]);
    if (static_cast<int>(row.size()) != n) throw InputError("basis row " + std::to_string(r + 1) + " has wrong length");
    for (int col = 0; col < n; ++col) c.basis(r, col) = parse_rational(row[static_cast<std::size_t>(col)]);
  }
  const auto target = split_ws(lines[static_cast<std::size_t>(d) + 1]);
  if (static_cast<int>(target.size()) != d) throw InputError("target has wrong length");
  c.target = parse_vector(target);
  const auto radius = split_ws(lines[static_cast<std::size_t>(d) + 2]);
  if (radius.size() != 1) throw InputError("radius line must hold one rational");
  c.radius = parse_rational(radius[0]);
  if (lines.size() == expected + 1) {
    const auto gap = split_ws(lines.back());
    if (gap.size() != 1) throw InputError("gap line must hold one rational");
    c.gap = parse_rational(gap[0]);
  }
  c.validate();
  return c;
}

std::string emit_cvp(const CvpInstance& c) {
  std::ostringstream out;
  out << "cvp " << c.dim() << ' ' << c.num_vectors() << ' ' << c.p << '\n';
  for (Index r = 0; r < c.dim(); ++r) {
    for (Index col = 0; col < c.num_vectors(); ++col) out << (col ? " " : "") << format_rational(c.basis(r, col));
    out << '\n';
  }
  for (Index r = 0; r < c.dim(); ++r) out << (r ? " " : "") << format_rational(c.target(r));
  out << '\n' << format_rational(c.radius) << '\n';
  if (c.gap) out << format_rational(*c.gap) << '\n';
  return out.str();
}

CvpInstance gen_random_cvp(int n, int d, int p, int entry_range, int max_den, std::uint64_t seed) {
  if (n < 1 || d < 1 || p < 1 || entry_range < 1) throw InputError("invalid random CVP parameters");
  std::mt19937_64 rng(seed);
  CvpInstance c;
  c.p = p;
  c.basis.resize(d, n);
  for (int r = 0; r < d; ++r)
    for (int col = 0; col < n; ++col) c.basis(r, col) = uniform_rational(rng, entry_range, max_den);
  c.target.resize(d);
  for (int r = 0; r < d; ++r) c.target(r) = uniform_rational(rng, entry_range, max_den);

  RationalVector y(n);
  for (int col = 0; col < n; ++col) y(col) = Rational((rng() & 1U) ? 1 : 0);
  const RationalVector residual = c.basis * y - c.target;
  Rational dist_pow(0);
  for (Index r = 0; r < residual.size(); ++r) dist_pow += power(abs_value(residual(r)), p);
  const double dist = std::pow(to_double(dist_pow), 1.0 / p);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  c.radius = rationalize(std::max(0.0, dist * (1.0 + jitter(rng))), 16);
  return c;
}

// ---------------------------------------------------------------------------

WeightedGraph::WeightedGraph(int num_vertices, std::vector<Edge> edges) : n_(num_vertices), edges_(std::move(edges)) {
  if (n_ < 1) throw InputError("graph needs at least one vertex");
  for (Edge& e : edges_) {
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u < 0 || e.v >= n_) throw InputError("edge endpoint out of range");
    if (e.u == e.v) throw InputError("self-loop on vertex " + std::to_string(e.u + 1));
    if (e.root_weight <= 0) throw InputError("edge root-weights must be positive");
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  index_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    auto& slot = index_[static_cast<std::size_t>(e.u * n_ + e.v)];
    if (slot >= 0) throw InputError("duplicate edge " + std::to_string(e.u + 1) + " " + std::to_string(e.v + 1));
    slot = static_cast<int>(i);
    index_[static_cast<std::size_t>(e.v * n_ + e.u)] = static_cast<int>(i);
  }
}

const Rational* WeightedGraph::find(int u, int v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return nullptr;
  const int i = index_[static_cast<std::size_t>(u * n_ + v)];
  return i < 0 ? nullptr : &edges_[static_cast<std::size_t>(i)].root_weight;
}

HalfCliqueQuery make_halfclique_query(WeightedGraph g, Rational bound) {
  if (g.num_vertices() % 2 != 0) throw InputError("half-clique needs an even number of vertices");
  return {std::move(g), std::move(bound)};
}

VertexCoverQuery make_vertexcover_query(WeightedGraph g, int size) {
  if (size < 0 || size > g.num_vertices()) throw InputError("cover size out of range");
  return {std::move(g), size};
}

WeightedGraph parse_graph(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw InputError("empty graph document");
  const auto header = split_ws(lines[0]);
  if (header.size() != 2 || header[0] != "graph") throw InputError("graph header must be 'graph <n>'");
  const int n = parse_int(header[1], "vertex count");
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto toks = split_ws(lines[i]);
    if (toks.size() != 2 && toks.size() != 3) throw InputError("edge line must be 'i j [num/den]'");
    const int u = parse_int(toks[0], "vertex");
    const int v = parse_int(toks[1], "vertex");
    if (u < 1 || v < 1 || u > n || v > n) throw InputError("edge endpoint out of range");
    edges.push_back({u - 1, v - 1, toks.size() == 3 ? parse_rational(toks[2]) : Rational(1)});
  }
  return WeightedGraph(n, std::move(edges));
}

std::string emit_graph(const WeightedGraph& g) {
  std::ostringstream out;
  out << "graph " << g.num_vertices() << '\n';
  for (const Edge& e : g.edges()) out << e.u + 1 << ' ' << e.v + 1 << ' ' << format_rational(e.root_weight) << '\n';
  return out.str();
}

WeightedGraph gen_random_graph(int n, double edge_prob, int min_root, int max_root, std::uint64_t seed) {
  if (min_root < 1 || max_root < min_root) throw InputError("invalid root-weight range");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(edge_prob);
  std::uniform_int_distribution<int> weight(min_root, max_root);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (coin(rng)) edges.push_back({u, v, Rational(weight(rng))});
  return WeightedGraph(n, std::move(edges));
}

Rational total_weight(const WeightedGraph& g, int p) {
  Rational sum(0);
  for (const Edge& e : g.edges()) sum += power(e.root_weight, p);
  return sum;
}

}  // namespace invforge
