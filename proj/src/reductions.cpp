#include "invforge/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace invforge {
namespace {

ReluNetwork make_network(Index input_dim, std::vector<Layer> layers, ReductionKind kind,
                         nlohmann::json extra = nlohmann::json::object()) {
  nlohmann::json meta = std::move(extra);
  meta["reduction"] = to_string(kind);
  return ReluNetwork(input_dim, std::move(layers), std::move(meta));
}

/// [W; -W], [b; -b]: the post-ReLU p-norm equals the pre-ReLU residual norm.
Layer stack_pm(const RationalMatrix& w, const RationalVector& b) {
  Layer out{RationalMatrix(2 * w.rows(), w.cols()), RationalVector(2 * b.size())};
  out.weights << w, -w;
  out.bias << b, -b;
  return out;
}

/// Rows accumulated one at a time, then frozen into a matrix.
class RowBuilder {
 public:
  explicit RowBuilder(Index cols) : cols_(cols) {}

  void add(RationalVector row, Rational bias) {
    rows_.push_back(std::move(row));
    bias_.push_back(std::move(bias));
  }

  /// Adds sum_k |a_k (row.z + bias)|^p as one row per term a_k.
  void add_weighted(const RationalVector& row, const Rational& bias, const std::vector<Rational>& terms) {
    for (const Rational& a : terms) add(RationalVector(row * a), Rational(bias * a));
  }

  RationalMatrix weights() const {
    RationalMatrix w(static_cast<Index>(rows_.size()), cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r) w.row(static_cast<Index>(r)) = rows_[r].transpose();
    return w;
  }

  RationalVector bias() const {
    RationalVector b(static_cast<Index>(bias_.size()));
    for (std::size_t r = 0; r < bias_.size(); ++r) b(static_cast<Index>(r)) = bias_[r];
    return b;
  }

 private:
  Index cols_;
  std::vector<RationalVector> rows_;
  std::vector<Rational> bias_;
};

RationalMatrix clause_matrix(const CnfFormula& f) {
  RationalMatrix w = RationalMatrix::Zero(f.num_clauses(), f.num_vars());
  for (int j = 0; j < f.num_clauses(); ++j) {
    for (const Literal& lit : f.clauses()[static_cast<std::size_t>(j)]) {
      w(j, lit.var - 1) = Rational(lit.positive ? -1 : 1);
    }
  }
  return w;
}

RationalVector pair_row(Index n, int u, int v, const Rational& value) {
  RationalVector row = RationalVector::Zero(n);
  row(u) = value;
  row(v) = value;
  return row;
}

Rational three_pow_minus_one(int p) { return power(Rational(3), p) - 1; }

bool is_gadget(ReductionKind kind) {
  return kind == ReductionKind::kCvpApproxReal || kind == ReductionKind::kHalfCliqueApproxReal;
}

ReductionKind real_variant(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::kCvpApproxBinary: return ReductionKind::kCvpApproxReal;
    case ReductionKind::kHalfCliqueApprox: return ReductionKind::kHalfCliqueApproxReal;
    default: throw InputError("binarization gadget needs a one-layer {0,1} approximate artifact");
  }
}

ReductionKind binary_variant(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::kCvpApproxReal: return ReductionKind::kCvpApproxBinary;
    case ReductionKind::kHalfCliqueApproxReal: return ReductionKind::kHalfCliqueApprox;
    default: return kind;
  }
}

/// Minimal number of positive p-th powers summing to each value <= limit.
std::vector<int> power_sum_table(int limit, int p, std::vector<int>& choice) {
  std::vector<int> best(static_cast<std::size_t>(limit) + 1, std::numeric_limits<int>::max());
  choice.assign(static_cast<std::size_t>(limit) + 1, 0);
  best[0] = 0;
  std::vector<int> powers;
  for (int s = 1;; ++s) {
    const long long sp = static_cast<long long>(power(BigInt(s), p));
    if (sp > limit) break;
    powers.push_back(static_cast<int>(sp));
  }
  for (int v = 1; v <= limit; ++v) {
    for (std::size_t s = 0; s < powers.size() && powers[s] <= v; ++s) {
      const int prev = best[static_cast<std::size_t>(v - powers[s])];
      if (prev != std::numeric_limits<int>::max() && prev + 1 < best[static_cast<std::size_t>(v)]) {
        best[static_cast<std::size_t>(v)] = prev + 1;
        choice[static_cast<std::size_t>(v)] = static_cast<int>(s) + 1;
      }
    }
  }
  return best;
}

/// Smallest t with den | t^p, when den is small enough to factor by trial
/// division; den itself otherwise.
BigInt power_denominator(const BigInt& den, int p) {
  if (den > BigInt(1) << 40) return den;
  long long rest = static_cast<long long>(den);
  BigInt t = 1;
  for (long long f = 2; f * f <= rest; ++f) {
    int e = 0;
    while (rest % f == 0) {
      rest /= f;
      ++e;
    }
    for (int k = 0; k < (e + p - 1) / p; ++k) t *= f;
  }
  if (rest > 1) t *= rest;
  return t;
}

nlohmann::json optional_rational(const std::optional<Rational>& v) {
  return v ? nlohmann::json(format_rational(*v)) : nlohmann::json();
}

std::vector<std::string> format_list(const std::vector<Rational>& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(format_rational(x));
  return out;
}

std::vector<Rational> parse_list(const nlohmann::json& v) {
  std::vector<Rational> out;
  for (const auto& x : v) out.push_back(parse_rational(x.get<std::string>()));
  return out;
}

Rational sum_of_powers(const std::vector<Rational>& terms, int p) {
  Rational s(0);
  for (const auto& a : terms) s += power(a, p);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::kSatExactBinary: return "sat-exact-binary";
    case ReductionKind::kSatExactReal: return "sat-exact-real";
    case ReductionKind::kCvpApproxBinary: return "cvp-approx-binary";
    case ReductionKind::kCvpApproxReal: return "cvp-approx-real";
    case ReductionKind::kHalfCliqueApprox: return "halfclique-approx-binary";
    case ReductionKind::kHalfCliqueApproxReal: return "halfclique-approx-real";
    case ReductionKind::kVertexCoverApprox: return "vertexcover-approx-binary";
  }
  return "?";
}

ReductionKind reduction_kind_from_string(const std::string& s) {
  for (auto k : {ReductionKind::kSatExactBinary, ReductionKind::kSatExactReal, ReductionKind::kCvpApproxBinary,
                 ReductionKind::kCvpApproxReal, ReductionKind::kHalfCliqueApprox,
                 ReductionKind::kHalfCliqueApproxReal, ReductionKind::kVertexCoverApprox}) {
    if (to_string(k) == s) return k;
  }
  throw InputError("unknown reduction '" + s + "'");
}

std::string to_string(GadgetMode mode) { return mode == GadgetMode::kQuarter ? "quarter" : "general"; }

std::vector<Rational> ReductionArtifact::latent_levels() const {
  switch (query.domain.kind) {
    case DomainKind::kBinaryPm1: return {Rational(-1), Rational(1)};
    case DomainKind::kBinary01: return {Rational(0), Rational(1)};
    case DomainKind::kReal:
      if (kind == ReductionKind::kSatExactReal) return {Rational(-1), Rational(1)};
      return {Rational(0), witness_map.scale};
  }
  return {};
}

// --- constants -------------------------------------------------------------

Rational choose_alpha_cvp(const Rational& radius) {
  if (radius < 0) throw InputError("CVP radius must be nonnegative");
  return radius + 1;
}

Rational choose_alpha_halfclique(int p, const Rational& total_weight, const Rational& bound) {
  if (p < 1) throw InputError("norm exponent must be positive");
  if (bound <= 0) throw InputError("half-clique bound M must be positive");
  if (total_weight < 0) throw InputError("total weight must be nonnegative");
  return bound + total_weight + 1;
}

Rational choose_alpha_vc() { return Rational(1); }

Rational choose_beta(const Rational& threshold_pow, int p) {
  if (p < 1) throw InputError("norm exponent must be positive");
  if (threshold_pow < 0) throw InputError("threshold must be nonnegative");
  return threshold_pow + 1;
}

int choose_c(const Rational& delta) {
  if (delta <= 0) throw InputError("general-mode gadget needs delta > 0");
  const BigInt c = ceil_of(Rational(2) + Rational(1) / delta) + 1;
  if (c > BigInt(1) << 30) throw InputError("delta too small for the general-mode gadget");
  return static_cast<int>(c);
}

std::vector<Rational> split_power_sum(const Rational& weight, int p) {
  if (weight <= 0) throw InputError("power split needs a positive weight");
  if (p < 1) throw InputError("norm exponent must be positive");
  if (auto root = exact_root(weight, p)) return {*root};

  // weight = N / t^p with N integral; find integers s_k with sum s_k^p = N.
  const BigInt t = power_denominator(denominator_of(weight), p);
  const Rational scaled = weight * power(Rational(t), p);
  BigInt rest = numerator_of(scaled);  // scaled is integral by choice of t
  constexpr int kTableLimit = 20000;
  std::vector<BigInt> roots;
  while (rest > kTableLimit) {
    const BigInt s = integer_root_floor(rest, p);
    roots.push_back(s);
    rest -= power(s, p);
  }
  if (rest > 0) {
    std::vector<int> choice;
    const int limit = static_cast<int>(rest);
    power_sum_table(limit, p, choice);
    for (int v = limit; v > 0;) {
      const int s = choice[static_cast<std::size_t>(v)];
      roots.push_back(BigInt(s));
      v -= static_cast<int>(power(BigInt(s), p));
    }
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  std::vector<Rational> terms;
  for (const BigInt& s : roots) terms.push_back(Rational(s, t));
  return terms;
}

Rational root_upper_bound(const Rational& value, int p) {
  if (value < 0) throw InputError("root of a negative value");
  if (value == 0) return Rational(0);
  if (auto root = exact_root(value, p)) return *root;
  constexpr long long kDen = 64;
  const double approx = std::pow(to_double(value), 1.0 / p);
  BigInt k(static_cast<long long>(std::floor(approx * kDen)));
  if (k < 0) k = 0;
  while (power(Rational(k, BigInt(kDen)), p) < value) ++k;
  return Rational(k, BigInt(kDen));
}

// --- constructions ---------------------------------------------------------

ReductionArtifact sat_to_exact_binary(const CnfFormula& f) {
  const Index n = f.num_vars();
  const Index m = f.num_clauses();
  std::vector<Layer> layers;
  layers.push_back({clause_matrix(f), RationalVector::Constant(m, Rational(-(f.width() - 1)))});
  layers.push_back({RationalMatrix::Ones(1, m), RationalVector::Zero(1)});
  InversionQuery q{make_network(n, std::move(layers), ReductionKind::kSatExactBinary),
                   RationalVector::Zero(1),
                   1,
                   Rational(0),
                   Comparison::kAtMost,
                   {DomainKind::kBinaryPm1, n}};
  return {ReductionKind::kSatExactBinary, std::move(q), {}, {WitnessKind::kSignAssignment, f.num_vars()}};
}

ReductionArtifact sat_to_exact_real(const CnfFormula& f) {
  const Index n = f.num_vars();
  const Index m = f.num_clauses();
  const RationalMatrix clauses = clause_matrix(f);
  const Rational k_minus_1(f.width() - 1);
  const RationalMatrix eye = RationalMatrix::Identity(n, n);

  std::vector<Layer> layers;
  // a = ReLU(z + 1), bv = ReLU(2 - a); the clamp is v = min(max(z,-1),1) = 1 - bv.
  layers.push_back({eye, RationalVector::Constant(n, Rational(1))});
  layers.push_back({RationalMatrix(-eye), RationalVector::Constant(n, Rational(2))});

  // Clause units on v, then ReLU(v_i) and ReLU(-v_i), all rewritten in bv.
  Layer third{RationalMatrix::Zero(m + 2 * n, n), RationalVector(m + 2 * n)};
  third.weights.topRows(m) = -clauses;
  for (Index j = 0; j < m; ++j) third.bias(j) = clauses.row(j).sum() - k_minus_1;
  for (Index i = 0; i < n; ++i) {
    third.weights(m + i, i) = Rational(-1);
    third.bias(m + i) = Rational(1);
    third.weights(m + n + i, i) = Rational(1);
    third.bias(m + n + i) = Rational(-1);
  }
  layers.push_back(std::move(third));

  Layer fourth{RationalMatrix::Zero(2, m + 2 * n), RationalVector::Zero(2)};
  fourth.weights.block(0, 0, 1, m).setConstant(Rational(1));
  fourth.weights.block(1, m, 1, 2 * n).setConstant(Rational(1));
  layers.push_back(std::move(fourth));

  RationalVector target(2);
  target << Rational(0), Rational(n);
  InversionQuery q{make_network(n, std::move(layers), ReductionKind::kSatExactReal),
                   std::move(target),
                   1,
                   Rational(0),
                   Comparison::kAtMost,
                   {DomainKind::kReal, n}};
  return {ReductionKind::kSatExactReal, std::move(q), {}, {WitnessKind::kSignAssignment, f.num_vars()}};
}

ReductionArtifact cvp_to_approx_binary(const CvpInstance& c, bool strict) {
  c.validate();
  if (strict && c.p % 2 == 0) {
    throw UnsupportedError("CVP reduction is stated for odd p; even p is covered by the half-clique and "
                           "vertex-cover reductions (pass strict=false to build it anyway)");
  }
  const Index d = c.dim();
  const Index n = c.num_vectors();
  const Rational alpha = choose_alpha_cvp(c.radius);

  // Columns come in pairs (z_{2i-1}, z_{2i}); the basis vector sits on the first.
  RationalMatrix w = RationalMatrix::Zero(d + n, 2 * n);
  RationalVector b(d + n);
  for (Index i = 0; i < n; ++i) w.block(0, 2 * i, d, 1) = c.basis.col(i);
  b.head(d) = -c.target;
  for (Index i = 0; i < n; ++i) {
    w(d + i, 2 * i) = alpha;
    w(d + i, 2 * i + 1) = alpha;
    b(d + i) = -alpha;
  }
  std::vector<Layer> layers;
  layers.push_back(stack_pm(w, b));
  nlohmann::json meta = nlohmann::json::object();
  if (c.p % 2 == 0) meta["note"] = "even p: construction is valid, hardness claim covers odd p only";

  ReductionConstants k;
  k.alpha = alpha;
  k.alpha_pow = power(alpha, c.p);
  k.radius = c.radius;
  InversionQuery q{make_network(2 * n, std::move(layers), ReductionKind::kCvpApproxBinary, std::move(meta)),
                   RationalVector::Zero(2 * (d + n)),
                   c.p,
                   power(c.radius, c.p),
                   Comparison::kAtMost,
                   {DomainKind::kBinary01, 2 * n}};
  return {ReductionKind::kCvpApproxBinary, std::move(q), std::move(k),
          {WitnessKind::kPairedSelection, static_cast<int>(n)}};
}

ReductionArtifact binarization_gadget(const ReductionArtifact& inner, const Rational& delta, GadgetMode mode) {
  const InversionQuery& iq = inner.query;
  if (iq.network.depth() != 1 || iq.domain.kind != DomainKind::kBinary01 || !iq.target.isZero()) {
    throw InputError("binarization gadget needs a one-layer {0,1} artifact with zero target");
  }
  if (delta < 0) throw InputError("delta must be nonnegative");
  if (power(delta, iq.p) < iq.threshold_pow) throw InputError("delta^p is below the inner threshold");

  GadgetParams g{mode, delta, {}, {}, {}, std::nullopt};
  if (mode == GadgetMode::kQuarter) {
    if (delta >= make_rational(1, 4)) throw InputError("quarter-mode gadget needs delta < 1/4");
    g.upper = Rational(1);
    g.bias = make_rational(1, 2);
    g.slope = Rational(4);
  } else {
    const int c = choose_c(delta);
    g.c = c;
    g.upper = Rational(c) * delta;
    g.bias = Rational(c - 1) * delta;
    g.slope = Rational(1);
  }

  const Index n = iq.domain.dim;
  const Layer& inner_layer = iq.network.layer(0);
  const Index r = inner_layer.fan_out();
  const Rational& u_max = g.upper;
  const Rational half = u_max / 2;
  const RationalMatrix eye = RationalMatrix::Identity(n, n);

  std::vector<Layer> layers;
  // a = ReLU(z), bv = ReLU(U - a); the clamp is v = min(max(z,0),U) = U - bv.
  layers.push_back({eye, RationalVector::Zero(n)});
  layers.push_back({RationalMatrix(-eye), RationalVector::Constant(n, u_max)});

  // u_i = ReLU(h - v_i), then ReLU(v_i - U/2) and ReLU(U/2 - v_i) whose sum is |v_i - U/2|.
  Layer third{RationalMatrix::Zero(3 * n, n), RationalVector(3 * n)};
  third.weights.topRows(n) = eye;
  third.bias.head(n).setConstant(Rational(g.bias - u_max));
  third.weights.middleRows(n, n) = -eye;
  third.bias.segment(n, n).setConstant(half);
  third.weights.bottomRows(n) = eye;
  third.bias.tail(n).setConstant(Rational(-half));
  layers.push_back(std::move(third));

  // t_i = ReLU(1 - s*u_i) collapses to {0,1}; the last unit carries sum |v_i - U/2|.
  Layer fourth{RationalMatrix::Zero(n + 1, 3 * n), RationalVector::Zero(n + 1)};
  fourth.weights.topLeftCorner(n, n) = RationalMatrix(-g.slope * eye);
  fourth.bias.head(n).setConstant(Rational(1));
  fourth.weights.block(n, n, 1, 2 * n).setConstant(Rational(1));
  layers.push_back(std::move(fourth));

  Layer fifth{RationalMatrix::Zero(r + 1, n + 1), RationalVector::Zero(r + 1)};
  fifth.weights.topLeftCorner(r, n) = inner_layer.weights;
  fifth.bias.head(r) = inner_layer.bias;
  fifth.weights(r, n) = Rational(1);
  layers.push_back(std::move(fifth));

  const ReductionKind kind = real_variant(inner.kind);
  nlohmann::json meta = iq.network.metadata();
  meta["gadget_mode"] = to_string(mode);

  RationalVector target = RationalVector::Zero(r + 1);
  target(r) = Rational(n) * half;

  ReductionConstants k = inner.constants;
  k.gadget = g;
  WitnessMap wm = inner.witness_map;
  wm.scale = u_max;
  InversionQuery q{make_network(n, std::move(layers), kind, std::move(meta)),
                   std::move(target),
                   iq.p,
                   iq.threshold_pow,
                   iq.comparison,
                   {DomainKind::kReal, n}};
  return {kind, std::move(q), std::move(k), wm};
}

ReductionArtifact cvp_to_approx_real(const CvpInstance& c, bool strict) {
  const ReductionArtifact inner = cvp_to_approx_binary(c, strict);
  const GadgetMode mode = c.radius < make_rational(1, 4) ? GadgetMode::kQuarter : GadgetMode::kGeneral;
  return binarization_gadget(inner, c.radius, mode);
}

ReductionArtifact halfclique_to_approx(const HalfCliqueQuery& hq, int p) {
  const WeightedGraph& g = hq.graph;
  const int n = g.num_vertices();
  if (n % 2 != 0) throw InputError("half-clique needs an even number of vertices");
  if (p < 1 || p % 2 != 0) throw UnsupportedError("half-clique reduction needs an even positive p");
  const Rational sum_w = total_weight(g, p);
  const Rational alpha_pow = choose_alpha_halfclique(p, sum_w, hq.bound);
  const int pairs = n * (n - 1) / 2;
  const int non_edges = pairs - g.num_edges();
  const Rational theta = sum_w + alpha_pow * non_edges + three_pow_minus_one(p) * hq.bound;
  const Rational beta_pow = choose_beta(theta, p);
  const auto alpha_terms = split_power_sum(alpha_pow, p);
  const auto beta_terms = split_power_sum(beta_pow, p);

  RowBuilder rows(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (const Rational* rho = g.find(u, v)) {
        rows.add(pair_row(n, u, v, Rational(2 * *rho)), Rational(-*rho));
      } else {
        rows.add_weighted(pair_row(n, u, v, Rational(2)), Rational(-1), alpha_terms);
      }
    }
  }
  rows.add_weighted(RationalVector::Ones(n), Rational(-n / 2), beta_terms);

  const RationalMatrix w = rows.weights();
  std::vector<Layer> layers;
  layers.push_back(stack_pm(w, rows.bias()));

  ReductionConstants k;
  k.alpha_pow = alpha_pow;
  k.alpha_terms = alpha_terms;
  k.beta_pow = beta_pow;
  k.beta_terms = beta_terms;
  k.total_weight = sum_w;
  k.bound = hq.bound;
  k.non_edges = non_edges;
  InversionQuery q{make_network(n, std::move(layers), ReductionKind::kHalfCliqueApprox),
                   RationalVector::Zero(2 * w.rows()),
                   p,
                   theta,
                   Comparison::kBelow,
                   {DomainKind::kBinary01, n}};
  return {ReductionKind::kHalfCliqueApprox, std::move(q), std::move(k), {WitnessKind::kVertexSubset, n}};
}

ReductionArtifact halfclique_to_approx_real(const HalfCliqueQuery& hq, int p, std::optional<GadgetMode> mode) {
  const ReductionArtifact inner = halfclique_to_approx(hq, p);
  const Rational delta = root_upper_bound(inner.query.threshold_pow, p);
  const GadgetMode chosen = mode.value_or(delta < make_rational(1, 4) ? GadgetMode::kQuarter : GadgetMode::kGeneral);
  return binarization_gadget(inner, delta, chosen);
}

ReductionArtifact vertexcover_to_approx(const VertexCoverQuery& vq, int p) {
  const WeightedGraph& g = vq.graph;
  const int n = g.num_vertices();
  if (vq.size < 0 || vq.size > n) throw InputError("cover size out of range");
  if (p < 1 || p % 2 != 0) throw UnsupportedError("vertex-cover reduction needs an even positive p");
  const Rational alpha = choose_alpha_vc();
  const Rational alpha_pow = power(alpha, p);
  const int edges = g.num_edges();
  const Rational theta = alpha_pow * edges;
  const Rational beta_pow = choose_beta(theta, p);
  const auto beta_terms = split_power_sum(beta_pow, p);

  RowBuilder rows(n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (g.has_edge(u, v)) {
        rows.add(pair_row(n, u, v, Rational(2 * alpha)), Rational(-alpha));
      } else {
        rows.add(RationalVector::Zero(n), Rational(0));
      }
    }
  }
  rows.add_weighted(RationalVector::Ones(n), Rational(-(n - vq.size)), beta_terms);

  const RationalMatrix w = rows.weights();
  std::vector<Layer> layers;
  layers.push_back(stack_pm(w, rows.bias()));

  ReductionConstants k;
  k.alpha = alpha;
  k.alpha_pow = alpha_pow;
  k.beta_pow = beta_pow;
  k.beta_terms = beta_terms;
  k.edges = edges;
  InversionQuery q{make_network(n, std::move(layers), ReductionKind::kVertexCoverApprox),
                   RationalVector::Zero(2 * w.rows()),
                   p,
                   theta,
                   Comparison::kAtMost,
                   {DomainKind::kBinary01, n}};
  return {ReductionKind::kVertexCoverApprox, std::move(q), std::move(k), {WitnessKind::kCoverComplement, n}};
}

// --- validity predicates ---------------------------------------------------

std::vector<std::string> constant_violations(const ReductionArtifact& a) {
  std::vector<std::string> bad;
  const ReductionConstants& k = a.constants;
  const int p = a.query.p;
  const Rational& theta = a.query.threshold_pow;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  const ReductionKind base = binary_variant(a.kind);

  if (base == ReductionKind::kCvpApproxBinary) {
    need(k.alpha && k.radius && *k.alpha > *k.radius, "alpha > r");
    need(k.alpha && k.alpha_pow && power(*k.alpha, p) == *k.alpha_pow, "alpha_pow == alpha^p");
    need(k.radius && power(*k.radius, p) == theta, "theta == r^p");
  }
  if (base == ReductionKind::kHalfCliqueApprox) {
    const bool have = k.alpha_pow && k.total_weight && k.bound && k.non_edges;
    need(have, "half-clique constants present");
    if (have) {
      const Rational f = three_pow_minus_one(p);
      need(f * *k.alpha_pow > *k.total_weight + f * *k.bound, "(3^p-1) alpha^p > sum w + (3^p-1) M");
      need(theta == *k.total_weight + *k.alpha_pow * *k.non_edges + f * *k.bound,
           "theta == sum w + alpha^p Z + (3^p-1) M");
      need(sum_of_powers(k.alpha_terms, p) == *k.alpha_pow, "sum alpha_terms^p == alpha^p");
    }
  }
  if (base == ReductionKind::kVertexCoverApprox) {
    need(k.alpha && *k.alpha > 0, "alpha > 0");
    need(k.alpha_pow && k.edges && theta == *k.alpha_pow * *k.edges, "theta == Z alpha^p");
  }
  if (base == ReductionKind::kHalfCliqueApprox || base == ReductionKind::kVertexCoverApprox) {
    need(k.beta_pow && *k.beta_pow > theta, "beta^p > theta");
    need(k.beta_pow && sum_of_powers(k.beta_terms, p) == *k.beta_pow, "sum beta_terms^p == beta^p");
  }
  if (is_gadget(a.kind)) {
    need(k.gadget.has_value(), "gadget parameters present");
    if (k.gadget) {
      const GadgetParams& g = *k.gadget;
      need(g.delta >= 0 && power(g.delta, p) >= theta, "delta^p >= theta");
      if (g.mode == GadgetMode::kQuarter) {
        need(g.delta < make_rational(1, 4), "delta < 1/4");
        need(g.upper == 1 && g.bias == make_rational(1, 2) && g.slope == 4, "quarter mode U=1, h=1/2, s=4");
      } else {
        need(g.c.has_value(), "c present");
        if (g.c) {
          const Rational c(*g.c);
          need((c - 2) * g.delta >= 1, "(c-2) delta >= 1");
          need(g.upper == c * g.delta && g.bias == (c - 1) * g.delta && g.slope == 1,
               "general mode U=c delta, h=(c-1) delta, s=1");
        }
      }
      need(g.upper - g.delta >= g.bias, "U - delta >= h");
      need(g.slope * (g.bias - g.delta) >= 1, "s (h - delta) >= 1");
      need(a.witness_map.scale == g.upper, "witness scale == U");
    }
  }
  return bad;
}

// --- witness translation ---------------------------------------------------

RationalVector latent_from_source(const ReductionArtifact& a, const std::vector<bool>& source) {
  const WitnessMap& wm = a.witness_map;
  if (static_cast<int>(source.size()) != wm.source_size) throw InputError("source witness has wrong length");
  const Index n = a.query.domain.dim;
  RationalVector z(n);
  switch (wm.kind) {
    case WitnessKind::kSignAssignment:
      for (Index i = 0; i < n; ++i) z(i) = Rational(source[static_cast<std::size_t>(i)] ? 1 : -1);
      return z;
    case WitnessKind::kPairedSelection:
      for (Index i = 0; i < n / 2; ++i) {
        const bool y = source[static_cast<std::size_t>(i)];
        z(2 * i) = Rational(y ? 1 : 0);
        z(2 * i + 1) = Rational(y ? 0 : 1);
      }
      break;
    case WitnessKind::kVertexSubset:
      for (Index i = 0; i < n; ++i) z(i) = Rational(source[static_cast<std::size_t>(i)] ? 1 : 0);
      break;
    case WitnessKind::kCoverComplement:
      for (Index i = 0; i < n; ++i) z(i) = Rational(source[static_cast<std::size_t>(i)] ? 0 : 1);
      break;
  }
  return z * wm.scale;
}

RationalVector gadget_collapse_outputs(const ReductionArtifact& a, const RationalVector& z) {
  if (!is_gadget(a.kind)) throw InputError("artifact has no binarization gadget");
  const ReluNetwork& net = a.query.network;
  if (z.size() != net.input_dim()) throw InputError("latent length mismatch");
  RationalVector h = z;
  for (Index l = 0; l < 4; ++l) {
    const Layer& layer = net.layer(l);
    h = relu(RationalVector(layer.weights * h + layer.bias));
  }
  return h;
}

std::vector<bool> source_from_latent(const ReductionArtifact& a, const RationalVector& z_in) {
  if (z_in.size() != a.query.domain.dim) throw InputError("latent length mismatch");
  RationalVector z = z_in;
  const Rational half = make_rational(1, 2);
  if (is_gadget(a.kind)) z = gadget_collapse_outputs(a, z_in).head(a.query.domain.dim);
  const WitnessMap& wm = a.witness_map;
  std::vector<bool> out(static_cast<std::size_t>(wm.source_size));
  switch (wm.kind) {
    case WitnessKind::kSignAssignment:
      // Clamped v_i > 0 means TRUE; for {-1,1} latents this is just the sign.
      for (int i = 0; i < wm.source_size; ++i) out[static_cast<std::size_t>(i)] = z(i) > 0;
      break;
    case WitnessKind::kPairedSelection:
      for (int i = 0; i < wm.source_size; ++i) out[static_cast<std::size_t>(i)] = z(2 * i) > half;
      break;
    case WitnessKind::kVertexSubset:
      for (int i = 0; i < wm.source_size; ++i) out[static_cast<std::size_t>(i)] = z(i) > half;
      break;
    case WitnessKind::kCoverComplement:
      for (int i = 0; i < wm.source_size; ++i) out[static_cast<std::size_t>(i)] = z(i) < half;
      break;
  }
  return out;
}

// --- documents -------------------------------------------------------------

nlohmann::json artifact_to_json(const ReductionArtifact& a) {
  nlohmann::json doc = query_to_json(a.query);
  doc["version"] = "invforge-artifact-1";
  doc["reduction"] = to_string(a.kind);
  const ReductionConstants& k = a.constants;
  nlohmann::json c = nlohmann::json::object();
  if (k.alpha) c["alpha"] = optional_rational(k.alpha);
  if (k.alpha_pow) c["alpha_pow"] = optional_rational(k.alpha_pow);
  if (!k.alpha_terms.empty()) c["alpha_terms"] = format_list(k.alpha_terms);
  if (k.beta_pow) c["beta_pow"] = optional_rational(k.beta_pow);
  if (!k.beta_terms.empty()) c["beta_terms"] = format_list(k.beta_terms);
  if (k.radius) c["radius"] = optional_rational(k.radius);
  if (k.total_weight) c["total_weight"] = optional_rational(k.total_weight);
  if (k.bound) c["bound"] = optional_rational(k.bound);
  if (k.non_edges) c["non_edges"] = *k.non_edges;
  if (k.edges) c["edges"] = *k.edges;
  if (k.gadget) {
    const GadgetParams& g = *k.gadget;
    c["gadget"] = {{"mode", to_string(g.mode)},
                   {"delta", format_rational(g.delta)},
                   {"upper", format_rational(g.upper)},
                   {"bias", format_rational(g.bias)},
                   {"slope", format_rational(g.slope)}};
    if (g.c) c["gadget"]["c"] = *g.c;
  }
  doc["constants"] = std::move(c);

  static const std::map<WitnessKind, std::string> kinds = {{WitnessKind::kSignAssignment, "sign_assignment"},
                                                           {WitnessKind::kPairedSelection, "paired_selection"},
                                                           {WitnessKind::kVertexSubset, "vertex_subset"},
                                                           {WitnessKind::kCoverComplement, "cover_complement"}};
  doc["witness_map"] = {{"kind", kinds.at(a.witness_map.kind)},
                        {"source_size", a.witness_map.source_size},
                        {"scale", format_rational(a.witness_map.scale)},
                        {"latent_levels", format_list(a.latent_levels())}};
  return doc;
}

ReductionArtifact artifact_from_json(const nlohmann::json& doc) {
  try {
    ReductionArtifact a{reduction_kind_from_string(doc.at("reduction").get<std::string>()),
                        query_from_json(doc),
                        {},
                        {WitnessKind::kSignAssignment, 0}};
    const auto& c = doc.at("constants");
    auto opt = [&](const char* key) -> std::optional<Rational> {
      if (!c.contains(key)) return std::nullopt;
      return parse_rational(c.at(key).get<std::string>());
    };
    ReductionConstants& k = a.constants;
    k.alpha = opt("alpha");
    k.alpha_pow = opt("alpha_pow");
    if (c.contains("alpha_terms")) k.alpha_terms = parse_list(c.at("alpha_terms"));
    k.beta_pow = opt("beta_pow");
    if (c.contains("beta_terms")) k.beta_terms = parse_list(c.at("beta_terms"));
    k.radius = opt("radius");
    k.total_weight = opt("total_weight");
    k.bound = opt("bound");
    if (c.contains("non_edges")) k.non_edges = c.at("non_edges").get<int>();
    if (c.contains("edges")) k.edges = c.at("edges").get<int>();
    if (c.contains("gadget")) {
      const auto& g = c.at("gadget");
      GadgetParams gp{g.at("mode").get<std::string>() == "quarter" ? GadgetMode::kQuarter : GadgetMode::kGeneral,
                      parse_rational(g.at("delta").get<std::string>()),
                      parse_rational(g.at("upper").get<std::string>()),
                      parse_rational(g.at("bias").get<std::string>()),
                      parse_rational(g.at("slope").get<std::string>()),
                      std::nullopt};
      if (g.contains("c")) gp.c = g.at("c").get<int>();
      k.gadget = gp;
    }
    const auto& w = doc.at("witness_map");
    const std::string wk = w.at("kind").get<std::string>();
    if (wk == "sign_assignment") a.witness_map.kind = WitnessKind::kSignAssignment;
    else if (wk == "paired_selection") a.witness_map.kind = WitnessKind::kPairedSelection;
    else if (wk == "vertex_subset") a.witness_map.kind = WitnessKind::kVertexSubset;
    else if (wk == "cover_complement") a.witness_map.kind = WitnessKind::kCoverComplement;
    else throw InputError("unknown witness map kind '" + wk + "'");
    a.witness_map.source_size = w.at("source_size").get<int>();
    a.witness_map.scale = parse_rational(w.at("scale").get<std::string>());
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed artifact document: ") + e.what());
  }
}

}  // namespace invforge
