#include "invforge/oracles.hpp"

#include "invforge/lp.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace invforge {
namespace {

using i128 = __int128;

void check_cap(long long size, int cap, const std::string& what) {
  if (size > cap) {
    throw CapExceeded(what + " size " + std::to_string(size) + " exceeds the enumeration cap " +
                      std::to_string(cap) + " (raise INVFORGE_CAP to override)");
  }
}

/// Coordinate i of a length-n vector lives at bit n-1-i, so integer order of
/// masks is lexicographic order of vectors.
inline bool bit_of(std::uint64_t mask, Index i, Index n) { return (mask >> (n - 1 - i)) & 1U; }

RationalVector bits_to_vector(std::uint64_t mask, Index n, const Rational& low, const Rational& high) {
  RationalVector z(n);
  for (Index i = 0; i < n; ++i) z(i) = bit_of(mask, i, n) ? high : low;
  return z;
}

RationalVector bits_to_01(std::uint64_t mask, Index n) { return bits_to_vector(mask, n, Rational(0), Rational(1)); }

// ---------------------------------------------------------------------------
// Integer-scaled evaluation for binary brute force.
// ---------------------------------------------------------------------------

struct SparseEntry {
  std::int32_t index;
  std::int64_t weight;
};

/// The network with every layer multiplied through so that, on integer
/// latents, all activations are integers: H_l = D_l * h_l.
struct ScaledNetwork {
  std::vector<std::vector<std::vector<SparseEntry>>> rows;  // [layer][unit] -> nonzeros
  std::vector<std::vector<std::int64_t>> bias;
  std::vector<std::vector<SparseEntry>> first_columns;  // layer 0, by column
  std::vector<std::int64_t> target;                     // D_L * x
  BigInt scale_pow;                                     // D_L^p
  Index width = 0;
};

BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

std::optional<ScaledNetwork> build_scaled(const InversionQuery& q) {
  const BigInt limit = BigInt(1) << 62;
  const ReluNetwork& net = q.network;
  ScaledNetwork s;
  BigInt d_prev = 1;
  std::vector<BigInt> bound(static_cast<std::size_t>(net.input_dim()), BigInt(1));
  for (Index l = 0; l < net.depth(); ++l) {
    const Layer& layer = net.layer(l);
    BigInt e = 1;
    for (Index i = 0; i < layer.weights.size(); ++i) e = lcm_of(e, denominator_of(layer.weights.data()[i]));
    for (Index i = 0; i < layer.bias.size(); ++i) e = lcm_of(e, denominator_of(layer.bias(i)));
    if (l + 1 == net.depth()) {
      for (Index i = 0; i < q.target.size(); ++i) e = lcm_of(e, denominator_of(q.target(i)));
    }
    const BigInt d = d_prev * e;
    if (d > limit) return std::nullopt;
    std::vector<std::vector<SparseEntry>> rows(static_cast<std::size_t>(layer.fan_out()));
    std::vector<std::int64_t> bias(static_cast<std::size_t>(layer.fan_out()));
    std::vector<BigInt> next(static_cast<std::size_t>(layer.fan_out()));
    for (Index i = 0; i < layer.fan_out(); ++i) {
      BigInt total = 0;
      for (Index j = 0; j < layer.fan_in(); ++j) {
        const Rational& w = layer.weights(i, j);
        if (w == 0) continue;
        const BigInt wi = numerator_of(w * e);
        if (abs_big(wi) > limit) return std::nullopt;
        rows[static_cast<std::size_t>(i)].push_back({static_cast<std::int32_t>(j), static_cast<std::int64_t>(wi)});
        total += abs_big(wi) * bound[static_cast<std::size_t>(j)];
      }
      const BigInt bi = numerator_of(layer.bias(i) * d);
      total += abs_big(bi);
      if (total > limit) return std::nullopt;
      bias[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(bi);
      next[static_cast<std::size_t>(i)] = total;
    }
    s.rows.push_back(std::move(rows));
    s.bias.push_back(std::move(bias));
    s.width = std::max(s.width, layer.fan_out());
    bound = std::move(next);
    d_prev = d;
  }
  // Distance terms: |H - X|^p summed over outputs must fit comfortably in 127 bits.
  BigInt sum = 0;
  for (Index i = 0; i < q.target.size(); ++i) {
    const BigInt x = numerator_of(q.target(i) * d_prev);
    if (abs_big(x) > limit) return std::nullopt;
    s.target.push_back(static_cast<std::int64_t>(x));
    sum += power(BigInt(bound[static_cast<std::size_t>(i)] + abs_big(x)), q.p);
  }
  if (sum > BigInt(1) << 125) return std::nullopt;
  s.scale_pow = power(d_prev, q.p);

  s.first_columns.resize(static_cast<std::size_t>(net.input_dim()));
  for (std::size_t i = 0; i < s.rows[0].size(); ++i) {
    for (const SparseEntry& e : s.rows[0][i]) {
      s.first_columns[static_cast<std::size_t>(e.index)].push_back({static_cast<std::int32_t>(i), e.weight});
    }
  }
  return s;
}

BigInt from_i128(i128 v) {
  const bool neg = v < 0;
  const auto u = static_cast<unsigned __int128>(neg ? -v : v);
  BigInt out = BigInt(static_cast<std::uint64_t>(u >> 64));
  out <<= 64;
  out += BigInt(static_cast<std::uint64_t>(u));
  return neg ? BigInt(-out) : out;
}

struct ScanResult {
  i128 best = std::numeric_limits<i128>::max();
  std::uint64_t mask = 0;
  std::uint64_t states = 0;
};

/// Visits Gray-code indices [from, to) and keeps the lexicographically smallest
/// minimizer of the scaled distance.
ScanResult scan_range(const ScaledNetwork& s, Index n, int p, bool pm1, std::uint64_t from, std::uint64_t to) {
  ScanResult r;
  if (from >= to) return r;
  const std::size_t layers = s.rows.size();
  const std::int64_t low = pm1 ? -1 : 0;
  const std::int64_t step = pm1 ? 2 : 1;

  std::vector<std::int64_t> pre0(s.bias[0]);
  std::uint64_t gray = from ^ (from >> 1);
  for (Index i = 0; i < n; ++i) {
    const std::int64_t zi = bit_of(gray, i, n) ? 1 : low;
    if (zi == 0) continue;
    for (const SparseEntry& e : s.first_columns[static_cast<std::size_t>(i)]) pre0[static_cast<std::size_t>(e.index)] += e.weight * zi;
  }
  std::vector<std::int64_t> cur(static_cast<std::size_t>(s.width));
  std::vector<std::int64_t> nxt(static_cast<std::size_t>(s.width));

  for (std::uint64_t k = from;;) {
    ++r.states;
    for (std::size_t i = 0; i < pre0.size(); ++i) cur[i] = std::max<std::int64_t>(pre0[i], 0);
    for (std::size_t l = 1; l < layers; ++l) {
      const auto& rows = s.rows[l];
      const auto& bias = s.bias[l];
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::int64_t acc = bias[i];
        for (const SparseEntry& e : rows[i]) acc += e.weight * cur[static_cast<std::size_t>(e.index)];
        nxt[i] = std::max<std::int64_t>(acc, 0);
      }
      std::swap(cur, nxt);
    }
    i128 dist = 0;
    for (std::size_t i = 0; i < s.target.size() && dist <= r.best; ++i) {
      const i128 diff = static_cast<i128>(cur[i]) - s.target[i];
      const i128 a = diff < 0 ? -diff : diff;
      i128 term = 1;
      for (int e = 0; e < p; ++e) term *= a;
      dist += term;
    }
    if (dist < r.best || (dist == r.best && gray < r.mask)) {
      r.best = dist;
      r.mask = gray;
    }
    if (++k == to) break;
    const std::uint64_t next_gray = k ^ (k >> 1);
    const std::uint64_t flipped = gray ^ next_gray;
    const Index i = n - 1 - std::countr_zero(flipped);
    const std::int64_t delta = (next_gray & flipped) ? step : -step;
    for (const SparseEntry& e : s.first_columns[static_cast<std::size_t>(i)]) pre0[static_cast<std::size_t>(e.index)] += e.weight * delta;
    gray = next_gray;
  }
  return r;
}

Rational low_level(const InversionQuery& q) { return Rational(q.domain.kind == DomainKind::kBinaryPm1 ? -1 : 0); }

Verdict finish_binary(const InversionQuery& q, const Rational& best, std::uint64_t mask, std::uint64_t states) {
  Verdict v;
  v.certificate = Certificate::kExhaustive;
  v.stats.latents = states;
  v.best_distance_pow = best;
  if (q.accepts(best)) {
    v.decision = Decision::kYes;
    v.witness = bits_to_vector(mask, q.domain.dim, low_level(q), Rational(1));
  }
  return v;
}

Verdict bruteforce_rational(const InversionQuery& q) {
  const Index n = q.domain.dim;
  const std::uint64_t total = std::uint64_t{1} << n;
  std::optional<Rational> best;
  std::uint64_t best_mask = 0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const Rational d = q.distance_of(bits_to_vector(mask, n, low_level(q), Rational(1))).value;
    if (!best || d < *best) {
      best = d;
      best_mask = mask;
    }
  }
  return finish_binary(q, *best, best_mask, total);
}

// ---------------------------------------------------------------------------
// Pattern search.
// ---------------------------------------------------------------------------

class PatternSearch {
 public:
  PatternSearch(const InversionQuery& q) : q_(q), n_(q.domain.dim) {
    const Index outputs = q.network.output_dim();
    approximate_ = q.threshold_pow > 0 || q.comparison == Comparison::kBelow;
    vars_ = approximate_ ? n_ + outputs : n_;
    lp_ = LinearProgram(vars_);
  }

  Verdict run() {
    const RationalMatrix a = RationalMatrix::Identity(n_, n_);
    const RationalVector c = RationalVector::Zero(n_);
    point_ = RationalVector::Zero(vars_);
    rows_.resize(static_cast<std::size_t>(q_.network.depth()));
    offsets_.resize(rows_.size());
    search(0, 0, a, c, point_);
    Verdict v;
    v.certificate = Certificate::kPatternEnumeration;
    v.stats = stats_;
    if (witness_) {
      v.decision = Decision::kYes;
      v.witness = witness_;
      v.best_distance_pow = q_.distance_of(*witness_).value;
    } else if (approximate_ && best_) {
      v.best_distance_pow = best_;
    }
    return v;
  }

 private:
  RationalVector padded(const RationalVector& r) const {
    RationalVector out = RationalVector::Zero(vars_);
    out.head(n_) = r;
    return out;
  }

  /// Pushes a constraint; returns a feasible point of the extended LP or
  /// nullopt. The inherited point is reused when it already satisfies it.
  std::optional<RationalVector> push(const RationalVector& r, const Rational& o, Relation rel,
                                     const RationalVector& point) {
    lp_.add(padded(r), rel, Rational(-o));
    const Rational value = r.dot(point.head(n_)) + o;
    const bool ok = rel == Relation::kGreaterEq ? value >= 0 : rel == Relation::kLessEq ? value <= 0 : value == 0;
    if (ok) return point;
    auto found = lp_feasible(lp_, &stats_.lp_pivots);
    return found;
  }

  void pop() { lp_.constraints.pop_back(); }

  void search(Index l, Index i, const RationalMatrix& a, const RationalVector& c, const RationalVector& point) {
    if (witness_) return;
    const ReluNetwork& net = q_.network;
    if (l == net.depth()) {
      leaf(a, c, point);
      return;
    }
    const Layer& layer = net.layer(l);
    auto& rows = rows_[static_cast<std::size_t>(l)];
    auto& offsets = offsets_[static_cast<std::size_t>(l)];
    if (i == layer.fan_out()) {
      RationalMatrix next(layer.fan_out(), n_);
      RationalVector shift(layer.fan_out());
      for (Index k = 0; k < layer.fan_out(); ++k) {
        next.row(k) = rows[static_cast<std::size_t>(k)].transpose();
        shift(k) = offsets[static_cast<std::size_t>(k)];
      }
      search(l + 1, 0, next, shift, point);
      return;
    }
    const RationalVector r = (layer.weights.row(i) * a).transpose();
    const Rational o = layer.weights.row(i).dot(c) + layer.bias(i);
    const bool last = l + 1 == net.depth();

    auto descend = [&](bool active, const RationalVector& pt) {
      rows.push_back(active ? r : RationalVector(RationalVector::Zero(n_)));
      offsets.push_back(active ? o : Rational(0));
      search(l, i + 1, a, c, pt);
      rows.pop_back();
      offsets.pop_back();
    };

    if (last && !approximate_) {
      // Output must equal x_i: pre = x_i when x_i > 0, pre <= 0 when x_i = 0.
      const Rational& x = q_.target(i);
      if (x < 0) return;
      const bool active = x > 0;
      if (auto pt = push(r, active ? Rational(o - x) : o, active ? Relation::kEqual : Relation::kLessEq, point)) {
        descend(active, *pt);
      }
      pop();
      return;
    }
    if (auto pt = push(r, o, Relation::kGreaterEq, point)) descend(true, *pt);
    pop();
    if (witness_) return;
    if (auto pt = push(r, o, Relation::kLessEq, point)) descend(false, *pt);
    pop();
  }

  void leaf(const RationalMatrix& a, const RationalVector& c, const RationalVector& point) {
    ++stats_.patterns;
    if (!approximate_) {
      accept(point.head(n_));
      return;
    }
    // minimize sum e_j with e_j >= |y_j - x_j|, y = A z + c.
    const Index outputs = a.rows();
    const std::size_t before = lp_.constraints.size();
    for (Index j = 0; j < outputs; ++j) {
      RationalVector plus = RationalVector::Zero(vars_);
      plus.head(n_) = -a.row(j).transpose();
      plus(n_ + j) = Rational(1);
      lp_.add(plus, Relation::kGreaterEq, Rational(c(j) - q_.target(j)));
      RationalVector minus = RationalVector::Zero(vars_);
      minus.head(n_) = a.row(j).transpose();
      minus(n_ + j) = Rational(1);
      lp_.add(minus, Relation::kGreaterEq, Rational(q_.target(j) - c(j)));
    }
    RationalVector objective = RationalVector::Zero(vars_);
    objective.tail(outputs).setConstant(Rational(1));
    lp_.objective = objective;
    const LpSolution s = lp_minimize(lp_);
    stats_.lp_pivots += s.pivots;
    lp_.objective.reset();
    lp_.constraints.resize(before);
    if (s.status != LpStatus::kOptimal) return;
    if (!best_ || s.value < *best_) best_ = s.value;
    if (q_.accepts(s.value)) accept(s.point.head(n_));
  }

  void accept(const RationalVector& z) {
    if (!q_.accepts_latent(z)) throw std::logic_error("pattern search produced a witness that does not re-verify");
    witness_ = z;
  }

  const InversionQuery& q_;
  Index n_;
  Index vars_;
  bool approximate_ = false;
  LinearProgram lp_;
  RationalVector point_;
  std::vector<std::vector<RationalVector>> rows_;
  std::vector<std::vector<Rational>> offsets_;
  VerdictStats stats_;
  std::optional<RationalVector> witness_;
  std::optional<Rational> best_;
};

// ---------------------------------------------------------------------------
// Floating point evaluation for the falsifier.
// ---------------------------------------------------------------------------

struct FloatNetwork {
  struct Entry {
    int index;
    double weight;
  };
  std::vector<std::vector<std::vector<Entry>>> rows;
  std::vector<std::vector<double>> bias;
  std::vector<double> target;
  int p = 1;
  std::size_t width = 0;

  explicit FloatNetwork(const InversionQuery& q) : p(q.p) {
    for (const Layer& layer : q.network.layers()) {
      std::vector<std::vector<Entry>> lr(static_cast<std::size_t>(layer.fan_out()));
      std::vector<double> lb(static_cast<std::size_t>(layer.fan_out()));
      for (Index i = 0; i < layer.fan_out(); ++i) {
        for (Index j = 0; j < layer.fan_in(); ++j) {
          if (layer.weights(i, j) != 0) lr[static_cast<std::size_t>(i)].push_back({static_cast<int>(j), to_double(layer.weights(i, j))});
        }
        lb[static_cast<std::size_t>(i)] = to_double(layer.bias(i));
      }
      width = std::max(width, lr.size());
      rows.push_back(std::move(lr));
      bias.push_back(std::move(lb));
    }
    for (Index i = 0; i < q.target.size(); ++i) target.push_back(to_double(q.target(i)));
    width = std::max(width, static_cast<std::size_t>(q.network.input_dim()));
  }

  double distance(const std::vector<double>& z, std::vector<double>& a, std::vector<double>& b) const {
    std::copy(z.begin(), z.end(), a.begin());
    for (std::size_t l = 0; l < rows.size(); ++l) {
      for (std::size_t i = 0; i < rows[l].size(); ++i) {
        double acc = bias[l][i];
        for (const Entry& e : rows[l][i]) acc += e.weight * a[static_cast<std::size_t>(e.index)];
        b[i] = acc > 0 ? acc : 0;
      }
      std::swap(a, b);
    }
    double total = 0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double d = std::fabs(a[i] - target[i]);
      double t = 1;
      for (int e = 0; e < p; ++e) t *= d;
      total += t;
    }
    return total;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

Caps Caps::from_env() {
  Caps caps;
  const char* raw = std::getenv("INVFORGE_CAP");
  if (raw == nullptr || *raw == '\0') return caps;
  const std::string_view text(raw);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0 || value > 62) {
    throw InputError("INVFORGE_CAP must be an integer in [0, 62]");
  }
  caps.sat_vars = caps.cvp_vectors = caps.graph_vertices = caps.binary_latent = caps.pattern_units = value;
  return caps;
}

std::string to_string(Decision d) { return d == Decision::kYes ? "YES" : "NO"; }

std::string to_string(Certificate c) {
  switch (c) {
    case Certificate::kExhaustive: return "exhaustive";
    case Certificate::kPatternEnumeration: return "pattern-enumeration";
    case Certificate::kFalsifierOnly: return "falsifier-only";
  }
  return "?";
}

nlohmann::json verdict_to_json(const Verdict& v) {
  nlohmann::json doc = {{"decision", to_string(v.decision)},
                        {"witness", v.witness ? nlohmann::json(format_vector(*v.witness)) : nlohmann::json()},
                        {"certificate", to_string(v.certificate)},
                        {"stats",
                         {{"latents_enumerated", v.stats.latents},
                          {"patterns_enumerated", v.stats.patterns},
                          {"lp_pivots", v.stats.lp_pivots},
                          {"restarts", v.stats.restarts}}}};
  if (v.best_distance_pow) doc["best_distance_pow"] = format_rational(*v.best_distance_pow);
  return doc;
}

std::vector<bool> witness_bits(const Verdict& v) {
  std::vector<bool> out;
  if (!v.witness) return out;
  for (Index i = 0; i < v.witness->size(); ++i) out.push_back((*v.witness)(i) > 0);
  return out;
}

// --- source problems -------------------------------------------------------

Verdict solve_sat_bruteforce(const CnfFormula& f, const Caps& caps) {
  const int n = f.num_vars();
  check_cap(n, caps.sat_vars, "SAT variable count");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> masks;  // (positive, negative)
  for (const Clause& c : f.clauses()) {
    std::uint64_t pos = 0;
    std::uint64_t neg = 0;
    for (const Literal& lit : c) (lit.positive ? pos : neg) |= std::uint64_t{1} << (n - lit.var);
    masks.emplace_back(pos, neg);
  }
  Verdict v;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t x = 0; x < total; ++x) {
    ++v.stats.latents;
    const bool sat = std::all_of(masks.begin(), masks.end(),
                                 [&](const auto& m) { return (x & m.first) != 0 || (~x & m.second) != 0; });
    if (sat) {
      v.decision = Decision::kYes;
      v.witness = bits_to_01(x, n);
      break;
    }
  }
  return v;
}

Verdict solve_cvp01_bruteforce(const CvpInstance& c, const Caps& caps) {
  c.validate();
  const Index n = c.num_vectors();
  check_cap(n, caps.cvp_vectors, "CVP basis");
  const Rational bound = power(c.radius, c.p);
  Verdict v;
  std::optional<Rational> best;
  std::uint64_t best_mask = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  RationalVector residual = -c.target;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 0;;) {
    ++v.stats.latents;
    Rational d(0);
    for (Index r = 0; r < residual.size(); ++r) d += power(abs_value(residual(r)), c.p);
    if (!best || d < *best || (d == *best && gray < best_mask)) {
      best = d;
      best_mask = gray;
    }
    if (++k == total) break;
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t flipped = gray ^ next;
    const Index i = n - 1 - std::countr_zero(flipped);
    if (next & flipped) residual += c.basis.col(i);
    else residual -= c.basis.col(i);
    gray = next;
  }
  v.best_distance_pow = best;
  if (*best <= bound) {
    v.decision = Decision::kYes;
    v.witness = bits_to_01(best_mask, n);
  }
  return v;
}

Verdict solve_halfclique_bruteforce(const HalfCliqueQuery& q, int p, const Caps& caps) {
  const WeightedGraph& g = q.graph;
  const int n = g.num_vertices();
  if (n % 2 != 0) throw InputError("half-clique needs an even number of vertices");
  check_cap(n, caps.graph_vertices, "graph");
  std::vector<Rational> weight(g.edges().size());
  for (std::size_t e = 0; e < weight.size(); ++e) weight[e] = power(g.edges()[e].root_weight, p);
  std::vector<std::uint64_t> adjacency(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    adjacency[static_cast<std::size_t>(e.u)] |= std::uint64_t{1} << (n - 1 - e.v);
    adjacency[static_cast<std::size_t>(e.v)] |= std::uint64_t{1} << (n - 1 - e.u);
  }
  Verdict v;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) != n / 2) continue;
    ++v.stats.latents;
    bool clique = true;
    for (int u = 0; u < n && clique; ++u) {
      if (!bit_of(mask, u, n)) continue;
      const std::uint64_t others = mask & ~(std::uint64_t{1} << (n - 1 - u));
      clique = (adjacency[static_cast<std::size_t>(u)] & others) == others;
    }
    if (!clique) continue;
    Rational w(0);
    for (std::size_t e = 0; e < weight.size(); ++e) {
      if (bit_of(mask, g.edges()[e].u, n) && bit_of(mask, g.edges()[e].v, n)) w += weight[e];
    }
    if (w < q.bound) {
      v.decision = Decision::kYes;
      v.witness = bits_to_01(mask, n);
      break;
    }
  }
  return v;
}

Verdict solve_vertexcover_bruteforce(const VertexCoverQuery& q, const Caps& caps) {
  const WeightedGraph& g = q.graph;
  const int n = g.num_vertices();
  check_cap(n, caps.graph_vertices, "graph");
  if (q.size < 0 || q.size > n) throw InputError("cover size out of range");
  Verdict v;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    if (std::popcount(mask) != q.size) continue;
    ++v.stats.latents;
    const bool cover = std::all_of(g.edges().begin(), g.edges().end(),
                                   [&](const Edge& e) { return bit_of(mask, e.u, n) || bit_of(mask, e.v, n); });
    if (cover) {
      v.decision = Decision::kYes;
      v.witness = bits_to_01(mask, n);
      break;
    }
  }
  return v;
}

// --- binary latents ----------------------------------------------------------

Verdict invert_binary_bruteforce(const InversionQuery& q, const BruteForceOptions& opt) {
  q.validate();
  if (!q.domain.is_binary()) throw InputError("brute-force inversion needs a binary latent domain");
  const Index n = q.domain.dim;
  check_cap(n, opt.caps.binary_latent, "binary latent");

  const auto scaled = build_scaled(q);
  if (!scaled) return bruteforce_rational(q);

  const std::uint64_t total = std::uint64_t{1} << n;
  const bool pm1 = q.domain.kind == DomainKind::kBinaryPm1;
  const unsigned workers = std::max(1U, std::min<unsigned>(opt.workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 256))));
  std::vector<ScanResult> parts(workers);
  if (workers == 1) {
    parts[0] = scan_range(*scaled, n, q.p, pm1, 0, total);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t from = total / workers * w;
      const std::uint64_t to = w + 1 == workers ? total : total / workers * (w + 1);
      threads.emplace_back([&, w, from, to] { parts[w] = scan_range(*scaled, n, q.p, pm1, from, to); });
    }
    for (auto& t : threads) t.join();
  }
  ScanResult best;
  for (const ScanResult& r : parts) {
    best.states += r.states;
    if (r.best < best.best || (r.best == best.best && r.mask < best.mask)) {
      best.best = r.best;
      best.mask = r.mask;
    }
  }
  const Rational dist(from_i128(best.best), scaled->scale_pow);
  return finish_binary(q, dist, best.mask, best.states);
}

// --- real latents ------------------------------------------------------------

ActivationPattern pattern_of(const ReluNetwork& net, const RationalVector& z) {
  ActivationPattern out;
  RationalVector h = z;
  for (const Layer& layer : net.layers()) {
    const RationalVector pre = layer.weights * h + layer.bias;
    for (Index i = 0; i < pre.size(); ++i) out.push_back(pre(i) >= 0);
    h = relu(pre);
  }
  return out;
}

bool PatternRegion::contains(const RationalVector& z) const {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].dot(z) + offsets[k] < 0) return false;
  }
  return true;
}

PatternRegion region_of(const ReluNetwork& net, const ActivationPattern& pattern) {
  if (static_cast<Index>(pattern.size()) != net.unit_count()) throw InputError("pattern length does not match unit count");
  const Index n = net.input_dim();
  PatternRegion region;
  RationalMatrix a = RationalMatrix::Identity(n, n);
  RationalVector c = RationalVector::Zero(n);
  std::size_t unit = 0;
  for (const Layer& layer : net.layers()) {
    RationalMatrix pre_a = layer.weights * a;
    RationalVector pre_c = layer.weights * c + layer.bias;
    for (Index i = 0; i < layer.fan_out(); ++i, ++unit) {
      if (pattern[unit]) {
        region.rows.push_back(pre_a.row(i).transpose());
        region.offsets.push_back(pre_c(i));
      } else {
        region.rows.push_back(-pre_a.row(i).transpose());
        region.offsets.push_back(-pre_c(i));
        pre_a.row(i).setZero();
        pre_c(i) = 0;
      }
    }
    a = std::move(pre_a);
    c = std::move(pre_c);
  }
  region.map = std::move(a);
  region.shift = std::move(c);
  return region;
}

Verdict enumerate_patterns_invert(const InversionQuery& q, const Caps& caps) {
  q.validate();
  if (q.domain.kind != DomainKind::kReal) throw InputError("pattern enumeration needs a real latent domain");
  const bool exact = q.threshold_pow == 0 && q.comparison == Comparison::kAtMost;
  if (!exact && q.p != 1) {
    throw UnsupportedError("pattern enumeration decides exact queries (theta = 0) or p = 1 only");
  }
  check_cap(q.network.unit_count(), caps.pattern_units, "hidden unit count");
  return PatternSearch(q).run();
}

Verdict falsify_real(const InversionQuery& q, const FalsifierOptions& opt) {
  q.validate();
  if (q.domain.kind != DomainKind::kReal) throw InputError("the falsifier works on real latent domains");
  const std::size_t n = static_cast<std::size_t>(q.domain.dim);
  const FloatNetwork net(q);
  std::vector<double> buf_a(net.width);
  std::vector<double> buf_b(net.width);
  const double theta = to_double(q.threshold_pow);
  const double slack = 1e-9 * std::max(1.0, theta);

  std::vector<double> levels;
  for (const Rational& r : opt.corner_levels) levels.push_back(to_double(r));
  double lo = -2;
  double hi = 2;
  if (!levels.empty()) {
    const auto [mn, mx] = std::minmax_element(levels.begin(), levels.end());
    const double span = std::max(*mx - *mn, 1.0);
    lo = *mn - span / 2;
    hi = *mx + span / 2;
  }

  Verdict v;
  v.certificate = Certificate::kFalsifierOnly;
  auto try_exact = [&](const std::vector<double>& z) {
    RationalVector zr(static_cast<Index>(n));
    for (std::size_t i = 0; i < n; ++i) zr(static_cast<Index>(i)) = rationalize(z[i], opt.max_den);
    if (q.accepts_latent(zr)) {
      v.decision = Decision::kYes;
      v.witness = zr;
      v.best_distance_pow = q.distance_of(zr).value;
      return true;
    }
    return false;
  };

  auto descend = [&](std::vector<double>& z) {
    double best = net.distance(z, buf_a, buf_b);
    double step = (hi - lo) / 4;
    int halvings = 0;
    for (int pass = 0; pass < 3 * opt.sweeps && halvings < opt.sweeps && best > theta + slack; ++pass) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        const double keep = z[i];
        for (double dir : {1.0, -1.0}) {
          z[i] = keep + dir * step;
          const double d = net.distance(z, buf_a, buf_b);
          if (d < best) {
            best = d;
            improved = true;
            break;
          }
          z[i] = keep;
        }
      }
      if (!improved) {
        step /= 2;
        ++halvings;
      }
    }
    return best;
  };

  std::uint64_t used = 0;
  std::vector<double> z(n);
  // Corner grid first, in lexicographic order of level indices.
  if (!levels.empty()) {
    std::vector<std::size_t> idx(n, 0);
    while (used < opt.restarts) {
      for (std::size_t i = 0; i < n; ++i) z[i] = levels[idx[i]];
      ++used;
      if (net.distance(z, buf_a, buf_b) <= theta + slack || descend(z) <= theta + slack) {
        if (try_exact(z)) break;
      }
      std::size_t k = n;
      while (k > 0 && ++idx[k - 1] == levels.size()) idx[--k] = 0;
      if (k == 0) break;
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> start(lo, hi);
  while (!v.yes() && used < opt.restarts) {
    ++used;
    for (auto& x : z) x = start(rng);
    if (descend(z) <= theta + slack && try_exact(z)) break;
  }
  v.stats.restarts = used;
  return v;
}

}  // namespace invforge
