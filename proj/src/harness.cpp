#include "invforge/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

namespace invforge {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string decision_of(const Verdict& v) { return to_string(v.decision); }

class Recorder {
 public:
  Recorder(VerifyReport& r) : r_(r) {}

  void compare(std::uint64_t seed, const Verdict& src, const Verdict& inv, const std::string& note = "") {
    ++r_.trials;
    if (src.yes()) ++r_.yes_count;
    if (src.decision == inv.decision) {
      ++r_.agreements;
    } else {
      r_.disagreements.push_back({seed, decision_of(src), decision_of(inv), note});
    }
  }

  /// Boundary instances must be YES on both sides.
  void boundary(std::uint64_t seed, const Verdict& src, const Verdict& inv) {
    ++r_.boundary_trials;
    ++r_.trials;
    if (src.yes()) ++r_.yes_count;
    if (src.yes() && inv.yes()) {
      ++r_.agreements;
    } else {
      r_.disagreements.push_back({seed, decision_of(src), decision_of(inv), "boundary instance"});
    }
  }

  void witness(bool ok, std::uint64_t seed, const std::string& what) {
    ++r_.witness_checks;
    if (!ok) r_.witness_failures.push_back("seed " + std::to_string(seed) + ": " + what);
  }

  void constants(const ReductionArtifact& a, std::uint64_t seed) {
    ++r_.artifacts_checked;
    for (const auto& v : constant_violations(a)) {
      r_.constant_failures.push_back("seed " + std::to_string(seed) + " " + to_string(a.kind) + ": " + v);
    }
  }

 private:
  VerifyReport& r_;
};

// --- source-side witness checks ---------------------------------------------

bool cvp_accepts(const CvpInstance& c, const std::vector<bool>& y) {
  RationalVector yv(c.num_vectors());
  for (Index i = 0; i < yv.size(); ++i) yv(i) = Rational(y[static_cast<std::size_t>(i)] ? 1 : 0);
  return distance_pow(RationalVector(c.basis * yv), c.target, c.p).value <= power(c.radius, c.p);
}

bool is_light_halfclique(const HalfCliqueQuery& q, int p, const std::vector<bool>& s) {
  const WeightedGraph& g = q.graph;
  const int n = g.num_vertices();
  if (std::count(s.begin(), s.end(), true) != n / 2) return false;
  Rational w(0);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!s[static_cast<std::size_t>(u)] || !s[static_cast<std::size_t>(v)]) continue;
      const Rational* rho = g.find(u, v);
      if (rho == nullptr) return false;
      w += power(*rho, p);
    }
  }
  return w < q.bound;
}

bool is_cover(const VertexCoverQuery& q, const std::vector<bool>& s) {
  if (std::count(s.begin(), s.end(), true) != q.size) return false;
  return std::all_of(q.graph.edges().begin(), q.graph.edges().end(), [&](const Edge& e) {
    return s[static_cast<std::size_t>(e.u)] || s[static_cast<std::size_t>(e.v)];
  });
}

// --- families ----------------------------------------------------------------

void sat_trial(Recorder& rec, const CnfFormula& f, std::uint64_t seed, bool real, const Caps& caps) {
  const Verdict src = solve_sat_bruteforce(f, caps);
  const ReductionArtifact a = real ? sat_to_exact_real(f) : sat_to_exact_binary(f);
  rec.constants(a, seed);
  const Verdict inv = real ? enumerate_patterns_invert(a.query, caps) : invert_binary_bruteforce(a.query, {1, caps});
  rec.compare(seed, src, inv);
  if (real) {
    // Every satisfying assignment, not just the oracle's, must land on the target.
    const int n = f.num_vars();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      std::vector<bool> x(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (mask >> i) & 1U;
      if (!f.satisfied_by(x)) continue;
      const RationalVector z = latent_from_source(a, x);
      rec.witness(forward(a.query.network, z) == a.query.target, seed, "satisfying assignment misses the target");
    }
  } else if (src.yes()) {
    rec.witness(a.query.accepts_latent(latent_from_source(a, witness_bits(src))), seed,
                "forwarded assignment rejected by the query");
  }
  if (inv.yes()) {
    rec.witness(f.satisfied_by(source_from_latent(a, *inv.witness)), seed, "decoded latent does not satisfy");
  }
}

CnfFormula random_formula(std::mt19937_64& rng, int n_max, int m_max_per_var, int k_max, int m_cap) {
  const int n = uniform_int(rng, 1, n_max);
  const int k = uniform_int(rng, 1, std::min(k_max, n));
  const int m = uniform_int(rng, 0, std::min(m_cap, m_max_per_var * n));
  return gen_random_ksat(n, m, k, rng());
}

/// Every set of at most m_max distinct k-clauses over n variables.
void for_each_small_formula(int n, int k, int m_max, const std::function<void(const CnfFormula&)>& fn) {
  std::vector<Clause> universe;
  for (unsigned vars = 0; vars < (1U << n); ++vars) {
    if (std::popcount(vars) != k) continue;
    for (unsigned signs = 0; signs < (1U << k); ++signs) {
      Clause c;
      int slot = 0;
      for (int v = 0; v < n; ++v) {
        if ((vars >> v) & 1U) c.push_back({v + 1, ((signs >> slot++) & 1U) == 0});
      }
      universe.push_back(c);
    }
  }
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    std::vector<Clause> clauses;
    for (auto i : pick) clauses.push_back(universe[i]);
    fn(CnfFormula(n, k, clauses));
    if (static_cast<int>(pick.size()) == m_max) return;
    for (std::size_t i = from; i < universe.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
}

void verify_sat(const VerifyOptions& opt, Recorder& rec, bool real) {
  const int n_max = real ? std::min(opt.n_max, 2) : opt.n_max;
  if (opt.exhaustive) {
    std::uint64_t index = 0;
    for (int n = 1; n <= n_max; ++n) {
      for (int k = 1; k <= std::min(2, n); ++k) {
        for_each_small_formula(n, k, real ? 2 : 3, [&](const CnfFormula& f) { sat_trial(rec, f, index++, real, opt.caps); });
      }
    }
    return;
  }
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + t;
    std::mt19937_64 rng(seed);
    const CnfFormula f = real ? random_formula(rng, n_max, 2, 2, 2) : random_formula(rng, n_max, 2, 3, 20);
    sat_trial(rec, f, seed, real, opt.caps);
  }
}

Verdict invert_real_approx(const ReductionArtifact& a, const VerifyOptions& opt, std::uint64_t seed) {
  if (a.query.p == 1 && a.query.network.unit_count() <= opt.caps.pattern_units) {
    return enumerate_patterns_invert(a.query, opt.caps);
  }
  FalsifierOptions fo;
  fo.restarts = opt.restarts;
  fo.seed = seed;
  fo.corner_levels = a.latent_levels();
  return falsify_real(a.query, fo);
}

void cvp_trial(Recorder& rec, const CvpInstance& c, std::uint64_t seed, bool real, bool boundary,
               const VerifyOptions& opt) {
  const Verdict src = solve_cvp01_bruteforce(c, opt.caps);
  const ReductionArtifact a = real ? cvp_to_approx_real(c) : cvp_to_approx_binary(c);
  rec.constants(a, seed);
  const Verdict inv = real ? invert_real_approx(a, opt, seed) : invert_binary_bruteforce(a.query, {1, opt.caps});
  if (boundary) rec.boundary(seed, src, inv);
  else rec.compare(seed, src, inv);
  if (src.yes()) {
    const RationalVector z = latent_from_source(a, witness_bits(src));
    rec.witness(a.query.accepts_latent(z), seed, "forwarded CVP solution rejected by the query");
    if (real) {
      const RationalVector y = forward(a.query.network, z);
      const Rational expected = Rational(a.query.domain.dim) * a.constants.gadget->upper / 2;
      rec.witness(y(y.size() - 1) == expected, seed, "gadget sum coordinate differs from N*U/2");
    }
  }
  if (inv.yes()) rec.witness(cvp_accepts(c, source_from_latent(a, *inv.witness)), seed, "decoded latent is not a CVP solution");
}

void verify_cvp(const VerifyOptions& opt, Recorder& rec, bool real) {
  const int n_max = real ? std::min(opt.n_max, 3) : opt.n_max;
  const int d_max = real ? 3 : 5;
  auto pick_p = [&](std::uint64_t t) { return opt.p > 0 ? opt.p : (t % 2 == 0 ? 1 : 3); };
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + t;
    std::mt19937_64 rng(seed);
    const int n = uniform_int(rng, 1, n_max);
    const int d = uniform_int(rng, 1, d_max);
    cvp_trial(rec, gen_random_cvp(n, d, pick_p(t), 3, 8, rng()), seed, real, false, opt);
  }
  const std::uint64_t boundary = std::max<std::uint64_t>(1, opt.trials / 25);
  for (std::uint64_t j = 0; j < boundary; ++j) {
    const std::uint64_t seed = opt.seed + opt.trials + j;
    std::mt19937_64 rng(seed);
    const int n = uniform_int(rng, 1, n_max);
    const int d = uniform_int(rng, 1, d_max);
    cvp_trial(rec, make_boundary_cvp(n, d, pick_p(j), rng()), seed, real, true, opt);
  }
}

void halfclique_trial(Recorder& rec, const HalfCliqueQuery& q, int p, std::uint64_t seed, bool real,
                      const VerifyOptions& opt) {
  const Verdict src = solve_halfclique_bruteforce(q, p, opt.caps);
  const ReductionArtifact a = real ? halfclique_to_approx_real(q, p) : halfclique_to_approx(q, p);
  rec.constants(a, seed);
  const Verdict inv = real ? invert_real_approx(a, opt, seed) : invert_binary_bruteforce(a.query, {1, opt.caps});
  rec.compare(seed, src, inv);
  if (src.yes()) {
    rec.witness(a.query.accepts_latent(latent_from_source(a, witness_bits(src))), seed,
                "forwarded half-clique rejected by the query");
  }
  if (inv.yes()) {
    rec.witness(is_light_halfclique(q, p, source_from_latent(a, *inv.witness)), seed,
                "decoded latent is not a light half-clique");
  }
}

void verify_halfclique(const VerifyOptions& opt, Recorder& rec, bool real) {
  auto pick_p = [&](std::uint64_t t) { return opt.p > 0 ? opt.p : (real || t % 2 == 0 ? 2 : 4); };
  if (opt.exhaustive) {
    // All graphs on four vertices with unit root-weights.
    const int n = 4;
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::uint64_t index = 0;
    for (unsigned mask = 0; mask < (1U << pairs.size()); ++mask) {
      std::vector<Edge> edges;
      for (std::size_t e = 0; e < pairs.size(); ++e) {
        if ((mask >> e) & 1U) edges.push_back({pairs[e].first, pairs[e].second, Rational(1)});
      }
      const WeightedGraph g(n, edges);
      for (const Rational& m : {make_rational(1, 2), Rational(1), make_rational(3, 2), Rational(2)}) {
        for (int p : opt.p > 0 ? std::vector<int>{opt.p} : std::vector<int>{2, 4}) {
          halfclique_trial(rec, make_halfclique_query(g, m), p, index++, real, opt);
        }
      }
    }
    return;
  }
  std::vector<int> sizes;
  for (int n : real ? std::vector<int>{2, 4} : std::vector<int>{4, 6, 8}) {
    if (n <= opt.n_max) sizes.push_back(n);
  }
  if (sizes.empty()) sizes.push_back(2);
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + t;
    std::mt19937_64 rng(seed);
    const int n = sizes[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(sizes.size()) - 1))];
    const int p = pick_p(t);
    const WeightedGraph g = gen_random_graph(n, 0.75, 1, 2, rng());
    const int half = n / 2;
    const long long heaviest = static_cast<long long>(half * (half - 1) / 2) << p;
    const Rational m(uniform_int(rng, 1, static_cast<int>(std::max<long long>(2, heaviest))));
    halfclique_trial(rec, make_halfclique_query(g, m), p, seed, real, opt);
  }
}

void vertexcover_trial(Recorder& rec, const VertexCoverQuery& q, int p, std::uint64_t seed, const Caps& caps) {
  const Verdict src = solve_vertexcover_bruteforce(q, caps);
  const ReductionArtifact a = vertexcover_to_approx(q, p);
  rec.constants(a, seed);
  const Verdict inv = invert_binary_bruteforce(a.query, {1, caps});
  rec.compare(seed, src, inv);
  if (src.yes()) {
    const RationalVector z = latent_from_source(a, witness_bits(src));
    rec.witness(a.query.distance_of(z).value == a.query.threshold_pow, seed,
                "forwarded cover does not hit distance Z*alpha^p exactly");
  }
  if (inv.yes()) {
    rec.witness(is_cover(q, source_from_latent(a, *inv.witness)), seed, "decoded latent is not a cover");
    rec.witness(inv.best_distance_pow == a.query.threshold_pow, seed, "accepted distance differs from Z*alpha^p");
  }
}

void verify_vertexcover(const VerifyOptions& opt, Recorder& rec) {
  const int p = opt.p > 0 ? opt.p : 2;
  if (opt.exhaustive) {
    std::uint64_t index = 0;
    for (int n = 1; n <= opt.n_max; ++n) {
      std::vector<std::pair<int, int>> pairs;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
        std::vector<Edge> edges;
        for (std::size_t e = 0; e < pairs.size(); ++e) {
          if ((mask >> e) & 1U) edges.push_back({pairs[e].first, pairs[e].second, Rational(1)});
        }
        const WeightedGraph g(n, edges);
        for (int q = 0; q <= n; ++q) vertexcover_trial(rec, make_vertexcover_query(g, q), p, index++, opt.caps);
      }
    }
    return;
  }
  for (std::uint64_t t = 0; t < opt.trials; ++t) {
    const std::uint64_t seed = opt.seed + t;
    std::mt19937_64 rng(seed);
    const int n = uniform_int(rng, 1, opt.n_max);
    const WeightedGraph g = gen_random_graph(n, 0.5, 1, 1, rng());
    vertexcover_trial(rec, make_vertexcover_query(g, uniform_int(rng, 0, n)), p, seed, opt.caps);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<std::string> verify_families() {
  return {"sat", "sat-real", "cvp", "cvp-real", "halfclique", "halfclique-real", "vertexcover"};
}

nlohmann::json report_to_json(const VerifyReport& r) {
  nlohmann::json dis = nlohmann::json::array();
  for (const auto& d : r.disagreements) {
    dis.push_back({{"seed", d.seed}, {"source", d.source}, {"inversion", d.inversion}, {"note", d.note}});
  }
  return {{"family", r.family},
          {"trials", r.trials},
          {"agreements", r.agreements},
          {"disagreements", dis},
          {"boundary_trials", r.boundary_trials},
          {"yes_instances", r.yes_count},
          {"witness_checks", r.witness_checks},
          {"witness_failures", r.witness_failures},
          {"artifacts_checked", r.artifacts_checked},
          {"constant_failures", r.constant_failures},
          {"wall_ms", r.wall_ms},
          {"passed", r.passed()}};
}

VerifyReport run_verify(const VerifyOptions& opt) {
  const auto families = verify_families();
  if (std::find(families.begin(), families.end(), opt.family) == families.end()) {
    throw InputError("unknown verify family '" + opt.family + "'");
  }
  if (opt.n_max < 1) throw InputError("--n-max must be positive");
  const auto start = Clock::now();
  VerifyReport report;
  report.family = opt.family;
  Recorder rec(report);
  if (opt.family == "sat") verify_sat(opt, rec, false);
  else if (opt.family == "sat-real") verify_sat(opt, rec, true);
  else if (opt.family == "cvp") verify_cvp(opt, rec, false);
  else if (opt.family == "cvp-real") verify_cvp(opt, rec, true);
  else if (opt.family == "halfclique") verify_halfclique(opt, rec, false);
  else if (opt.family == "halfclique-real") verify_halfclique(opt, rec, true);
  else verify_vertexcover(opt, rec);
  std::sort(report.disagreements.begin(), report.disagreements.end(),
            [](const Disagreement& a, const Disagreement& b) { return a.seed < b.seed; });
  report.wall_ms = elapsed_ms(start);
  return report;
}

CvpInstance make_boundary_cvp(int n, int d, int p, std::uint64_t seed) {
  if (n < 1 || d < 1 || p < 1) throw InputError("invalid boundary CVP parameters");
  std::mt19937_64 rng(seed);
  auto entry = [&] { return make_rational(uniform_int(rng, -24, 24), uniform_int(rng, 1, 8)); };
  CvpInstance c;
  c.p = p;
  c.basis.resize(d, n);
  for (Index r = 0; r < d; ++r)
    for (Index i = 0; i < n; ++i) c.basis(r, i) = entry();
  RationalVector y(n);
  for (Index i = 0; i < n; ++i) y(i) = Rational(uniform_int(rng, 0, 1));
  // One row of B is zero, so its residual -s is the same for every y; the
  // other rows vanish at y. The minimum is therefore exactly |s|^p.
  const Index fixed = uniform_int(rng, 0, d - 1);
  c.basis.row(fixed).setZero();
  c.target = c.basis * y;
  const Rational s = make_rational(uniform_int(rng, 1, 16), uniform_int(rng, 1, 8));
  c.target(fixed) = s;
  c.radius = s;
  return c;
}

// --- bench -------------------------------------------------------------------

std::vector<BenchRecord> run_bench(const std::string& family, int n_from, int n_to, int trials, std::uint64_t seed,
                                   const Caps& caps) {
  if (family != "sat" && family != "cvp" && family != "vertexcover") {
    throw InputError("bench families are sat, cvp and vertexcover");
  }
  if (n_from < 1 || n_to < n_from || trials < 1) throw InputError("invalid bench range");
  std::vector<BenchRecord> out;
  for (int n = n_from; n <= n_to; ++n) {
    std::vector<double> times;
    std::uint64_t states = 0;
    for (int t = 0; t < trials; ++t) {
      const std::uint64_t s = seed + static_cast<std::uint64_t>(n) * 1000 + static_cast<std::uint64_t>(t);
      ReductionArtifact a = [&] {
        if (family == "sat") return sat_to_exact_binary(gen_random_ksat(n, 4 * n, std::min(3, n), s));
        if (family == "cvp") return cvp_to_approx_binary(gen_random_cvp(n, 3, 1, 3, 8, s));
        return vertexcover_to_approx(make_vertexcover_query(gen_random_graph(n, 0.5, 1, 1, s), n / 2), 2);
      }();
      const auto start = Clock::now();
      const Verdict v = invert_binary_bruteforce(a.query, {1, caps});
      times.push_back(elapsed_ms(start));
      states = v.stats.latents;
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    const double median = times.size() % 2 ? times[mid] : (times[mid - 1] + times[mid]) / 2;
    out.push_back({family, n, trials, std::max(median, 1e-6), states});
  }
  return out;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::ostringstream os;
  os << "family,n,trials,median_ms,states\n";
  for (const auto& r : records) os << r.family << ',' << r.n << ',' << r.trials << ',' << r.median_ms << ',' << r.states << '\n';
  return os.str();
}

double log2_time_slope(const std::vector<BenchRecord>& records) {
  if (records.size() < 2) throw InputError("slope needs at least two records");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : records) {
    const double x = r.n;
    const double y = std::log2(r.median_ms);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(records.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

// --- command line ----------------------------------------------------------------

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

nlohmann::json parse_json(const std::string& text, const std::string& path) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

struct ReduceArgs {
  std::string from;
  std::string latent = "binary";
  int p = 1;
  std::string in;
  std::string out;
  std::string bound;
  int cover_size = -1;
  bool allow_even_p = false;
};

ReductionArtifact build_reduction(const ReduceArgs& r) {
  const bool real = r.latent == "real";
  const std::string text = read_file(r.in);
  if (r.from == "sat") {
    const CnfFormula f = parse_dimacs(text);
    return real ? sat_to_exact_real(f) : sat_to_exact_binary(f);
  }
  if (r.from == "cvp") {
    CvpInstance c = parse_cvp(text);
    if (r.p != c.p) throw InputError("--p " + std::to_string(r.p) + " does not match the instance's p = " + std::to_string(c.p));
    return real ? cvp_to_approx_real(c, !r.allow_even_p) : cvp_to_approx_binary(c, !r.allow_even_p);
  }
  if (r.p % 2 != 0) throw UnsupportedError("graph reductions require an even p");
  const WeightedGraph g = parse_graph(text);
  if (r.from == "halfclique") {
    if (r.bound.empty()) throw InputError("halfclique needs --bound M");
    const HalfCliqueQuery q = make_halfclique_query(g, parse_rational(r.bound));
    return real ? halfclique_to_approx_real(q, r.p) : halfclique_to_approx(q, r.p);
  }
  if (r.cover_size < 0) throw InputError("vertexcover needs --cover-size q");
  if (real) throw UnsupportedError("vertexcover has no real-latent reduction");
  return vertexcover_to_approx(make_vertexcover_query(g, r.cover_size), r.p);
}

void print_summary(std::ostream& out, const ReductionArtifact& a) {
  const ReluNetwork& net = a.query.network;
  out << "reduction: " << to_string(a.kind) << '\n'
      << "latent: " << to_string(a.query.domain.kind) << ", dim " << a.query.domain.dim << '\n'
      << "depth: " << net.depth() << ", width: " << net.width() << ", units: " << net.unit_count() << '\n'
      << "p: " << a.query.p << ", threshold_pow: " << format_rational(a.query.threshold_pow) << ", comparison: "
      << to_string(a.query.comparison) << '\n'
      << "constants: " << artifact_to_json(a).at("constants").dump() << '\n';
}

int exit_for(const Verdict& v) { return v.yes() ? 0 : 1; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ReLU network inversion hardness reductions and oracles", "invforge"};
  app.require_subcommand(1);

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Compile a source instance into an inversion query");
  reduce->add_option("--from", ra.from, "Source problem")->required()->check(CLI::IsMember({"sat", "cvp", "halfclique", "vertexcover"}));
  reduce->add_option("--latent", ra.latent, "Latent domain")->check(CLI::IsMember({"binary", "real"}));
  reduce->add_option("--p", ra.p, "Norm exponent")->check(CLI::PositiveNumber);
  reduce->add_option("--in", ra.in, "Instance file (DIMACS, cvp or graph text)")->required();
  reduce->add_option("--out", ra.out, "Artifact JSON file")->required();
  reduce->add_option("--bound", ra.bound, "Half-clique weight bound M (num/den)");
  reduce->add_option("--cover-size", ra.cover_size, "Vertex cover size q");
  reduce->add_flag("--allow-even-p", ra.allow_even_p, "Build the CVP reduction for even p");

  std::string query_file;
  std::string oracle;
  std::uint64_t restarts = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  auto* invert = app.add_subcommand("invert", "Decide an inversion query");
  invert->add_option("--query", query_file, "Query or artifact JSON")->required();
  invert->add_option("--oracle", oracle, "brute, pattern or falsify")->required()->check(CLI::IsMember({"brute", "pattern", "falsify"}));
  invert->add_option("--restarts", restarts, "Falsifier restarts");
  invert->add_option("--seed", seed, "Falsifier seed");
  invert->add_option("--workers", workers, "Brute-force threads");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Round-trip a reduction against the source oracle");
  verify->add_option("--family", vo.family, "Reduction family")->required()->check(CLI::IsMember(verify_families()));
  verify->add_option("--n-max", vo.n_max, "Largest source size")->required();
  verify->add_option("--trials", vo.trials, "Random trials");
  verify->add_option("--seed", vo.seed, "Base seed");
  verify->add_option("--p", vo.p, "Norm exponent (default: family mix)");
  verify->add_flag("--exhaustive", vo.exhaustive, "Enumerate every small instance instead of sampling");
  verify->add_option("--restarts", vo.restarts, "Falsifier restarts for real approximate families");

  std::string bench_family;
  int n_from = 0;
  int n_to = 0;
  int bench_trials = 3;
  std::string bench_out;
  std::uint64_t bench_seed = 1;
  auto* bench = app.add_subcommand("bench", "Time brute-force inversion across sizes");
  bench->add_option("--family", bench_family, "sat, cvp or vertexcover")->required();
  bench->add_option("--n-from", n_from)->required();
  bench->add_option("--n-to", n_to)->required();
  bench->add_option("--trials", bench_trials);
  bench->add_option("--out", bench_out, "CSV file")->required();
  bench->add_option("--seed", bench_seed);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    const Caps caps = Caps::from_env();
    if (*reduce) {
      const ReductionArtifact a = build_reduction(ra);
      write_file(ra.out, artifact_to_json(a).dump(1) + "\n");
      print_summary(out, a);
      return 0;
    }
    if (*invert) {
      const nlohmann::json doc = parse_json(read_file(query_file), query_file);
      std::vector<Rational> levels;
      InversionQuery q = [&] {
        if (doc.contains("reduction")) {
          ReductionArtifact a = artifact_from_json(doc);
          levels = a.latent_levels();
          return std::move(a.query);
        }
        return query_from_json(doc);
      }();
      Verdict v;
      if (oracle == "brute") {
        v = invert_binary_bruteforce(q, {workers, caps});
      } else if (oracle == "pattern") {
        v = enumerate_patterns_invert(q, caps);
      } else {
        FalsifierOptions fo;
        fo.restarts = restarts;
        fo.seed = seed;
        fo.corner_levels = levels;
        v = falsify_real(q, fo);
      }
      out << verdict_to_json(v).dump() << '\n';
      return exit_for(v);
    }
    if (*verify) {
      vo.caps = caps;
      const VerifyReport r = run_verify(vo);
      out << report_to_json(r).dump(1) << '\n';
      return r.passed() ? 0 : 1;
    }
    const auto records = run_bench(bench_family, n_from, n_to, bench_trials, bench_seed, caps);
    write_file(bench_out, bench_csv(records));
    out << bench_csv(records);
    return 0;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace invforge
