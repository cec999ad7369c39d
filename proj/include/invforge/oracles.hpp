#pragma once

#include "invforge/instances.hpp"
#include "invforge/query.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace invforge {

/// Enumeration limits. INVFORGE_CAP, when set to an integer, replaces all of
/// them at once.
struct Caps {
  int sat_vars = 24;
  int cvp_vectors = 24;
  int graph_vertices = 16;
  int binary_latent = 24;
  int pattern_units = 18;

  static Caps defaults() { return {}; }
  static Caps from_env();
};

enum class Decision { kNo, kYes };
enum class Certificate { kExhaustive, kPatternEnumeration, kFalsifierOnly };

struct VerdictStats {
  std::uint64_t latents = 0;   // latents or source candidates enumerated
  std::uint64_t patterns = 0;  // activation patterns (search nodes) visited
  std::uint64_t lp_pivots = 0;
  std::uint64_t restarts = 0;
};

struct Verdict {
  Decision decision = Decision::kNo;
  std::optional<RationalVector> witness;
  Certificate certificate = Certificate::kExhaustive;
  VerdictStats stats;
  std::optional<Rational> best_distance_pow;  // minimum found, when known

  bool yes() const { return decision == Decision::kYes; }
};

std::string to_string(Decision d);
std::string to_string(Certificate c);
nlohmann::json verdict_to_json(const Verdict& v);

/// Source witnesses as 0/1 vectors: variable i true, basis vector i chosen,
/// vertex i selected.
std::vector<bool> witness_bits(const Verdict& v);

// --- source problems -------------------------------------------------------

/// Witness: the lexicographically smallest satisfying assignment (F < T).
Verdict solve_sat_bruteforce(const CnfFormula& f, const Caps& caps = Caps::from_env());
/// YES iff min ||By - t||_p^p <= r^p over y in {0,1}^n.
Verdict solve_cvp01_bruteforce(const CvpInstance& c, const Caps& caps = Caps::from_env());
/// YES iff some n/2-subset is a clique of total weight (sum rho^p) < M.
Verdict solve_halfclique_bruteforce(const HalfCliqueQuery& q, int p, const Caps& caps = Caps::from_env());
/// YES iff some q-subset touches every edge.
Verdict solve_vertexcover_bruteforce(const VertexCoverQuery& q, const Caps& caps = Caps::from_env());

// --- binary latents ----------------------------------------------------------

struct BruteForceOptions {
  unsigned workers = 1;
  Caps caps = Caps::from_env();
};

/// Exhaustive over the binary domain. Witness: the lexicographically smallest
/// minimizer of dist^p, reported when it passes the threshold.
Verdict invert_binary_bruteforce(const InversionQuery& q, const BruteForceOptions& opt = {});

// --- real latents ------------------------------------------------------------

/// One flag per unit, layer by layer; true = active (pre-activation >= 0).
using ActivationPattern = std::vector<bool>;

ActivationPattern pattern_of(const ReluNetwork& net, const RationalVector& z);

/// Closed polyhedron where the pattern holds, and the affine map A z + c that
/// the network computes on it.
struct PatternRegion {
  std::vector<RationalVector> rows;  // rows[k] . z + offsets[k] >= 0
  std::vector<Rational> offsets;
  RationalMatrix map;
  RationalVector shift;

  bool contains(const RationalVector& z) const;
};

PatternRegion region_of(const ReluNetwork& net, const ActivationPattern& pattern);

/// Real domain, theta = 0 (any p) or p = 1. Depth-first search over patterns
/// with exact LP pruning; stops at the first accepting region.
Verdict enumerate_patterns_invert(const InversionQuery& q, const Caps& caps = Caps::from_env());

struct FalsifierOptions {
  std::uint64_t restarts = 10000;
  std::uint64_t seed = 1;
  /// Coordinate levels whose full grid is tried before random starts.
  std::vector<Rational> corner_levels;
  std::int64_t max_den = 1 << 12;
  int sweeps = 6;
};

/// Multi-start coordinate descent in double precision. YES only for exactly
/// re-verified candidates; otherwise a non-certifying NO.
Verdict falsify_real(const InversionQuery& q, const FalsifierOptions& opt = {});

}  // namespace invforge
