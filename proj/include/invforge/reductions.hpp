#pragma once

#include "invforge/instances.hpp"
#include "invforge/query.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace invforge {

enum class ReductionKind {
  kSatExactBinary,
  kSatExactReal,
  kCvpApproxBinary,
  kCvpApproxReal,
  kHalfCliqueApprox,
  kHalfCliqueApproxReal,
  kVertexCoverApprox,
};

std::string to_string(ReductionKind kind);
ReductionKind reduction_kind_from_string(const std::string& s);

/// quarter: clamp to [0,1], collapse slope 4, needs delta < 1/4.
/// general: clamp to [0, c*delta], collapse slope 1, any delta > 0.
enum class GadgetMode { kQuarter, kGeneral };

std::string to_string(GadgetMode mode);

/// Parameters of the four binarization layers.
struct GadgetParams {
  GadgetMode mode;
  Rational delta;  // an upper bound on the inner query's delta
  Rational upper;  // U, the clamp ceiling
  Rational bias;   // h in u = ReLU(h - v)
  Rational slope;  // s in t = ReLU(1 - s*u)
  std::optional<int> c;
};

/// Every constant actually used by a construction. Weights that are not
/// rational p-th powers are realized as sums: sum_k terms[k]^p == *_pow.
struct ReductionConstants {
  std::optional<Rational> alpha;
  std::optional<Rational> alpha_pow;
  std::vector<Rational> alpha_terms;
  std::optional<Rational> beta_pow;
  std::vector<Rational> beta_terms;
  std::optional<Rational> radius;        // CVP r (= delta)
  std::optional<Rational> total_weight;  // half-clique sum of w_e
  std::optional<Rational> bound;         // half-clique M
  std::optional<int> non_edges;          // Z for half-clique
  std::optional<int> edges;              // Z for vertex cover
  std::optional<GadgetParams> gadget;
};

/// How a source witness (a bit per variable / basis vector / vertex) maps to
/// a latent and back.
enum class WitnessKind {
  kSignAssignment,   // TRUE -> +1, FALSE -> -1
  kPairedSelection,  // y_i = 1 -> (z_{2i-1}, z_{2i}) = (1, 0); y_i = 0 -> (0, 1)
  kVertexSubset,     // z_i = 1 iff vertex i is in the clique
  kCoverComplement,  // z_i = 0 iff vertex i is in the cover
};

struct WitnessMap {
  WitnessKind kind;
  int source_size;
  Rational scale{1};  // real gadget latents sit at scale * binary corner
};

struct ReductionArtifact {
  ReductionKind kind;
  InversionQuery query;
  ReductionConstants constants;
  WitnessMap witness_map;

  /// Coordinate values of the binary corners of the latent domain.
  std::vector<Rational> latent_levels() const;
};

// --- constructions ---------------------------------------------------------

ReductionArtifact sat_to_exact_binary(const CnfFormula& f);
ReductionArtifact sat_to_exact_real(const CnfFormula& f);

/// strict rejects even p (hardness for even p comes from the graph reductions).
ReductionArtifact cvp_to_approx_binary(const CvpInstance& c, bool strict = true);
ReductionArtifact cvp_to_approx_real(const CvpInstance& c, bool strict = true);

/// Wraps a one-layer {0,1}-domain artifact with zero target into a five-layer
/// real-domain artifact. delta must satisfy delta^p >= the inner threshold.
ReductionArtifact binarization_gadget(const ReductionArtifact& inner, const Rational& delta, GadgetMode mode);

ReductionArtifact halfclique_to_approx(const HalfCliqueQuery& q, int p);
/// mode defaults to quarter when the delta bound is below 1/4, else general.
ReductionArtifact halfclique_to_approx_real(const HalfCliqueQuery& q, int p,
                                            std::optional<GadgetMode> mode = std::nullopt);
ReductionArtifact vertexcover_to_approx(const VertexCoverQuery& q, int p);

// --- constants -------------------------------------------------------------

Rational choose_alpha_cvp(const Rational& radius);
/// Returns alpha^p.
Rational choose_alpha_halfclique(int p, const Rational& total_weight, const Rational& bound);
Rational choose_alpha_vc();
/// Returns beta^p.
Rational choose_beta(const Rational& threshold_pow, int p);
int choose_c(const Rational& delta);

/// Positive rationals a_k, in nonincreasing order, with sum a_k^p == weight
/// exactly. A single term when weight is a rational p-th power.
std::vector<Rational> split_power_sum(const Rational& weight, int p);

/// Smallest rational of the form k/64^j (searched upward) whose p-th power is
/// at least value.
Rational root_upper_bound(const Rational& value, int p);

/// Every validity predicate the artifact's constants must satisfy; empty when
/// all hold.
std::vector<std::string> constant_violations(const ReductionArtifact& a);

// --- witness translation ---------------------------------------------------

RationalVector latent_from_source(const ReductionArtifact& a, const std::vector<bool>& source);
/// Decodes a latent into source bits. Real-domain latents are first pushed
/// through the clamp/binarization layers.
std::vector<bool> source_from_latent(const ReductionArtifact& a, const RationalVector& z);

/// For gadget artifacts: the exact layer-4 outputs (t_1..t_N, sum).
RationalVector gadget_collapse_outputs(const ReductionArtifact& a, const RationalVector& z);

// --- documents -------------------------------------------------------------

nlohmann::json artifact_to_json(const ReductionArtifact& a);
ReductionArtifact artifact_from_json(const nlohmann::json& doc);

}  // namespace invforge
