#pragma once

#include "invforge/relu_network.hpp"

#include <json.hpp>

#include <string>

namespace invforge {

enum class DomainKind {
  kBinaryPm1,  // {-1, 1}^N
  kBinary01,   // {0, 1}^N
  kReal,       // R^N
};

struct LatentDomain {
  DomainKind kind;
  Index dim;

  bool is_binary() const { return kind != DomainKind::kReal; }
  friend bool operator==(const LatentDomain&, const LatentDomain&) = default;
};

/// How dist^p is compared with the threshold theta = delta^p.
enum class Comparison {
  kAtMost,  // YES iff dist^p <= theta
  kBelow,   // YES iff dist^p <  theta
};

/// Does some latent z in the domain satisfy ||G(z) - x||_p^p (cmp) theta?
struct InversionQuery {
  ReluNetwork network;
  RationalVector target;
  int p = 1;
  Rational threshold_pow;
  Comparison comparison = Comparison::kAtMost;
  LatentDomain domain;

  /// Throws InputError on inconsistent dimensions, p < 1 or theta < 0.
  void validate() const;

  bool accepts(const Rational& dist_pow) const {
    return comparison == Comparison::kAtMost ? dist_pow <= threshold_pow : dist_pow < threshold_pow;
  }

  DistancePow distance_of(const RationalVector& z) const { return distance_pow(forward(network, z), target, p); }

  /// True iff z lies in the domain and its exact distance passes the threshold.
  bool accepts_latent(const RationalVector& z) const;

  bool in_domain(const RationalVector& z) const;
};

std::string to_string(DomainKind kind);
DomainKind domain_kind_from_string(const std::string& s);
std::string to_string(Comparison c);
Comparison comparison_from_string(const std::string& s);

/// Query fields at the top level, network embedded under "network".
nlohmann::json query_to_json(const InversionQuery& q);
/// Accepts a bare query document or a full reduction artifact.
InversionQuery query_from_json(const nlohmann::json& doc);

}  // namespace invforge
