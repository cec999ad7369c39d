#include "invforge/query.hpp"

namespace invforge {

void InversionQuery::validate() const {
  if (target.size() != network.output_dim()) throw InputError("target length does not match network output");
  if (p < 1) throw InputError("norm exponent must be positive");
  if (threshold_pow < 0) throw InputError("threshold must be nonnegative");
  if (domain.dim != network.input_dim()) throw InputError("latent domain dimension does not match network input");
}

bool InversionQuery::in_domain(const RationalVector& z) const {
  if (z.size() != domain.dim) return false;
  if (domain.kind == DomainKind::kReal) return true;
  const Rational low(domain.kind == DomainKind::kBinaryPm1 ? -1 : 0);
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) != low && z(i) != 1) return false;
  }
  return true;
}

bool InversionQuery::accepts_latent(const RationalVector& z) const {
  return in_domain(z) && accepts(distance_of(z).value);
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::kBinaryPm1: return "binary_pm1";
    case DomainKind::kBinary01: return "binary01";
    case DomainKind::kReal: return "real";
  }
  return "?";
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "binary_pm1") return DomainKind::kBinaryPm1;
  if (s == "binary01") return DomainKind::kBinary01;
  if (s == "real") return DomainKind::kReal;
  throw InputError("unknown latent domain '" + s + "'");
}

std::string to_string(Comparison c) { return c == Comparison::kAtMost ? "at_most" : "below"; }

Comparison comparison_from_string(const std::string& s) {
  if (s == "at_most") return Comparison::kAtMost;
  if (s == "below") return Comparison::kBelow;
  throw InputError("unknown comparison '" + s + "'");
}

nlohmann::json query_to_json(const InversionQuery& q) {
  return {{"network", network_to_json(q.network)},
          {"target", format_vector(q.target)},
          {"p", q.p},
          {"threshold_pow", format_rational(q.threshold_pow)},
          {"comparison", to_string(q.comparison)},
          {"domain", {{"kind", to_string(q.domain.kind)}, {"dim", q.domain.dim}}}};
}

InversionQuery query_from_json(const nlohmann::json& doc) {
  try {
    InversionQuery q{network_from_json(doc.at("network")),
                     parse_vector(doc.at("target").get<std::vector<std::string>>()),
                     doc.at("p").get<int>(),
                     parse_rational(doc.at("threshold_pow").get<std::string>()),
                     doc.contains("comparison") ? comparison_from_string(doc.at("comparison").get<std::string>())
                                                : Comparison::kAtMost,
                     {domain_kind_from_string(doc.at("domain").at("kind").get<std::string>()),
                      doc.at("domain").at("dim").get<Index>()}};
    q.validate();
    return q;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed query document: ") + e.what());
  }
}

}  // namespace invforge
