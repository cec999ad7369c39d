#pragma once

// Deliberately simple re-implementations used to cross-check the library.
// Nothing here calls the library's forward, distance or oracle code.

#include "invforge/query.hpp"

#include <optional>
#include <vector>

namespace invforge::testing {

std::vector<Rational> naive_forward(const ReluNetwork& net, const std::vector<Rational>& z);

struct NaiveAnswer {
  bool yes = false;
  Rational min_distance_pow;
  std::vector<Rational> witness;  // lexicographically first minimizer, when yes
};

/// Recursive enumeration of the binary domain in lexicographic order.
NaiveAnswer naive_invert_binary(const InversionQuery& q);

}  // namespace invforge::testing
