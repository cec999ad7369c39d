#pragma once

#include "invforge/query.hpp"

#include <random>

namespace invforge::testing {

struct NetworkShape {
  int max_depth = 5;
  int max_width = 16;
  int entry_range = 10;  // entries k/den with |k/den| <= entry_range
  int max_den = 8;
};

Rational random_rational(std::mt19937_64& rng, int range, int max_den);
RationalVector random_vector(std::mt19937_64& rng, Index n, int range, int max_den);
ReluNetwork random_network(std::mt19937_64& rng, const NetworkShape& shape);

/// A small binary-domain query with random network, target and threshold.
InversionQuery random_binary_query(std::mt19937_64& rng, int max_latent);

}  // namespace invforge::testing
