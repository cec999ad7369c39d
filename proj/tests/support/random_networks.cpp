#include "random_networks.hpp"

namespace invforge::testing {

Rational random_rational(std::mt19937_64& rng, int range, int max_den) {
  const int den = std::uniform_int_distribution<int>(1, max_den)(rng);
  const int num = std::uniform_int_distribution<int>(-range * den, range * den)(rng);
  return make_rational(num, den);
}

RationalVector random_vector(std::mt19937_64& rng, Index n, int range, int max_den) {
  RationalVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = random_rational(rng, range, max_den);
  return v;
}

ReluNetwork random_network(std::mt19937_64& rng, const NetworkShape& shape) {
  auto width = [&] { return std::uniform_int_distribution<int>(1, shape.max_width)(rng); };
  const int depth = std::uniform_int_distribution<int>(1, shape.max_depth)(rng);
  const Index input = width();
  Index fan_in = input;
  std::vector<Layer> layers;
  for (int l = 0; l < depth; ++l) {
    const Index fan_out = width();
    Layer layer{RationalMatrix(fan_out, fan_in), random_vector(rng, fan_out, shape.entry_range, shape.max_den)};
    for (Index i = 0; i < fan_out; ++i)
      for (Index j = 0; j < fan_in; ++j) layer.weights(i, j) = random_rational(rng, shape.entry_range, shape.max_den);
    layers.push_back(std::move(layer));
    fan_in = fan_out;
  }
  return ReluNetwork(input, std::move(layers), {{"seeded", true}});
}

InversionQuery random_binary_query(std::mt19937_64& rng, int max_latent) {
  NetworkShape shape;
  shape.max_depth = 3;
  shape.max_width = 4;
  shape.entry_range = 2;
  shape.max_den = 3;
  ReluNetwork net = random_network(rng, shape);
  while (net.input_dim() > max_latent) net = random_network(rng, shape);
  const int p = std::uniform_int_distribution<int>(1, 3)(rng);
  const bool pm1 = rng() & 1U;
  const bool strict = (rng() % 4) == 0;
  RationalVector target = random_vector(rng, net.output_dim(), 2, 2);
  for (Index i = 0; i < target.size(); ++i) target(i) = abs_value(target(i));
  const Rational theta = abs_value(random_rational(rng, 3, 2));
  const Index n = net.input_dim();
  return {std::move(net), std::move(target), p, theta,
          strict ? Comparison::kBelow : Comparison::kAtMost,
          {pm1 ? DomainKind::kBinaryPm1 : DomainKind::kBinary01, n}};
}

}  // namespace invforge::testing
