#include "naive_oracle.hpp"

#include <functional>

namespace invforge::testing {

std::vector<Rational> naive_forward(const ReluNetwork& net, const std::vector<Rational>& z) {
  std::vector<Rational> h = z;
  for (const Layer& layer : net.layers()) {
    std::vector<Rational> next;
    for (Index i = 0; i < layer.weights.rows(); ++i) {
      Rational acc = layer.bias(i);
      for (Index j = 0; j < layer.weights.cols(); ++j) acc += layer.weights(i, j) * h[static_cast<std::size_t>(j)];
      next.push_back(acc > 0 ? acc : Rational(0));
    }
    h = next;
  }
  return h;
}

NaiveAnswer naive_invert_binary(const InversionQuery& q) {
  const Rational low(q.domain.kind == DomainKind::kBinaryPm1 ? -1 : 0);
  const auto n = static_cast<std::size_t>(q.domain.dim);
  NaiveAnswer best;
  bool seen = false;
  std::vector<Rational> z(n);
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (i == n) {
      const auto y = naive_forward(q.network, z);
      Rational d(0);
      for (std::size_t k = 0; k < y.size(); ++k) {
        Rational diff = y[k] - q.target(static_cast<Index>(k));
        if (diff < 0) diff = -diff;
        Rational term(1);
        for (int e = 0; e < q.p; ++e) term *= diff;
        d += term;
      }
      if (!seen || d < best.min_distance_pow) {
        seen = true;
        best.min_distance_pow = d;
        best.witness = z;
      }
      return;
    }
    z[i] = low;
    walk(i + 1);
    z[i] = Rational(1);
    walk(i + 1);
  };
  walk(0);
  best.yes = q.comparison == Comparison::kAtMost ? best.min_distance_pow <= q.threshold_pow
                                                 : best.min_distance_pow < q.threshold_pow;
  if (!best.yes) best.witness.clear();
  return best;
}

}  // namespace invforge::testing
