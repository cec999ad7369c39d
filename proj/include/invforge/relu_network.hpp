#pragma once

#include "invforge/error.hpp"
#include "invforge/scalar.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace invforge {

/// One affine map followed by ReLU: rows are fan-out, columns fan-in.
template <typename Scalar>
struct BasicLayer {
  Matrix<Scalar> weights;
  Vector<Scalar> bias;

  Index fan_in() const { return weights.cols(); }
  Index fan_out() const { return weights.rows(); }

  template <typename T>
  BasicLayer<T> cast() const {
    return {weights.template cast<T>(), bias.template cast<T>()};
  }

  bool operator==(const BasicLayer& other) const {
    return weights.rows() == other.weights.rows() && weights.cols() == other.weights.cols() &&
           bias.size() == other.bias.size() && weights == other.weights && bias == other.bias;
  }
};

/// A stack of ReLU layers G_L(z) = ReLU(W_L ... ReLU(W_1 z + b_1) ... + b_L).
/// Immutable after construction; the constructor enforces the dimension chain.
template <typename Scalar>
class BasicReluNetwork {
 public:
  using Layer = BasicLayer<Scalar>;

  BasicReluNetwork(Index input_dim, std::vector<Layer> layers, nlohmann::json metadata = nlohmann::json::object())
      : input_dim_(input_dim), layers_(std::move(layers)), metadata_(std::move(metadata)) {
    if (input_dim_ < 1) throw InputError("network input dimension must be positive");
    if (layers_.empty()) throw InputError("network needs at least one layer");
    Index fan_in = input_dim_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const Layer& layer = layers_[l];
      if (layer.fan_in() != fan_in) {
        throw InputError("layer " + std::to_string(l + 1) + " fan-in " + std::to_string(layer.fan_in()) +
                         " does not match " + std::to_string(fan_in));
      }
      if (layer.bias.size() != layer.fan_out()) {
        throw InputError("layer " + std::to_string(l + 1) + " bias length does not match row count");
      }
      fan_in = layer.fan_out();
    }
    if (!metadata_.is_object()) throw InputError("network metadata must be an object");
  }

  Index input_dim() const { return input_dim_; }
  Index output_dim() const { return layers_.back().fan_out(); }
  Index depth() const { return static_cast<Index>(layers_.size()); }

  /// max_l m_l over all layers.
  Index width() const {
    Index w = 0;
    for (const Layer& layer : layers_) w = std::max(w, layer.fan_out());
    return w;
  }

  /// Total ReLU units H = sum_l m_l.
  Index unit_count() const {
    Index h = 0;
    for (const Layer& layer : layers_) h += layer.fan_out();
    return h;
  }

  const std::vector<Layer>& layers() const { return layers_; }
  const Layer& layer(Index l) const { return layers_[static_cast<std::size_t>(l)]; }
  const nlohmann::json& metadata() const { return metadata_; }

  template <typename T>
  BasicReluNetwork<T> cast() const {
    std::vector<BasicLayer<T>> out;
    out.reserve(layers_.size());
    for (const Layer& layer : layers_) out.push_back(layer.template cast<T>());
    return BasicReluNetwork<T>(input_dim_, std::move(out), metadata_);
  }

  bool operator==(const BasicReluNetwork& other) const {
    return input_dim_ == other.input_dim_ && layers_ == other.layers_ && metadata_ == other.metadata_;
  }

 private:
  Index input_dim_;
  std::vector<Layer> layers_;
  nlohmann::json metadata_;
};

using Layer = BasicLayer<Rational>;
using ReluNetwork = BasicReluNetwork<Rational>;

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.cwiseMax(Scalar(0));
}

/// G_L(z); ReLU is applied after every layer, including the last.
template <typename Scalar>
Vector<Scalar> forward(const BasicReluNetwork<Scalar>& net, const Vector<Scalar>& z) {
  if (z.size() != net.input_dim()) {
    throw InputError("latent has length " + std::to_string(z.size()) + ", network expects " +
                     std::to_string(net.input_dim()));
  }
  Vector<Scalar> h = z;
  for (const auto& layer : net.layers()) {
    Vector<Scalar> pre = layer.weights * h + layer.bias;
    h = relu(pre);
  }
  return h;
}

/// Hardware floating point version of forward on an exact network.
inline Eigen::VectorXd forward_float(const ReluNetwork& net, const Eigen::VectorXd& z) {
  return forward(net.cast<double>(), z);
}

/// ||y - x||_p^p, kept as a p-th power so it stays rational.
template <typename Scalar>
struct BasicDistancePow {
  Scalar value;
  int p;
};
using DistancePow = BasicDistancePow<Rational>;

template <typename Scalar>
BasicDistancePow<Scalar> distance_pow(const Vector<Scalar>& y, const Vector<Scalar>& x, int p) {
  if (y.size() != x.size()) throw InputError("distance between vectors of different lengths");
  if (p < 1) throw InputError("norm exponent must be a positive integer");
  Scalar total(0);
  for (Index i = 0; i < y.size(); ++i) total += power(abs_value(Scalar(y(i) - x(i))), p);
  return {total, p};
}

nlohmann::json network_to_json(const ReluNetwork& net);
ReluNetwork network_from_json(const nlohmann::json& doc);

/// UTF-8 JSON document ("relunet-1"); deterministic, so equal networks give
/// identical bytes.
std::string serialize(const ReluNetwork& net);
ReluNetwork deserialize(std::string_view bytes);

}  // namespace invforge
