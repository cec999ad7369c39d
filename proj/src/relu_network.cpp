#include "invforge/relu_network.hpp"

namespace invforge {
namespace {

constexpr const char* kNetworkVersion = "relunet-1";

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InputError(std::string("network document is missing '") + key + "'");
  }
  return doc.at(key);
}

Index require_dim(const nlohmann::json& doc, const char* key) {
  const auto& v = require(doc, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(std::string("'") + key + "' must be a nonnegative integer");
  }
  return static_cast<Index>(v.get<long long>());
}

Rational require_rational(const nlohmann::json& v) {
  if (!v.is_string()) throw InputError("rational entries must be \"num/den\" strings");
  return parse_rational(v.get<std::string>());
}

}  // namespace

nlohmann::json network_to_json(const ReluNetwork& net) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& layer : net.layers()) {
    nlohmann::json weights = nlohmann::json::array();
    for (Index r = 0; r < layer.weights.rows(); ++r) {
      for (Index c = 0; c < layer.weights.cols(); ++c) weights.push_back(format_rational(layer.weights(r, c)));
    }
    layers.push_back({{"rows", layer.fan_out()},
                      {"cols", layer.fan_in()},
                      {"weights", std::move(weights)},
                      {"bias", format_vector(layer.bias)}});
  }
  return {{"version", kNetworkVersion},
          {"input_dim", net.input_dim()},
          {"layers", std::move(layers)},
          {"metadata", net.metadata()}};
}

ReluNetwork network_from_json(const nlohmann::json& doc) {
  const auto& version = require(doc, "version");
  if (!version.is_string() || version.get<std::string>() != kNetworkVersion) {
    throw InputError("unsupported network document version");
  }
  const Index input_dim = require_dim(doc, "input_dim");
  const auto& layers_doc = require(doc, "layers");
  if (!layers_doc.is_array()) throw InputError("'layers' must be an array");
  std::vector<Layer> layers;
  for (const auto& entry : layers_doc) {
    const Index rows = require_dim(entry, "rows");
    const Index cols = require_dim(entry, "cols");
    const auto& weights = require(entry, "weights");
    const auto& bias = require(entry, "bias");
    if (!weights.is_array() || static_cast<Index>(weights.size()) != rows * cols) {
      throw InputError("weights array does not have rows*cols entries");
    }
    if (!bias.is_array() || static_cast<Index>(bias.size()) != rows) {
      throw InputError("bias length does not match row count");
    }
    Layer layer{RationalMatrix(rows, cols), RationalVector(rows)};
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) layer.weights(r, c) = require_rational(weights[static_cast<std::size_t>(r * cols + c)]);
      layer.bias(r) = require_rational(bias[static_cast<std::size_t>(r)]);
    }
    layers.push_back(std::move(layer));
  }
  nlohmann::json metadata = doc.contains("metadata") ? doc.at("metadata") : nlohmann::json::object();
  return ReluNetwork(input_dim, std::move(layers), std::move(metadata));
}

std::string serialize(const ReluNetwork& net) { return network_to_json(net).dump(1) + "\n"; }

ReluNetwork deserialize(std::string_view bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed network document: ") + e.what());
  }
  return network_from_json(doc);
}

}  // namespace invforge
