#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "skillclf/error.hpp"
#include "skillclf/nn/architecture.hpp"
#include "skillclf/nn/mlp.hpp"
#include "skillclf/nn/trainer.hpp"

namespace skillclf::nn {

template <typename Scalar>
struct ModelFile {
  Mlp<Scalar> net;
  Hyperparams hyperparams;
  nlohmann::json metadata = nlohmann::json::object();
};

inline nlohmann::json hyperparams_to_json(const Hyperparams& hp) {
  return {{"n", hp.epochs},
          {"eta", hp.learning_rate},
          {"lambda", hp.l2},
          {"optimizer", std::string(to_string(hp.optimizer))},
          {"batch_size", hp.batch_size},
          {"seed", hp.seed}};
}

inline Hyperparams hyperparams_from_json(const nlohmann::json& j) {
  Hyperparams hp;
  hp.epochs = j.at("n").get<int>();
  hp.learning_rate = j.at("eta").get<double>();
  hp.l2 = j.value("lambda", 0.0);
  hp.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
  hp.batch_size = j.value("batch_size", 32);
  hp.seed = j.value("seed", std::uint64_t{0});
  return hp;
}

template <typename Scalar>
nlohmann::json model_to_json(const Mlp<Scalar>& net, const Hyperparams& hp, const nlohmann::json& metadata) {
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row.push_back(static_cast<double>(layer.weights(r, c)));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
    nlohmann::json b = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.biases.size(); ++r) b.push_back(static_cast<double>(layer.biases(r)));
    biases.push_back(std::move(b));
  }
  return {{"architecture", format_architecture(net.spec)},
          {"weights", std::move(weights)},
          {"biases", std::move(biases)},
          {"hyperparams", hyperparams_to_json(hp)},
          {"metadata", metadata.is_null() ? nlohmann::json::object() : metadata}};
}

/// Numbers are written as the shortest decimal that reads back to the same
/// double, so load(save(m)) is bit-exact.
template <typename Scalar>
std::string save_model(const Mlp<Scalar>& net, const Hyperparams& hp,
                       const nlohmann::json& metadata = nlohmann::json::object()) {
  return model_to_json(net, hp, metadata).dump(1) + "\n";
}

template <typename Scalar>
ModelFile<Scalar> model_from_json(const nlohmann::json& doc) {
  ModelFile<Scalar> model;
  try {
    model.net.spec = parse_architecture(doc.at("architecture").get<std::string>());
    model.hyperparams = hyperparams_from_json(doc.at("hyperparams"));
    model.metadata = doc.value("metadata", nlohmann::json::object());
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    const auto& layers = model.net.spec.layers;
    if (!weights.is_array() || !biases.is_array() || weights.size() != layers.size() ||
        biases.size() != layers.size()) {
      throw Error(ErrorCode::ArchitectureMismatch, "layer count differs from the declared architecture");
    }
    int fan_in = model.net.spec.input_dim;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const int width = layers[l].width;
      const auto& w = weights[l];
      const auto& b = biases[l];
      if (!w.is_array() || !b.is_array() || static_cast<int>(w.size()) != width || static_cast<int>(b.size()) != width) {
        throw Error(ErrorCode::ArchitectureMismatch, "layer " + std::to_string(l + 1) + " is not " +
                                                         std::to_string(width) + " units wide");
      }
      DenseLayer<Scalar> layer{Matrix<Scalar>(width, fan_in), Vector<Scalar>(width)};
      for (int r = 0; r < width; ++r) {
        const auto& row = w[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != fan_in) {
          throw Error(ErrorCode::ArchitectureMismatch, "layer " + std::to_string(l + 1) + " row " +
                                                           std::to_string(r + 1) + " does not have fan-in " +
                                                           std::to_string(fan_in));
        }
        for (int c = 0; c < fan_in; ++c) layer.weights(r, c) = static_cast<Scalar>(row[static_cast<std::size_t>(c)].get<double>());
        layer.biases(r) = static_cast<Scalar>(b[static_cast<std::size_t>(r)].get<double>());
      }
      model.net.layers.push_back(std::move(layer));
      fan_in = width;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ArchitectureMismatch) throw;
    throw Error(ErrorCode::BadFormat, e.what());
  }
  return model;
}

template <typename Scalar>
ModelFile<Scalar> load_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, e.what());
  }
  return model_from_json<Scalar>(doc);
}

}  // namespace skillclf::nn
