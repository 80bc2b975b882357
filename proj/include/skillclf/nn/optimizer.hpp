#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "skillclf/error.hpp"

namespace skillclf::nn {

enum class OptimizerKind { Adam, RmsProp };

constexpr std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::Adam ? "adam" : "rmsprop";
}

inline OptimizerKind parse_optimizer(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "adam") return OptimizerKind::Adam;
  if (lower == "rmsprop") return OptimizerKind::RmsProp;
  throw Error(ErrorCode::InvalidHyperparams, "unknown optimizer '" + std::string(name) + "'");
}

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kRmsRho = 0.9;
inline constexpr double kOptimizerEpsilon = 1e-8;

/// Moment accumulators per parameter block. RMSprop only uses `second`.
template <typename Scalar>
struct OptimizerState {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  OptimizerKind kind = OptimizerKind::Adam;
  std::vector<Array> first;
  std::vector<Array> second;
  std::int64_t step = 0;

  template <typename View>
  static OptimizerState for_params(OptimizerKind kind, std::span<const View> params) {
    OptimizerState state;
    state.kind = kind;
    for (const auto& p : params) {
      state.first.push_back(Array::Zero(p.size()));
      state.second.push_back(Array::Zero(p.size()));
    }
    return state;
  }
};

/// One update of every parameter block.
///   Adam:    m = b1 m + (1-b1) g;  v = b2 v + (1-b2) g^2;
///            p -= lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
///   RMSprop: v = rho v + (1-rho) g^2;  p -= lr * g / (sqrt(v) + eps)
template <typename Scalar, typename ParamView, typename GradView>
void optimizer_step(OptimizerState<Scalar>& state, std::span<ParamView> params, std::span<const GradView> grads,
                    double learning_rate) {
  if (params.size() != grads.size() || params.size() != state.second.size()) {
    throw Error(ErrorCode::ShapeMismatch, "parameter, gradient and optimizer block counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i].size() != grads[i].size() || params[i].size() != state.second[i].size()) {
      throw Error(ErrorCode::ShapeMismatch, "block " + std::to_string(i) + " sizes differ");
    }
  }
  ++state.step;
  const auto eps = static_cast<Scalar>(kOptimizerEpsilon);
  if (state.kind == OptimizerKind::Adam) {
    const auto b1 = static_cast<Scalar>(kAdamBeta1);
    const auto b2 = static_cast<Scalar>(kAdamBeta2);
    const double t = static_cast<double>(state.step);
    const auto step_size = static_cast<Scalar>(learning_rate / (1.0 - std::pow(kAdamBeta1, t)));
    const auto inv_c2 = static_cast<Scalar>(1.0 / (1.0 - std::pow(kAdamBeta2, t)));
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& m = state.first[i];
      auto& v = state.second[i];
      const auto& g = grads[i];
      m = b1 * m + (Scalar(1) - b1) * g;
      v = b2 * v + (Scalar(1) - b2) * g.square();
      params[i] -= step_size * m / ((v * inv_c2).sqrt() + eps);
    }
  } else {
    const auto rho = static_cast<Scalar>(kRmsRho);
    const auto lr = static_cast<Scalar>(learning_rate);
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto& v = state.second[i];
      const auto& g = grads[i];
      v = rho * v + (Scalar(1) - rho) * g.square();
      params[i] -= lr * g / (v.sqrt() + eps);
    }
  }
}

}  // namespace skillclf::nn
