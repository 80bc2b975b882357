#pragma once

#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "skillclf/nn/architecture.hpp"

namespace skillclf::nn {

inline constexpr double kEluAlpha = 1.0;
inline constexpr double kLReluSlope = 0.01;

/// Value and derivative at x. At x = 0 the elu and lrelu derivatives are 1.
inline std::pair<double, double> activation_apply(Activation kind, double x) {
  switch (kind) {
    case Activation::Sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-x));
      return {s, s * (1.0 - s)};
    }
    case Activation::Tanh: {
      const double t = std::tanh(x);
      return {t, 1.0 - t * t};
    }
    case Activation::Elu:
      if (x > 0.0) return {x, 1.0};
      if (x == 0.0) return {0.0, 1.0};
      return {kEluAlpha * (std::exp(x) - 1.0), kEluAlpha * std::exp(x)};
    case Activation::LRelu:
      if (x >= 0.0) return {x, 1.0};
      return {kLReluSlope * x, kLReluSlope};
  }
  return {x, 1.0};
}

/// Element-wise activation of a pre-activation block.
template <typename Derived>
auto activate(Activation kind, const Eigen::ArrayBase<Derived>& z) {
  using Scalar = typename Derived::Scalar;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto alpha = static_cast<Scalar>(kEluAlpha);
  const auto slope = static_cast<Scalar>(kLReluSlope);
  switch (kind) {
    case Activation::Sigmoid: return Array(Scalar(1) / (Scalar(1) + (-z).exp()));
    case Activation::Tanh: return Array(z.tanh());
    case Activation::Elu: return Array((z > Scalar(0)).select(z, alpha * (z.exp() - Scalar(1))));
    case Activation::LRelu: return Array((z >= Scalar(0)).select(z, slope * z));
  }
  return Array(z);
}

/// Element-wise derivative given pre-activation z and its activation a.
template <typename DerivedZ, typename DerivedA>
auto activation_derivative(Activation kind, const Eigen::ArrayBase<DerivedZ>& z,
                           const Eigen::ArrayBase<DerivedA>& a) {
  using Scalar = typename DerivedZ::Scalar;
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto alpha = static_cast<Scalar>(kEluAlpha);
  const auto slope = static_cast<Scalar>(kLReluSlope);
  switch (kind) {
    case Activation::Sigmoid: return Array(a * (Scalar(1) - a));
    case Activation::Tanh: return Array(Scalar(1) - a.square());
    case Activation::Elu: return Array((z >= Scalar(0)).select(Array::Ones(z.rows(), z.cols()), a + alpha));
    case Activation::LRelu: return Array((z >= Scalar(0)).select(Array::Ones(z.rows(), z.cols()), Array::Constant(z.rows(), z.cols(), slope)));
  }
  return Array(Array::Ones(z.rows(), z.cols()));
}

}  // namespace skillclf::nn
