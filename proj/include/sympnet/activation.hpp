#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sympnet {

enum class Activation { Sigmoid, Tanh };

inline Activation activation_from_string(const std::string& name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "tanh") return Activation::Tanh;
  throw std::invalid_argument("unknown activation '" + name + "' (expected sigmoid or tanh)");
}

inline std::string to_string(Activation a) { return a == Activation::Sigmoid ? "sigmoid" : "tanh"; }

/// Componentwise activation of an array expression.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
activate(Activation a, const Eigen::ArrayBase<Derived>& x) {
  if (a == Activation::Sigmoid) return x.logistic();
  return x.tanh();
}

/// Derivative expressed through the already computed activation value.
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>
activation_slope(Activation a, const Eigen::ArrayBase<Derived>& value) {
  if (a == Activation::Sigmoid) return value * (1 - value);
  return 1 - value.square();
}

}  // namespace sympnet
