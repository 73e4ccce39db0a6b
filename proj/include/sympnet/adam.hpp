#pragma once

#include "sympnet/phase.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sympnet {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AdamState {
  std::int64_t step_count = 0;
  Vector m;  // first moment
  Vector v;  // second moment
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  AdamState() = default;
  AdamState(Eigen::Index n_params, double learning_rate)
      : m(Vector::Zero(n_params)), v(Vector::Zero(n_params)), lr(learning_rate) {}
};

/// One bias-corrected Adam update of `params` in place.
inline void adam_step(AdamState& state, Vector& params, const Vector& grads) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw std::invalid_argument("adam: parameter, gradient and moment sizes differ");
  }
  if (!all_finite(grads)) {
    throw TrainingError("adam: non-finite gradient at step " + std::to_string(state.step_count + 1));
  }
  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  state.m = state.beta1 * state.m + (1.0 - state.beta1) * grads;
  state.v = state.beta2 * state.v + (1.0 - state.beta2) * grads.cwiseAbs2();
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  params.array() -= state.lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + state.eps);
}

}  // namespace sympnet
