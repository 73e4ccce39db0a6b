#pragma once

#include "sympnet/phase.hpp"

#include <cstdint>
#include <vector>

namespace sympnet {

enum class DenseActivation { Sigmoid, Identity };

struct DenseLayer {
  Matrix weights;  // out x in
  Vector bias;     // out
  DenseActivation activation = DenseActivation::Sigmoid;
};

/// Fully connected network; hidden layers sigmoid, output layer identity.
class Fnn {
 public:
  explicit Fnn(std::vector<DenseLayer> layers);

  /// Zero weights for the given widths, e.g. {2d, 50, 50, 2d}.
  static Fnn zeros(const std::vector<int>& sizes);

  /// Weights uniform on +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Fnn random(const std::vector<int>& sizes, std::uint64_t seed);

  /// The baseline [2d, 50, 50, 2d].
  static std::vector<int> default_sizes(int d) { return {2 * d, 50, 50, 2 * d}; }

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  std::vector<int> sizes() const;
  int input_dim() const { return static_cast<int>(layers_.front().weights.cols()); }
  int output_dim() const { return static_cast<int>(layers_.back().weights.rows()); }

  Eigen::Index parameter_count() const;
  /// Each layer's weights (column-major) followed by its bias.
  Vector parameters() const;
  void set_parameters(const Vector& flat);

  bool operator==(const Fnn& other) const;

 private:
  std::vector<DenseLayer> layers_;
};

Vector fnn_forward(const Fnn& net, const Vector& x);
Matrix fnn_forward_batch(const Fnn& net, const Matrix& inputs);

/// Analytic input Jacobian at x.
Matrix fnn_jacobian(const Fnn& net, const Vector& x);

/// Input Jacobians for every column of `inputs`, returned side by side
/// (rows = outputs, block i spans columns [i*in, (i+1)*in)).
Matrix fnn_jacobian_batch(const Fnn& net, const Matrix& inputs);

/// Number of Jacobian evaluations (single or batched) since process start.
std::uint64_t fnn_jacobian_evaluations();

/// (1/N) sum ||J(x_i)^T J_s J(x_i) - J_s||_F^2 with J_s the symplectic form.
double fnn_structure_loss(const Fnn& net, const Matrix& inputs);

struct FnnLoss {
  double loss = 0.0;   // mse_d + w * mse_s
  double mse_d = 0.0;
  double mse_s = 0.0;  // zero when w = 0 (not evaluated)
  Vector grads;        // same order as Fnn::parameters()
};

/// MSE_d with analytic gradients; when w_penalty > 0 the structure term is
/// added and its gradient taken by central differences over the parameters.
FnnLoss fnn_backward(const Fnn& net, const Matrix& inputs, const Matrix& targets,
                     double w_penalty = 0.0);

}  // namespace sympnet
