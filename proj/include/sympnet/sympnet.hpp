#pragma once

#include "sympnet/activation.hpp"
#include "sympnet/phase.hpp"

#include <cstdint>
#include <vector>

namespace sympnet {

enum class Side { Upper, Lower };

inline Side flip(Side s) { return s == Side::Upper ? Side::Lower : Side::Upper; }
std::string to_string(Side s);
Side side_from_string(const std::string& name);

/// Unit triangular symplectic shear. The stored matrix is unconstrained; the
/// map uses its symmetric part.
struct ShearSublayer {
  Side side = Side::Upper;
  Matrix a_raw;

  Matrix symmetric() const { return 0.5 * (a_raw + a_raw.transpose()); }
};

/// x -> M_n ... M_1 x + h b, with M_i = [[I, h S_i], [0, I]] or its lower
/// counterpart, sides alternating starting from upper.
struct LinearUnit {
  std::vector<ShearSublayer> sublayers;
  Vector bias;
};

/// Upper: (p, q) -> (p + c h sigma(q), q). Lower: (p, q) -> (p, q + c h sigma(p)).
/// The scale c is 1 unless gate scales are trainable.
struct GateUnit {
  Side side = Side::Lower;
  double scale = 1.0;
};

struct SympNetShape {
  int d = 1;
  int k = 8;  // gate units
  int n = 5;  // shears per linear unit
  Activation activation = Activation::Sigmoid;
  bool trainable_gate_scale = false;
};

/// Phi_h = L_k o N_k o ... o N_1 o L_0. Gates alternate sides starting with a
/// lower gate. For h = 0 the network is the identity for any parameters.
class SympNet {
 public:
  /// All parameters zero, gate scales one.
  SympNet(const SympNetShape& shape, double h);

  /// Parameters drawn i.i.d. uniform on [-range, range].
  static SympNet random(const SympNetShape& shape, double h, std::uint64_t seed,
                        double range = 0.01);

  const SympNetShape& shape() const { return shape_; }
  int dof() const { return shape_.d; }
  double step() const { return h_; }
  Activation activation() const { return shape_.activation; }

  /// Same parameters with a different time step.
  SympNet with_step(double h) const;

  const std::vector<LinearUnit>& linear_units() const { return linear_; }
  std::vector<LinearUnit>& linear_units() { return linear_; }
  const std::vector<GateUnit>& gates() const { return gates_; }
  std::vector<GateUnit>& gates() { return gates_; }

  /// (k + 1)(n d^2 + 2d), plus k when gate scales are trainable.
  Eigen::Index parameter_count() const;

  /// Flat order: for each linear unit, each a_raw (column-major) then the
  /// bias; trainable gate scales follow the linear unit preceding them.
  Vector parameters() const;
  void set_parameters(const Vector& flat);

  bool operator==(const SympNet& other) const;

 private:
  SympNetShape shape_;
  double h_;
  std::vector<LinearUnit> linear_;
  std::vector<GateUnit> gates_;
};

/// Parameter gradients in the network's own layout.
struct ParamGradient {
  std::vector<std::vector<Matrix>> a_raw;  // [linear unit][sublayer]
  std::vector<Vector> bias;                // [linear unit]
  std::vector<double> gate_scale;          // [gate], empty unless trainable

  /// Same order as SympNet::parameters().
  Vector flat() const;
};

struct SympNetLoss {
  double loss = 0.0;
  ParamGradient grads;
};

Vector forward(const SympNet& net, const Vector& x);

/// Columns of `inputs` are phase points.
Matrix forward_batch(const SympNet& net, const Matrix& inputs);

/// Input Jacobian dPhi_h/dx at x.
Matrix jacobian(const SympNet& net, const Vector& x);

/// Mean squared error (1/N) sum ||Phi_h(x_i) - y_i||^2 and its exact gradient.
SympNetLoss backward(const SympNet& net, const Matrix& inputs, const Matrix& targets);

}  // namespace sympnet
