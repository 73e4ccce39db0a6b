#include "sympnet/sympnet.hpp"

#include "sympnet/rng.hpp"

#include <stdexcept>

namespace sympnet {

std::string to_string(Side s) { return s == Side::Upper ? "upper" : "lower"; }

Side side_from_string(const std::string& name) {
  if (name == "upper") return Side::Upper;
  if (name == "lower") return Side::Lower;
  throw std::invalid_argument("unknown side '" + name + "' (expected upper or lower)");
}

SympNet::SympNet(const SympNetShape& shape, double h) : shape_(shape), h_(h) {
  if (shape_.d < 1) throw std::invalid_argument("sympnet: d must be >= 1");
  if (shape_.k < 0) throw std::invalid_argument("sympnet: k must be >= 0");
  if (shape_.n < 1) throw std::invalid_argument("sympnet: n must be >= 1");
  if (!std::isfinite(h_)) throw std::invalid_argument("sympnet: h must be finite");

  const int d = shape_.d;
  linear_.resize(static_cast<std::size_t>(shape_.k) + 1);
  for (auto& unit : linear_) {
    Side side = Side::Upper;
    for (int i = 0; i < shape_.n; ++i) {
      unit.sublayers.push_back({side, Matrix::Zero(d, d)});
      side = flip(side);
    }
    unit.bias = Vector::Zero(2 * d);
  }
  Side side = Side::Lower;
  for (int i = 0; i < shape_.k; ++i) {
    gates_.push_back({side, 1.0});
    side = flip(side);
  }
}

SympNet SympNet::random(const SympNetShape& shape, double h, std::uint64_t seed, double range) {
  SympNet net(shape, h);
  SplitMix64 rng(seed);
  Vector flat = net.parameters();
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = rng.uniform(-range, range);
  net.set_parameters(flat);
  // Gate scales start at one; only shears and biases are randomized.
  for (auto& g : net.gates_) g.scale = 1.0;
  return net;
}

SympNet SympNet::with_step(double h) const {
  SympNet copy = *this;
  if (!std::isfinite(h)) throw std::invalid_argument("sympnet: h must be finite");
  copy.h_ = h;
  return copy;
}

Eigen::Index SympNet::parameter_count() const {
  const Eigen::Index d = shape_.d;
  Eigen::Index count = (shape_.k + 1) * (shape_.n * d * d + 2 * d);
  if (shape_.trainable_gate_scale) count += shape_.k;
  return count;
}

Vector SympNet::parameters() const {
  Vector flat(parameter_count());
  Eigen::Index pos = 0;
  for (std::size_t u = 0; u < linear_.size(); ++u) {
    for (const auto& s : linear_[u].sublayers) {
      flat.segment(pos, s.a_raw.size()) = s.a_raw.reshaped();
      pos += s.a_raw.size();
    }
    flat.segment(pos, linear_[u].bias.size()) = linear_[u].bias;
    pos += linear_[u].bias.size();
    if (shape_.trainable_gate_scale && u < gates_.size()) flat[pos++] = gates_[u].scale;
  }
  return flat;
}

void SympNet::set_parameters(const Vector& flat) {
  if (flat.size() != parameter_count()) {
    throw std::invalid_argument("sympnet: expected " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(flat.size()));
  }
  const int d = shape_.d;
  Eigen::Index pos = 0;
  for (std::size_t u = 0; u < linear_.size(); ++u) {
    for (auto& s : linear_[u].sublayers) {
      s.a_raw = flat.segment(pos, d * d).reshaped(d, d);
      pos += d * d;
    }
    linear_[u].bias = flat.segment(pos, 2 * d);
    pos += 2 * d;
    if (shape_.trainable_gate_scale && u < gates_.size()) gates_[u].scale = flat[pos++];
  }
}

bool SympNet::operator==(const SympNet& other) const {
  const auto& a = shape_;
  const auto& b = other.shape_;
  if (a.d != b.d || a.k != b.k || a.n != b.n || a.activation != b.activation ||
      a.trainable_gate_scale != b.trainable_gate_scale || h_ != other.h_) {
    return false;
  }
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    if (gates_[i].side != other.gates_[i].side || gates_[i].scale != other.gates_[i].scale) {
      return false;
    }
  }
  for (std::size_t u = 0; u < linear_.size(); ++u) {
    const auto& la = linear_[u];
    const auto& lb = other.linear_[u];
    if (la.bias != lb.bias) return false;
    for (std::size_t i = 0; i < la.sublayers.size(); ++i) {
      if (la.sublayers[i].side != lb.sublayers[i].side ||
          la.sublayers[i].a_raw != lb.sublayers[i].a_raw) {
        return false;
      }
    }
  }
  return true;
}

Vector ParamGradient::flat() const {
  Eigen::Index count = 0;
  for (std::size_t u = 0; u < bias.size(); ++u) {
    for (const auto& g : a_raw[u]) count += g.size();
    count += bias[u].size();
  }
  count += static_cast<Eigen::Index>(gate_scale.size());

  Vector out(count);
  Eigen::Index pos = 0;
  for (std::size_t u = 0; u < bias.size(); ++u) {
    for (const auto& g : a_raw[u]) {
      out.segment(pos, g.size()) = g.reshaped();
      pos += g.size();
    }
    out.segment(pos, bias[u].size()) = bias[u];
    pos += bias[u].size();
    if (u < gate_scale.size()) out[pos++] = gate_scale[u];
  }
  return out;
}

namespace {

// Points per block in batched passes; keeps the per-block tape in cache.
constexpr Eigen::Index kBlock = 1024;

void check_batch(const SympNet& net, const Matrix& inputs) {
  if (inputs.rows() != 2 * net.dof()) {
    throw std::invalid_argument("sympnet: input dimension " + std::to_string(inputs.rows()) +
                                " does not match 2d = " + std::to_string(2 * net.dof()));
  }
}

// Block of points stored one point per row: p in the left d columns and q in
// the right d columns, so each block is contiguous.
using Rows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

struct Tape {
  std::vector<Rows> operands;  // shear operands (q for upper, p for lower)
  std::vector<Rows> gates;     // gate activation values
};

// Forward pass over one block in the row layout. When `tape` is non-null it
// receives the operand of every shear and the activation of every gate.
void forward_rows(const SympNet& net, Rows& x, Tape* tape) {
  const int d = net.dof();
  const double h = net.step();
  const auto& linear = net.linear_units();
  const auto& gates = net.gates();
  std::size_t op = 0;
  std::size_t ga = 0;

  auto apply_linear = [&](const LinearUnit& unit) {
    for (const auto& s : unit.sublayers) {
      const Matrix sym = h * s.symmetric();
      // Row layout: p^T += q^T S (S symmetric).
      if (s.side == Side::Upper) {
        if (tape) tape->operands[op++] = x.rightCols(d);
        x.leftCols(d) += x.rightCols(d).lazyProduct(sym);
      } else {
        if (tape) tape->operands[op++] = x.leftCols(d);
        x.rightCols(d) += x.leftCols(d).lazyProduct(sym);
      }
    }
    x.rowwise() += h * unit.bias.transpose();
  };

  apply_linear(linear[0]);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const double c = h * gates[g].scale;
    const bool upper = gates[g].side == Side::Upper;
    auto src = upper ? x.rightCols(d) : x.leftCols(d);
    auto dst = upper ? x.leftCols(d) : x.rightCols(d);
    if (tape) {
      Rows& act = tape->gates[ga++];
      act = activate(net.activation(), src.array()).matrix();
      dst += c * act;
    } else {
      dst += c * activate(net.activation(), src.array()).matrix();
    }
    apply_linear(linear[g + 1]);
  }
}

Matrix run_forward(const SympNet& net, const Matrix& inputs) {
  check_batch(net, inputs);
  Matrix out(inputs.rows(), inputs.cols());
  Rows x;
  for (Eigen::Index start = 0; start < inputs.cols(); start += kBlock) {
    const Eigen::Index m = std::min(kBlock, inputs.cols() - start);
    x = inputs.middleCols(start, m).transpose();
    forward_rows(net, x, nullptr);
    out.middleCols(start, m) = x.transpose();
  }
  return out;
}

}  // namespace

Vector forward(const SympNet& net, const Vector& x) {
  check_phase_point(x, net.dof());
  return run_forward(net, x);
}

Matrix forward_batch(const SympNet& net, const Matrix& inputs) {
  return run_forward(net, inputs);
}

Matrix jacobian(const SympNet& net, const Vector& x) {
  check_phase_point(x, net.dof());
  const int d = net.dof();
  const double h = net.step();
  Vector state = x;
  Matrix jac = Matrix::Identity(2 * d, 2 * d);

  auto apply_linear = [&](const LinearUnit& unit) {
    for (const auto& s : unit.sublayers) {
      const Matrix sym = h * s.symmetric();
      if (s.side == Side::Upper) {
        state.head(d) += sym * state.tail(d);
        jac.topRows(d) += sym * jac.bottomRows(d);
      } else {
        state.tail(d) += sym * state.head(d);
        jac.bottomRows(d) += sym * jac.topRows(d);
      }
    }
    state += h * unit.bias;
  };

  const auto& linear = net.linear_units();
  const auto& gates = net.gates();
  apply_linear(linear[0]);
  for (std::size_t g = 0; g < gates.size(); ++g) {
    const double c = h * gates[g].scale;
    if (gates[g].side == Side::Upper) {
      const Eigen::ArrayXd act = activate(net.activation(), state.tail(d).array());
      const Eigen::ArrayXd slope = activation_slope(net.activation(), act);
      state.head(d) += c * act.matrix();
      jac.topRows(d) += (c * slope).matrix().asDiagonal() * jac.bottomRows(d);
    } else {
      const Eigen::ArrayXd act = activate(net.activation(), state.head(d).array());
      const Eigen::ArrayXd slope = activation_slope(net.activation(), act);
      state.tail(d) += c * act.matrix();
      jac.bottomRows(d) += (c * slope).matrix().asDiagonal() * jac.topRows(d);
    }
    apply_linear(linear[g + 1]);
  }
  return jac;
}

SympNetLoss backward(const SympNet& net, const Matrix& inputs, const Matrix& targets) {
  if (inputs.cols() == 0) throw std::invalid_argument("sympnet backward: empty batch");
  check_batch(net, inputs);
  if (targets.rows() != inputs.rows() || targets.cols() != inputs.cols()) {
    throw std::invalid_argument("sympnet backward: inputs and targets differ in shape");
  }
  const int d = net.dof();
  const double h = net.step();
  const double n_points = static_cast<double>(inputs.cols());
  const auto& linear = net.linear_units();
  const auto& gates = net.gates();
  const bool scale_grads = net.shape().trainable_gate_scale;

  SympNetLoss result;
  ParamGradient& grads = result.grads;
  grads.a_raw.resize(linear.size());
  grads.bias.resize(linear.size());
  for (std::size_t u = 0; u < linear.size(); ++u) {
    grads.a_raw[u].assign(linear[u].sublayers.size(), Matrix::Zero(d, d));
    grads.bias[u] = Vector::Zero(2 * d);
  }
  if (scale_grads) grads.gate_scale.assign(gates.size(), 0.0);

  Tape tape;
  tape.operands.resize(linear.size() * static_cast<std::size_t>(net.shape().n));
  tape.gates.resize(gates.size());
  Rows x;
  Rows g;
  double squared_error = 0.0;

  // Blocks are processed in a fixed order so the reduction is deterministic.
  for (Eigen::Index start = 0; start < inputs.cols(); start += kBlock) {
    const Eigen::Index m = std::min(kBlock, inputs.cols() - start);
    x = inputs.middleCols(start, m).transpose();
    forward_rows(net, x, &tape);
    g = x - targets.middleCols(start, m).transpose();
    squared_error += g.squaredNorm();
    g *= 2.0 / n_points;

    std::size_t op = tape.operands.size();
    auto back_linear = [&](std::size_t u) {
      const LinearUnit& unit = linear[u];
      grads.bias[u] += h * g.colwise().sum().transpose();
      for (std::size_t i = unit.sublayers.size(); i-- > 0;) {
        const auto& s = unit.sublayers[i];
        const Rows& operand = tape.operands[--op];
        const Matrix sym = h * s.symmetric();
        Matrix g_sym;
        if (s.side == Side::Upper) {
          g_sym = h * operand.transpose().lazyProduct(g.leftCols(d));
          g.rightCols(d) += g.leftCols(d).lazyProduct(sym);
        } else {
          g_sym = h * operand.transpose().lazyProduct(g.rightCols(d));
          g.leftCols(d) += g.rightCols(d).lazyProduct(sym);
        }
        grads.a_raw[u][i] += 0.5 * (g_sym + g_sym.transpose());
      }
    };

    back_linear(linear.size() - 1);
    for (std::size_t gi = gates.size(); gi-- > 0;) {
      const Rows& act = tape.gates[gi];
      const double c = h * gates[gi].scale;
      const bool upper = gates[gi].side == Side::Upper;
      auto g_dst = upper ? g.leftCols(d) : g.rightCols(d);
      auto g_src = upper ? g.rightCols(d) : g.leftCols(d);
      if (scale_grads) grads.gate_scale[gi] += h * (g_dst.array() * act.array()).sum();
      g_src.array() += c * activation_slope(net.activation(), act.array()) * g_dst.array();
      back_linear(gi);
    }
  }
  result.loss = squared_error / n_points;
  return result;
}

}  // namespace sympnet
