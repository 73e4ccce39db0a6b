#include "sympnet/fnn.hpp"

#include "sympnet/rng.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace sympnet {

namespace {

// Points per block in batched passes.
constexpr Eigen::Index kBlock = 1024;

std::atomic<std::uint64_t> g_jacobian_evaluations{0};

Matrix apply_activation(DenseActivation a, const Matrix& z) {
  if (a == DenseActivation::Identity) return z;
  return z.array().logistic().matrix();
}

// Derivative given the activation output.
Matrix activation_slope(DenseActivation a, const Matrix& out) {
  if (a == DenseActivation::Identity) return Matrix::Ones(out.rows(), out.cols());
  return (out.array() * (1.0 - out.array())).matrix();
}

void check_input(const Fnn& net, Eigen::Index rows) {
  if (rows != net.input_dim()) {
    throw std::invalid_argument("fnn: input dimension " + std::to_string(rows) +
                                " does not match " + std::to_string(net.input_dim()));
  }
}

// Layer outputs a_0 = x, a_1, ..., a_L.
std::vector<Matrix> forward_states(const Fnn& net, const Matrix& inputs) {
  check_input(net, inputs.rows());
  std::vector<Matrix> states;
  states.reserve(net.layers().size() + 1);
  states.push_back(inputs);
  for (const auto& layer : net.layers()) {
    Matrix z = layer.weights * states.back();
    z.colwise() += layer.bias;
    states.push_back(apply_activation(layer.activation, z));
  }
  return states;
}

}  // namespace

Fnn::Fnn(std::vector<DenseLayer> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("fnn: needs at least one layer");
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& l = layers_[i];
    if (l.bias.size() != l.weights.rows()) {
      throw std::invalid_argument("fnn: layer " + std::to_string(i) + " bias size mismatch");
    }
    if (i > 0 && l.weights.cols() != layers_[i - 1].weights.rows()) {
      throw std::invalid_argument("fnn: layer " + std::to_string(i) + " input size mismatch");
    }
  }
}

Fnn Fnn::zeros(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("fnn: need at least two layer sizes");
  std::vector<DenseLayer> layers;
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    if (sizes[i] < 1 || sizes[i + 1] < 1) throw std::invalid_argument("fnn: sizes must be >= 1");
    const bool last = i + 2 == sizes.size();
    layers.push_back({Matrix::Zero(sizes[i + 1], sizes[i]), Vector::Zero(sizes[i + 1]),
                      last ? DenseActivation::Identity : DenseActivation::Sigmoid});
  }
  return Fnn(std::move(layers));
}

Fnn Fnn::random(const std::vector<int>& sizes, std::uint64_t seed) {
  Fnn net = zeros(sizes);
  SplitMix64 rng(seed);
  for (auto& layer : net.layers_) {
    const double limit = std::sqrt(6.0 / static_cast<double>(layer.weights.rows() + layer.weights.cols()));
    for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) {
      for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
        layer.weights(r, c) = rng.uniform(-limit, limit);
      }
    }
  }
  return net;
}

std::vector<int> Fnn::sizes() const {
  std::vector<int> out{input_dim()};
  for (const auto& l : layers_) out.push_back(static_cast<int>(l.weights.rows()));
  return out;
}

Eigen::Index Fnn::parameter_count() const {
  Eigen::Index n = 0;
  for (const auto& l : layers_) n += l.weights.size() + l.bias.size();
  return n;
}

Vector Fnn::parameters() const {
  Vector flat(parameter_count());
  Eigen::Index pos = 0;
  for (const auto& l : layers_) {
    flat.segment(pos, l.weights.size()) = l.weights.reshaped();
    pos += l.weights.size();
    flat.segment(pos, l.bias.size()) = l.bias;
    pos += l.bias.size();
  }
  return flat;
}

void Fnn::set_parameters(const Vector& flat) {
  if (flat.size() != parameter_count()) {
    throw std::invalid_argument("fnn: expected " + std::to_string(parameter_count()) +
                                " parameters, got " + std::to_string(flat.size()));
  }
  Eigen::Index pos = 0;
  for (auto& l : layers_) {
    l.weights = flat.segment(pos, l.weights.size()).reshaped(l.weights.rows(), l.weights.cols());
    pos += l.weights.size();
    l.bias = flat.segment(pos, l.bias.size());
    pos += l.bias.size();
  }
}

bool Fnn::operator==(const Fnn& other) const {
  if (layers_.size() != other.layers_.size()) return false;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    const auto& a = layers_[i];
    const auto& b = other.layers_[i];
    if (a.activation != b.activation || a.weights.rows() != b.weights.rows() ||
        a.weights.cols() != b.weights.cols() || a.weights != b.weights || a.bias != b.bias) {
      return false;
    }
  }
  return true;
}

Vector fnn_forward(const Fnn& net, const Vector& x) {
  if (!all_finite(x)) throw std::invalid_argument("fnn: non-finite input");
  return fnn_forward_batch(net, x);
}

Matrix fnn_forward_batch(const Fnn& net, const Matrix& inputs) {
  return std::move(forward_states(net, inputs).back());
}

Matrix fnn_jacobian(const Fnn& net, const Vector& x) {
  ++g_jacobian_evaluations;
  const auto states = forward_states(net, x);
  Matrix jac = Matrix::Identity(x.size(), x.size());
  for (std::size_t i = 0; i < net.layers().size(); ++i) {
    const auto& layer = net.layers()[i];
    const Vector slope = activation_slope(layer.activation, states[i + 1]);
    jac = slope.asDiagonal() * (layer.weights * jac);
  }
  return jac;
}

Matrix fnn_jacobian_batch(const Fnn& net, const Matrix& inputs) {
  ++g_jacobian_evaluations;
  const auto states = forward_states(net, inputs);
  const Eigen::Index in = inputs.rows();
  const Eigen::Index n = inputs.cols();
  Matrix out(net.output_dim(), in * n);
  // Forward-mode: push each input direction through the layers for all points.
  for (Eigen::Index j = 0; j < in; ++j) {
    Matrix tangent;
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
      const auto& layer = net.layers()[i];
      Matrix z_dot = i == 0 ? Matrix(layer.weights.col(j).replicate(1, n))
                            : Matrix(layer.weights * tangent);
      if (layer.activation == DenseActivation::Sigmoid) {
        z_dot.array() *= states[i + 1].array() * (1.0 - states[i + 1].array());
      }
      tangent = std::move(z_dot);
    }
    for (Eigen::Index p = 0; p < n; ++p) out.col(p * in + j) = tangent.col(p);
  }
  return out;
}

std::uint64_t fnn_jacobian_evaluations() { return g_jacobian_evaluations.load(); }

double fnn_structure_loss(const Fnn& net, const Matrix& inputs) {
  if (inputs.cols() == 0) throw std::invalid_argument("fnn structure loss: no points");
  const int d = degrees_of_freedom(inputs.rows());
  if (net.output_dim() != inputs.rows()) {
    throw std::invalid_argument("fnn structure loss: output dimension differs from input");
  }
  const Matrix jacs = fnn_jacobian_batch(net, inputs);
  const Matrix j = symplectic_form(d);
  const Eigen::Index m = 2 * d;
  double total = 0.0;
  for (Eigen::Index p = 0; p < inputs.cols(); ++p) {
    const auto a = jacs.middleCols(p * m, m);
    total += (a.transpose() * j * a - j).squaredNorm();
  }
  return total / static_cast<double>(inputs.cols());
}

FnnLoss fnn_backward(const Fnn& net, const Matrix& inputs, const Matrix& targets,
                     double w_penalty) {
  if (inputs.cols() == 0) throw std::invalid_argument("fnn backward: empty batch");
  check_input(net, inputs.rows());
  if (targets.rows() != net.output_dim() || targets.cols() != inputs.cols()) {
    throw std::invalid_argument("fnn backward: targets have the wrong shape");
  }
  const auto& layers = net.layers();
  const std::size_t n_layers = layers.size();
  const double n_points = static_cast<double>(inputs.cols());

  FnnLoss out;
  out.grads = Vector::Zero(net.parameter_count());
  std::vector<Eigen::Index> offset;
  Eigen::Index pos = 0;
  for (const auto& l : layers) {
    offset.push_back(pos);
    pos += l.weights.size() + l.bias.size();
  }

  // Blocks of points are processed in a fixed order; buffers are reused.
  std::vector<Matrix> act(n_layers + 1);
  Matrix g;
  Matrix g_next;
  double squared_error = 0.0;
  for (Eigen::Index start = 0; start < inputs.cols(); start += kBlock) {
    const Eigen::Index m = std::min(kBlock, inputs.cols() - start);
    act[0] = inputs.middleCols(start, m);
    for (std::size_t i = 0; i < n_layers; ++i) {
      act[i + 1].noalias() = layers[i].weights * act[i];
      act[i + 1].colwise() += layers[i].bias;
      if (layers[i].activation == DenseActivation::Sigmoid) {
        act[i + 1] = act[i + 1].array().logistic().matrix();
      }
    }
    g = act[n_layers] - targets.middleCols(start, m);
    squared_error += g.squaredNorm();
    g *= 2.0 / n_points;

    for (std::size_t i = n_layers; i-- > 0;) {
      const auto& layer = layers[i];
      if (layer.activation == DenseActivation::Sigmoid) {
        g.array() *= act[i + 1].array() * (1.0 - act[i + 1].array());
      }
      Eigen::Map<Matrix>(out.grads.data() + offset[i], layer.weights.rows(), layer.weights.cols())
          .noalias() += g * act[i].transpose();
      out.grads.segment(offset[i] + layer.weights.size(), layer.bias.size()) += g.rowwise().sum();
      if (i > 0) {
        g_next.noalias() = layer.weights.transpose() * g;
        std::swap(g, g_next);
      }
    }
  }
  out.mse_d = squared_error / n_points;

  out.loss = out.mse_d;
  if (w_penalty > 0.0) {
    out.mse_s = fnn_structure_loss(net, inputs);
    out.loss += w_penalty * out.mse_s;
    const double eps = 1e-6;
    Fnn probe = net;
    Vector params = net.parameters();
    for (Eigen::Index k = 0; k < params.size(); ++k) {
      const double saved = params[k];
      params[k] = saved + eps;
      probe.set_parameters(params);
      const double plus = fnn_structure_loss(probe, inputs);
      params[k] = saved - eps;
      probe.set_parameters(params);
      const double minus = fnn_structure_loss(probe, inputs);
      params[k] = saved;
      out.grads[k] += w_penalty * (plus - minus) / (2.0 * eps);
    }
  }
  return out;
}

}  // namespace sympnet
