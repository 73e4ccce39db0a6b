#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's integrators or networks.

#include "sympnet/rng.hpp"
#include "sympnet/sympnet.hpp"
#include "sympnet/systems.hpp"

#include <cmath>

namespace oracle {

using sympnet::Matrix;
using sympnet::Vector;

// Classical RK4 on y' = J^{-1} grad H, with the field written out by hand for
// the systems used in tests.
inline Vector pendulum_field(const Vector& y) { return Vector{{-std::sin(y[1]), y[0]}}; }

template <typename Field>
Vector rk4(Field&& f, Vector y, double t, double dt) {
  const long steps = std::lround(std::abs(t) / dt);
  const double hs = t / static_cast<double>(steps);
  for (long i = 0; i < steps; ++i) {
    const Vector k1 = f(y);
    const Vector k2 = f(y + 0.5 * hs * k1);
    const Vector k3 = f(y + 0.5 * hs * k2);
    const Vector k4 = f(y + hs * k3);
    y += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

// Harmonic oscillator H = (p^2 + q^2)/2: a clockwise rotation in (q, p).
inline Vector harmonic_flow(const Vector& y, double t) {
  return Vector{{y[0] * std::cos(t) - y[1] * std::sin(t), y[1] * std::cos(t) + y[0] * std::sin(t)}};
}

inline Matrix form(int d) {
  Matrix j = Matrix::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d).setIdentity();
  j.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  return j;
}

inline double residual(const Matrix& a) {
  const Matrix j = form(static_cast<int>(a.rows() / 2));
  return (a.transpose() * j * a - j).norm();
}

inline Vector random_point(sympnet::SplitMix64& rng, Eigen::Index size, double r = 1.0) {
  Vector x(size);
  for (auto& v : x) v = rng.uniform(-r, r);
  return x;
}

inline Matrix random_points(sympnet::SplitMix64& rng, Eigen::Index rows, Eigen::Index cols,
                            double r = 1.0) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = random_point(rng, rows, r);
  return m;
}

// Plain per-layer SympNet evaluation, written independently of the batched
// implementation.
inline Vector sympnet_forward(const sympnet::SympNet& net, Vector x) {
  const int d = net.dof();
  const double h = net.step();
  auto act = [&](double v) {
    return net.activation() == sympnet::Activation::Sigmoid ? 1.0 / (1.0 + std::exp(-v)) : std::tanh(v);
  };
  auto linear = [&](const sympnet::LinearUnit& u) {
    for (const auto& s : u.sublayers) {
      const Matrix sym = 0.5 * (s.a_raw + s.a_raw.transpose());
      if (s.side == sympnet::Side::Upper) {
        x.head(d) += h * sym * x.tail(d);
      } else {
        x.tail(d) += h * sym * x.head(d);
      }
    }
    x += h * u.bias;
  };
  const auto& lin = net.linear_units();
  linear(lin[0]);
  for (std::size_t i = 0; i < net.gates().size(); ++i) {
    const auto& g = net.gates()[i];
    if (g.side == sympnet::Side::Upper) {
      for (int j = 0; j < d; ++j) x[j] += h * g.scale * act(x[d + j]);
    } else {
      for (int j = 0; j < d; ++j) x[d + j] += h * g.scale * act(x[j]);
    }
    linear(lin[i + 1]);
  }
  return x;
}

}  // namespace oracle
