#pragma once

#include "sympnet/chain.hpp"
#include "sympnet/fnn.hpp"
#include "sympnet/sympnet.hpp"
#include "sympnet/systems.hpp"

#include <concepts>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace sympnet {

/// Central-difference Jacobian of `map` at x; column j is
/// (map(x + eps e_j) - map(x - eps e_j)) / (2 eps).
template <typename Map>
Matrix fd_jacobian(Map&& map, const Vector& x, double eps = 1e-5) {
  if (!(eps > 0.0)) throw std::invalid_argument("fd_jacobian: eps must be > 0");
  Matrix jac;
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + eps;
    const Vector plus = map(probe);
    probe[j] = x[j] - eps;
    const Vector minus = map(probe);
    probe[j] = x[j];
    if (j == 0) jac.resize(plus.size(), x.size());
    jac.col(j) = (plus - minus) / (2.0 * eps);
  }
  return jac;
}

struct SymplecticReport {
  std::vector<Vector> points;
  std::vector<double> residuals;  // ||A^T J A - J||_F at each point
  double max_residual = 0.0;
  double mean_residual = 0.0;

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
};

/// `jacobian_source(x)` returns the Jacobian of the map at x.
template <typename JacobianSource>
  requires std::invocable<JacobianSource&, const Vector&>
SymplecticReport symplectic_residual(JacobianSource&& jacobian_source,
                                     const std::vector<Vector>& points) {
  if (points.empty()) throw std::invalid_argument("symplectic_residual: no points");
  SymplecticReport report;
  report.points = points;
  double sum = 0.0;
  for (const auto& x : points) {
    const double r = symplectic_defect(jacobian_source(x));
    report.residuals.push_back(r);
    report.max_residual = std::max(report.max_residual, r);
    sum += r;
  }
  report.mean_residual = sum / static_cast<double>(points.size());
  return report;
}

SymplecticReport symplectic_residual(const SympNet& net, const std::vector<Vector>& points);
SymplecticReport symplectic_residual(const SymplecticChain& chain, const std::vector<Vector>& points);
SymplecticReport symplectic_residual(const Fnn& net, const std::vector<Vector>& points);

struct EnergyDrift {
  std::vector<double> drift;  // H(y_k) - H(y_0)
  double max_abs_drift = 0.0;
};

EnergyDrift energy_drift(const HamiltonianSystem& sys, const std::vector<Vector>& trajectory);

/// Worst |analytic - numeric| / max(|analytic|, |numeric|) over all
/// parameters, numeric being central differences of the loss. Entries where
/// both are below 1e-8 count as 0.
double gradient_check(const SympNet& net, const Matrix& inputs, const Matrix& targets,
                      double eps = 1e-6);
double gradient_check(const Fnn& net, const Matrix& inputs, const Matrix& targets,
                      double eps = 1e-6, double w_penalty = 0.0);

}  // namespace sympnet
