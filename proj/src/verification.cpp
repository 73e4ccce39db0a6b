#include "sympnet/verification.hpp"

#include "sympnet/format.hpp"

#include <cmath>
#include <ostream>

namespace sympnet {

void SymplecticReport::write_csv(std::ostream& out) const {
  const Eigen::Index dim = points.empty() ? 0 : points.front().size();
  const int d = static_cast<int>(dim / 2);
  for (int i = 0; i < d; ++i) out << 'p' << i + 1 << ',';
  for (int i = 0; i < d; ++i) out << 'q' << i + 1 << ',';
  out << "residual\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (Eigen::Index c = 0; c < dim; ++c) out << format_double(points[i][c]) << ',';
    out << format_double(residuals[i]) << '\n';
  }
}

void SymplecticReport::write_json(std::ostream& out) const {
  out << "{\"points\": " << points.size() << ", \"max_residual\": " << format_double(max_residual)
      << ", \"mean_residual\": " << format_double(mean_residual) << "}\n";
}

SymplecticReport symplectic_residual(const SympNet& net, const std::vector<Vector>& points) {
  return symplectic_residual([&](const Vector& x) { return jacobian(net, x); }, points);
}

SymplecticReport symplectic_residual(const SymplecticChain& chain,
                                     const std::vector<Vector>& points) {
  return symplectic_residual([&](const Vector& x) { return chain.jacobian(x); }, points);
}

SymplecticReport symplectic_residual(const Fnn& net, const std::vector<Vector>& points) {
  return symplectic_residual([&](const Vector& x) { return fnn_jacobian(net, x); }, points);
}

EnergyDrift energy_drift(const HamiltonianSystem& sys, const std::vector<Vector>& trajectory) {
  if (trajectory.empty()) throw std::invalid_argument("energy_drift: empty trajectory");
  EnergyDrift out;
  const double h0 = sys.energy(trajectory.front());
  out.drift.reserve(trajectory.size());
  for (const auto& y : trajectory) {
    const double dh = sys.energy(y) - h0;
    out.drift.push_back(dh);
    out.max_abs_drift = std::max(out.max_abs_drift, std::abs(dh));
  }
  return out;
}

namespace {

constexpr double kGradientFloor = 1e-8;

template <typename LossFn>
double compare_gradients(const Vector& analytic, Vector params, LossFn&& loss, double eps) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + eps;
    const double plus = loss(params);
    params[k] = saved - eps;
    const double minus = loss(params);
    params[k] = saved;
    const double numeric = (plus - minus) / (2.0 * eps);
    // Both below the floor: nothing to compare, counts as agreement.
    const double scale = std::max(std::abs(analytic[k]), std::abs(numeric));
    if (scale <= kGradientFloor) continue;
    worst = std::max(worst, std::abs(analytic[k] - numeric) / scale);
  }
  return worst;
}

}  // namespace

double gradient_check(const SympNet& net, const Matrix& inputs, const Matrix& targets,
                      double eps) {
  const Vector analytic = backward(net, inputs, targets).grads.flat();
  SympNet probe = net;
  return compare_gradients(
      analytic, net.parameters(),
      [&](const Vector& p) {
        probe.set_parameters(p);
        return (forward_batch(probe, inputs) - targets).squaredNorm() /
               static_cast<double>(inputs.cols());
      },
      eps);
}

double gradient_check(const Fnn& net, const Matrix& inputs, const Matrix& targets, double eps,
                      double w_penalty) {
  const Vector analytic = fnn_backward(net, inputs, targets, w_penalty).grads;
  Fnn probe = net;
  return compare_gradients(
      analytic, net.parameters(),
      [&](const Vector& p) {
        probe.set_parameters(p);
        double loss = (fnn_forward_batch(probe, inputs) - targets).squaredNorm() /
                      static_cast<double>(inputs.cols());
        if (w_penalty > 0.0) loss += w_penalty * fnn_structure_loss(probe, inputs);
        return loss;
      },
      eps);
}

}  // namespace sympnet
