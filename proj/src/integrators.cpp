#include "sympnet/integrators.hpp"

#include <cmath>
#include <stdexcept>

namespace sympnet {

Scheme scheme_from_string(const std::string& name) {
  if (name == "implicit-midpoint" || name == "midpoint") return Scheme::ImplicitMidpoint;
  if (name == "gauss4") return Scheme::Gauss4;
  throw std::invalid_argument("unknown integrator scheme '" + name +
                              "' (expected implicit-midpoint or gauss4)");
}

std::string to_string(Scheme scheme) {
  return scheme == Scheme::ImplicitMidpoint ? "implicit-midpoint" : "gauss4";
}

void IntegratorConfig::validate() const {
  if (substeps < 1) throw std::invalid_argument("integrator substeps must be >= 1");
  if (!(fp_tol > 0.0)) throw std::invalid_argument("integrator fp_tol must be > 0");
  if (fp_max_iter < 1) throw std::invalid_argument("integrator fp_max_iter must be >= 1");
}

namespace {

Vector midpoint_step(const HamiltonianSystem& sys, const Vector& y, double h,
                     const IntegratorConfig& cfg) {
  Vector k = vector_field(sys, y);
  for (int it = 0; it < cfg.fp_max_iter; ++it) {
    Vector next = vector_field(sys, y + 0.5 * h * k);
    const double change = std::abs(h) * (next - k).lpNorm<Eigen::Infinity>();
    k = std::move(next);
    if (change <= cfg.fp_tol) return y + h * k;
  }
  throw ConvergenceError("implicit midpoint: fixed-point iteration did not converge in " +
                         std::to_string(cfg.fp_max_iter) + " iterations");
}

// Two-stage Gauss-Legendre collocation (order 4).
Vector gauss4_step(const HamiltonianSystem& sys, const Vector& y, double h,
                   const IntegratorConfig& cfg) {
  const double r = std::sqrt(3.0) / 6.0;
  const double a11 = 0.25, a12 = 0.25 - r;
  const double a21 = 0.25 + r, a22 = 0.25;

  Vector k1 = vector_field(sys, y);
  Vector k2 = k1;
  for (int it = 0; it < cfg.fp_max_iter; ++it) {
    Vector n1 = vector_field(sys, y + h * (a11 * k1 + a12 * k2));
    Vector n2 = vector_field(sys, y + h * (a21 * k1 + a22 * k2));
    const double change = std::abs(h) * std::max((n1 - k1).lpNorm<Eigen::Infinity>(),
                                                 (n2 - k2).lpNorm<Eigen::Infinity>());
    k1 = std::move(n1);
    k2 = std::move(n2);
    if (change <= cfg.fp_tol) return y + 0.5 * h * (k1 + k2);
  }
  throw ConvergenceError("gauss4: fixed-point iteration did not converge in " +
                         std::to_string(cfg.fp_max_iter) + " iterations");
}

}  // namespace

Vector step(const HamiltonianSystem& sys, const Vector& y, double h,
            const IntegratorConfig& cfg) {
  cfg.validate();
  check_phase_point(y, sys.dof());
  if (!std::isfinite(h)) throw std::invalid_argument("step size must be finite");
  if (h == 0.0) return y;

  const double sub = h / cfg.substeps;
  Vector x = y;
  for (int s = 0; s < cfg.substeps; ++s) {
    x = cfg.scheme == Scheme::ImplicitMidpoint ? midpoint_step(sys, x, sub, cfg)
                                               : gauss4_step(sys, x, sub, cfg);
  }
  return x;
}

}  // namespace sympnet
