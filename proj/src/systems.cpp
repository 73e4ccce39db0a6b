#include "sympnet/systems.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace sympnet {

namespace {

constexpr double kMinKeplerRadius = 1e-12;

double kepler_radius(const Vector& y) {
  const double r = y.tail<2>().norm();
  if (r < kMinKeplerRadius) {
    throw SingularityError("kepler: radius " + std::to_string(r) + " below singularity cutoff");
  }
  return r;
}

}  // namespace

HamiltonianSystem::HamiltonianSystem(std::string name, int d, EnergyFn energy,
                                     GradientFn gradient)
    : name_(std::move(name)), d_(d), energy_(std::move(energy)), gradient_(std::move(gradient)) {
  if (d_ < 1) throw std::invalid_argument("system dimension must be positive");
}

double HamiltonianSystem::energy(const Vector& y) const {
  check_phase_point(y, d_);
  return energy_(y);
}

Vector HamiltonianSystem::gradient(const Vector& y) const {
  check_phase_point(y, d_);
  return gradient_(y);
}

double eval_h(const HamiltonianSystem& sys, const Vector& y) { return sys.energy(y); }

Vector vector_field(const HamiltonianSystem& sys, const Vector& y) {
  const int d = sys.dof();
  const Vector g = sys.gradient(y);
  Vector f(2 * d);
  f.head(d) = -g.tail(d);
  f.tail(d) = g.head(d);
  return f;
}

HamiltonianSystem pendulum() {
  return HamiltonianSystem(
      "pendulum", 1,
      [](const Vector& y) { return 0.5 * y[0] * y[0] - std::cos(y[1]); },
      [](const Vector& y) { return Vector{{y[0], std::sin(y[1])}}; });
}

HamiltonianSystem lotka_volterra() {
  return HamiltonianSystem(
      "lotka-volterra", 1,
      [](const Vector& y) { return y[0] - std::exp(y[0]) + 2.0 * y[1] - std::exp(y[1]); },
      [](const Vector& y) { return Vector{{1.0 - std::exp(y[0]), 2.0 - std::exp(y[1])}}; });
}

HamiltonianSystem kepler() {
  return HamiltonianSystem(
      "kepler", 2,
      [](const Vector& y) { return 0.5 * y.head<2>().squaredNorm() - 1.0 / kepler_radius(y); },
      [](const Vector& y) {
        const double r = kepler_radius(y);
        Vector g(4);
        g.head<2>() = y.head<2>();
        g.tail<2>() = y.tail<2>() / (r * r * r);
        return g;
      });
}

HamiltonianSystem harmonic_oscillator() {
  return HamiltonianSystem(
      "harmonic", 1, [](const Vector& y) { return 0.5 * y.squaredNorm(); },
      [](const Vector& y) { return Vector(y); });
}

HamiltonianSystem system_by_name(const std::string& name) {
  if (name == "pendulum") return pendulum();
  if (name == "lotka-volterra") return lotka_volterra();
  if (name == "kepler") return kepler();
  if (name == "harmonic") return harmonic_oscillator();
  throw std::invalid_argument("unknown system '" + name +
                              "' (expected pendulum, lotka-volterra, kepler, harmonic)");
}

std::vector<std::string> system_names() {
  return {"pendulum", "lotka-volterra", "kepler", "harmonic"};
}

}  // namespace sympnet
