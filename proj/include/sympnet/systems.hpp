#pragma once

#include "sympnet/phase.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sympnet {

/// A canonical Hamiltonian system: y' = J^{-1} grad H(y).
class HamiltonianSystem {
 public:
  using EnergyFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  HamiltonianSystem(std::string name, int d, EnergyFn energy, GradientFn gradient);

  const std::string& name() const { return name_; }
  int dof() const { return d_; }

  double energy(const Vector& y) const;
  Vector gradient(const Vector& y) const;

 private:
  std::string name_;
  int d_;
  EnergyFn energy_;
  GradientFn gradient_;
};

double eval_h(const HamiltonianSystem& sys, const Vector& y);

/// J^{-1} grad H(y) = (-dH/dq, dH/dp).
Vector vector_field(const HamiltonianSystem& sys, const Vector& y);

HamiltonianSystem pendulum();
HamiltonianSystem lotka_volterra();
HamiltonianSystem kepler();
HamiltonianSystem harmonic_oscillator();

/// Looks up "pendulum", "lotka-volterra", "kepler" or "harmonic".
HamiltonianSystem system_by_name(const std::string& name);
std::vector<std::string> system_names();

}  // namespace sympnet
