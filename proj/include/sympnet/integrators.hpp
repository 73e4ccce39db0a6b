#pragma once

#include "sympnet/systems.hpp"

#include <exception>
#include <optional>
#include <string>
#include <vector>

namespace sympnet {

enum class Scheme { ImplicitMidpoint, Gauss4 };

Scheme scheme_from_string(const std::string& name);
std::string to_string(Scheme scheme);

/// Gauss collocation settings. The stage equations are solved by fixed-point
/// iteration until the stage increments change by less than `fp_tol`.
struct IntegratorConfig {
  Scheme scheme = Scheme::Gauss4;
  int substeps = 10;
  double fp_tol = 1e-12;
  int fp_max_iter = 100;

  void validate() const;
};

/// Approximates the exact flow phi_h(y) with `cfg.substeps` symplectic steps of
/// size h / substeps.
Vector step(const HamiltonianSystem& sys, const Vector& y, double h,
            const IntegratorConfig& cfg = {});

struct Rollout {
  std::vector<Vector> states;        // states[0] is the start point
  std::optional<std::string> error;  // set when a step failed; states holds the prefix
};

/// Iterates `step_map` from y0. Any exception thrown by the map ends the
/// rollout early and is reported in `error`.
template <typename StepMap>
Rollout rollout(StepMap&& step_map, const Vector& y0, int n_steps) {
  if (n_steps < 0) throw std::invalid_argument("rollout: negative step count");
  Rollout out;
  out.states.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.states.push_back(y0);
  for (int k = 0; k < n_steps; ++k) {
    try {
      Vector next = step_map(out.states.back());
      if (next.size() != y0.size()) {
        throw std::invalid_argument("rollout: step map changed the state dimension");
      }
      if (!next.allFinite()) throw std::runtime_error("rollout: non-finite state");
      out.states.push_back(std::move(next));
    } catch (const std::exception& e) {
      out.error = "step " + std::to_string(k + 1) + ": " + e.what();
      break;
    }
  }
  return out;
}

}  // namespace sympnet
