#include "oracles.hpp"
#include "sympnet/chain.hpp"
#include "sympnet/integrators.hpp"
#include "sympnet/verification.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sstream>

using namespace sympnet;

TEST_CASE("finite-difference Jacobians") {
  SplitMix64 rng(1);
  const Vector x = oracle::random_point(rng, 4);
  const Matrix id = fd_jacobian([](const Vector& v) { return v; }, x);
  CHECK((id - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-10);
  const Matrix m = oracle::random_points(rng, 3, 4);
  const Matrix lin = fd_jacobian([&](const Vector& v) { return Vector(m * v); }, x);
  CHECK((lin - m).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK_THROWS_AS(fd_jacobian([](const Vector& v) { return v; }, x, 0.0), std::invalid_argument);
}

TEST_CASE("symplectic residual reports") {
  SplitMix64 rng(2);
  std::vector<Vector> pts;
  for (int i = 0; i < 100; ++i) pts.push_back(oracle::random_point(rng, 2));

  const SympNet net = SympNet::random({1, 8, 5}, 0.1, 3, 1.0);
  const auto ok = symplectic_residual(net, pts);
  CHECK(ok.residuals.size() == 100);
  CHECK(ok.max_residual <= 1e-10);
  CHECK(symplectic_residual(symmetric_compose(net), pts).max_residual <= 1e-9);

  const auto bad = symplectic_residual(Fnn::random({2, 50, 50, 2}, 1), pts);
  CHECK(bad.max_residual > 1e-3);
  CHECK(bad.mean_residual > 0.0);
  CHECK(bad.mean_residual <= bad.max_residual);

  const auto integ = symplectic_residual(
      [](const Vector& x) {
        return fd_jacobian([](const Vector& v) { return step(pendulum(), v, 0.1); }, x);
      },
      std::vector<Vector>(pts.begin(), pts.begin() + 10));
  CHECK(integ.max_residual <= 1e-6);

  std::ostringstream csv;
  ok.write_csv(csv);
  CHECK(csv.str().rfind("p1,q1,residual\n", 0) == 0);
  std::ostringstream js;
  ok.write_json(js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["max_residual"].get<double>() == ok.max_residual);
  CHECK(j["points"].get<int>() == 100);
  CHECK_THROWS_AS(symplectic_residual(net, {}), std::invalid_argument);
}

TEST_CASE("energy drift") {
  const Vector y0{{0.0, 1.0}};
  const std::vector<Vector> still(5, y0);
  const auto zero = energy_drift(pendulum(), still);
  CHECK(zero.max_abs_drift == 0.0);
  CHECK(zero.drift.size() == 5);

  std::vector<Vector> exact;
  for (int k = 0; k <= 20; ++k) exact.push_back(oracle::harmonic_flow(y0, 0.1 * k));
  CHECK(energy_drift(harmonic_oscillator(), exact).max_abs_drift <= 1e-15);

  const auto r = rollout([](const Vector& y) { return step(pendulum(), y, 0.1); }, y0, 100);
  CHECK(energy_drift(pendulum(), r.states).max_abs_drift <= 1e-10);
  CHECK_THROWS_AS(energy_drift(pendulum(), {}), std::invalid_argument);
}

TEST_CASE("gradient checks") {
  SplitMix64 rng(4);
  const Matrix x = oracle::random_points(rng, 2, 10);
  const SympNet net = SympNet::random({1, 3, 2}, 0.1, 5, 0.5);
  CHECK(gradient_check(net, x, oracle::random_points(rng, 2, 10)) <= 1e-5);
  CHECK(gradient_check(Fnn::random({2, 5, 5, 2}, 1), x, oracle::random_points(rng, 2, 10)) <= 1e-5);
  // A zero-loss batch has zero gradients everywhere; the floor reports 0.
  CHECK(gradient_check(net, x, forward_batch(net, x)) == 0.0);
}
