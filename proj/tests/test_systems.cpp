#include "oracles.hpp"
#include "sympnet/verification.hpp"

#include <doctest.h>

#include <numbers>

using namespace sympnet;

TEST_CASE("energies at simple points") {
  CHECK(eval_h(pendulum(), Vector{{0.0, 0.0}}) == -1.0);
  CHECK(eval_h(lotka_volterra(), Vector{{0.0, 0.0}}) == -2.0);
  CHECK(eval_h(kepler(), Vector{{1.0, 0.0, 0.0, 1.0}}) == -0.5);
  CHECK(eval_h(harmonic_oscillator(), Vector{{3.0, 4.0}}) == 12.5);
}

TEST_CASE("vector fields at simple points") {
  CHECK(vector_field(pendulum(), Vector{{0.0, 0.0}}) == Vector{{0.0, 0.0}});
  CHECK(vector_field(pendulum(), Vector{{1.0, 0.0}}) == Vector{{0.0, 1.0}});
  const Vector k = vector_field(kepler(), Vector{{1.0, 0.0, 0.0, 1.0}});
  CHECK((k - Vector{{0.0, -1.0, 1.0, 0.0}}).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("gradients match finite differences of the energy") {
  SplitMix64 rng(3);
  for (const auto& name : system_names()) {
    const auto sys = system_by_name(name);
    for (int trial = 0; trial < 20; ++trial) {
      Vector y = oracle::random_point(rng, 2 * sys.dof());
      if (name == "kepler") y.tail(2) += Vector{{1.5, 0.0}};  // keep away from the origin
      const Matrix g = fd_jacobian([&](const Vector& x) { return Vector{{eval_h(sys, x)}}; }, y, 1e-6);
      CAPTURE(name);
      CHECK((g.row(0).transpose() - sys.gradient(y)).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("pendulum field is (-sin q, p)") {
  SplitMix64 rng(11);
  for (int i = 0; i < 10; ++i) {
    const Vector y = oracle::random_point(rng, 2, 3.0);
    CHECK((vector_field(pendulum(), y) - oracle::pendulum_field(y)).norm() == 0.0);
  }
}

TEST_CASE("invalid phase points are rejected") {
  CHECK_THROWS_AS(eval_h(pendulum(), Vector{{1.0, 2.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(eval_h(kepler(), Vector{{1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(eval_h(pendulum(), Vector{{std::nan(""), 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(vector_field(kepler(), Vector{{1.0, 0.0, 0.0, 0.0}}), SingularityError);
  CHECK_THROWS_AS(eval_h(kepler(), Vector{{1.0, 0.0, 0.0, 0.0}}), SingularityError);
  CHECK_THROWS_AS(system_by_name("duffing"), std::invalid_argument);
}

TEST_CASE("symplectic form") {
  const Matrix j = symplectic_form<double>(2);
  CHECK(j == oracle::form(2));
  CHECK((j * j + Matrix::Identity(4, 4)).norm() == 0.0);
  CHECK(symplectic_defect(Matrix(Matrix::Identity(4, 4))) == 0.0);
  CHECK(degrees_of_freedom(6) == 3);
  CHECK_THROWS_AS(degrees_of_freedom(3), std::invalid_argument);
}
