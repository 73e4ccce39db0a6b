#include "oracles.hpp"
#include "sympnet/dataset.hpp"
#include "sympnet/format.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace sympnet;

namespace {

IntegratorConfig fast() {
  IntegratorConfig cfg;
  cfg.substeps = 2;
  return cfg;
}

std::string parse_error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    load_csv(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("SplitMix64 reference values") {
  // Published outputs of the reference implementation for seed 0.
  SplitMix64 rng(0);
  CHECK(rng.next() == 0xE220A8397B1DCDAFULL);
  CHECK(rng.next() == 0x6E789E6AA1B965F4ULL);
  CHECK(rng.next() == 0x06C45D188009454FULL);
  SplitMix64 a(42);
  const SplitMix64 child = a.split(3);
  CHECK(a.next() == SplitMix64(42).next());
  CHECK(SplitMix64(42).split(3).uniform() == SplitMix64(child).uniform());
  CHECK(SplitMix64(42).split(3).next() != SplitMix64(42).split(4).next());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("box sampling") {
  const Box box(Vector{{-std::numbers::sqrt2, -std::numbers::pi / 2}},
                Vector{{std::numbers::sqrt2, std::numbers::pi / 2}});
  const Dataset data = sample_pairs(pendulum(), box, 10000, 0.1, 1);
  CHECK(data.size() == 10000);
  CHECK(data.dof() == 1);
  CHECK(*data.meta.get("system") == "pendulum");
  CHECK(*data.meta.get("n") == "10000");
  for (Eigen::Index i = 0; i < data.size(); i += 101) {
    CHECK(box.contains(data.x(i)));
    CHECK((step(pendulum(), data.x(i), 0.1) - data.y(i)).norm() == 0.0);
  }
  SUBCASE("uniformity") {
    for (Eigen::Index r = 0; r < 2; ++r) {
      const double width = box.upper[r] - box.lower[r];
      const double se = width / std::sqrt(12.0) / std::sqrt(10000.0);
      CHECK(std::abs(data.inputs.row(r).mean()) <= 3.0 * se);
    }
  }
  SUBCASE("determinism and order independence") {
    const Dataset small = sample_pairs(pendulum(), box, 50, 0.1, 1);
    CHECK(small.inputs == data.inputs.leftCols(50));
    CHECK(sample_pairs(pendulum(), box, 50, 0.1, 2).inputs != small.inputs);
  }
}

TEST_CASE("failed samples are redrawn, then reported") {
  // Energy undefined for p > 0.5: half the box fails.
  const HamiltonianSystem picky(
      "picky", 1,
      [](const Vector& y) {
        if (y[0] > 0.5) throw SingularityError("picky");
        return 0.5 * y.squaredNorm();
      },
      [](const Vector& y) {
        if (y[0] > 0.5) throw SingularityError("picky");
        return Vector(y);
      });
  const Box half(Vector{{-0.5, -1.0}}, Vector{{1.5, 1.0}});
  const Dataset d = sample_pairs(picky, half, 200, 0.01, 3, fast());
  CHECK(d.size() == 200);
  CHECK((d.inputs.row(0).array() <= 0.5).all());
  const Box bad(Vector{{0.6, -1.0}}, Vector{{1.0, 1.0}});
  CHECK_THROWS_AS(sample_pairs(picky, bad, 5, 0.01, 3, fast(), 4), SingularityError);
}

TEST_CASE("trajectories") {
  const Dataset pd = sample_trajectory(pendulum(), Vector{{0.0, 1.0}}, 40, 0.1);
  CHECK(pd.size() == 40);
  CHECK(pd.x(0) == Vector{{0.0, 1.0}});
  for (Eigen::Index i = 0; i + 1 < pd.size(); ++i) CHECK(pd.y(i) == pd.x(i + 1));
  CHECK(pd.final_point() == pd.y(39));
  CHECK(sample_trajectory(lotka_volterra(), Vector{{0.0, 1.0}}, 25, 0.1).size() == 25);
  const Dataset k = sample_trajectory(kepler(), Vector{{1.0, 0.0, 0.0, 1.0}}, 40, 0.1);
  CHECK(k.size() == 40);
  CHECK(k.inputs.rows() == 4);
  // Circular orbit: the exact flow is a rotation with unit angular speed.
  const double t = 4.0;
  const Vector exact{{std::cos(t), -std::sin(t), std::sin(t), std::cos(t)}};
  CHECK((k.final_point() - exact).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("CSV round trip") {
  const Box box(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
  const Dataset data = sample_pairs(harmonic_oscillator(), box, 100, 0.1, 5, fast());
  std::stringstream ss;
  save_csv(ss, data);
  const std::string text = ss.str();
  CHECK(text.rfind("# system=harmonic\n", 0) == 0);
  CHECK(text.find("\nx1,x2,y1,y2\n") != std::string::npos);
  const Dataset back = load_csv(ss);
  CHECK(back == data);
  std::stringstream again;
  save_csv(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("CSV errors") {
  CHECK(parse_error_of("").find("empty") != std::string::npos);
  CHECK(parse_error_of("# system=x\nx1,x2,y1,y2\n").find("empty") != std::string::npos);
  const std::string header = "x1,x2,y1,y2\n";
  const std::string wrong = parse_error_of(header + "1,2,3,4\n1,2,3\n");
  CHECK(wrong.find("line 3") != std::string::npos);
  CHECK(wrong.find("expected 4 columns, got 3") != std::string::npos);
  CHECK(parse_error_of(header + "1,2,x,4\n").find("line 2, column 3") != std::string::npos);
  CHECK(parse_error_of("a,b\n1,2\n") != "");
  CHECK(parse_error_of("x1,x2,x3,y1,y2,y3\n1,2,3,4,5,6\n") != "");
  std::istringstream empty("");
  CHECK_THROWS_AS(load_csv(empty), EmptyDatasetError);
}

TEST_CASE("number formatting") {
  for (const double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(*parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(*parse_double(" +1.5 ") == 1.5);
  CHECK_FALSE(parse_double("1.5x"));
  CHECK_FALSE(parse_double(""));
  CHECK(parse_vector("1,2.5,-3") == Vector{{1.0, 2.5, -3.0}});
  CHECK_THROWS_AS(parse_vector("1,,3"), std::invalid_argument);
  CHECK_THROWS_AS(Box(Vector{{1.0}}, Vector{{0.0}}), std::invalid_argument);
}
