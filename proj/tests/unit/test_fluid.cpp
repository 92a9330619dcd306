#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hmono/fluid.hpp"
#include "hmono/zoo.hpp"

using namespace hmono;

namespace {

DiscreteMap zoo(const std::string& name, int n, std::vector<double> params) {
  ZooSpec spec;
  spec.name = name;
  spec.dimension = n;
  spec.params = std::move(params);
  return analytic_zoo(spec);
}

}  // namespace

TEST_CASE("velocity of a translation is constant") {
  const auto map = zoo("translation", 2, {0.1, -0.2});
  Vector x(2);
  x << 0.3, 0.3;
  for (double t : {0.0, 0.5, 1.0}) {
    const Vector v = velocity(map, t, x);
    CHECK(v(0) == doctest::Approx(0.1));
    CHECK(v(1) == doctest::Approx(-0.2));
  }
}

TEST_CASE("velocity of a dilation") {
  // T_t x = (1 + t) x, so v(t, z) = z / (1 + t)
  const auto map = zoo("dilation", 2, {2.0});
  Vector z(2);
  z << 0.6, -0.3;
  CHECK((velocity(map, 0.5, z) - z / 1.5).norm() < 1e-9);
}

TEST_CASE("continuity equation holds for the induced flow") {
  const auto field = make_flow_field(zoo("dilation", 2, {1.5}), Density::cosine_bump(2, 2.0, 0.2));
  const double r = continuity_residual(field, Grid::cube(2, 0.8, 4), {0.2, 0.5, 0.8});
  CHECK(r < 1e-4);
}

TEST_CASE("continuity residual detects an inconsistent flow") {
  const auto field = make_flow_field(
      2, [](const Vector& x, double) { return Vector(x); },
      [](const Vector&, double) { return 1.0; });
  CHECK(continuity_residual(field, Grid::cube(2, 0.5, 4), {0.5}) > 1.0);
}

TEST_CASE("action equals displacement energy for a translation") {
  const auto map = zoo("translation", 2, {0.05});
  const auto rho0 = Density::uniform(2, 2.0);
  const auto field = make_flow_field(map, rho0);
  const auto act = action_integral(field, 0.5, 4, 8000, 2.0, 1);
  CHECK(act.value == doctest::Approx(0.0025 * std::numbers::pi * 0.25).epsilon(1e-6));
  const auto e = displacement_energy(map, rho0, 0.5, 8000, 2.0, 1);
  CHECK(e.value == doctest::Approx(act.value).epsilon(1e-6));
}

TEST_CASE("sandwich reports the regime") {
  const auto cost = CostFunction::isotropic(2, 2.0);
  const auto rho0 = Density::uniform(2, 2.0);
  const auto ok = sandwich_check(zoo("translation", 2, {0.02}), cost, rho0, 0.4, 0.5, 0.6);
  CHECK(ok.regime_met);
  CHECK(ok.passed);
  REQUIRE(ok.linfty_estimate.has_value());
  const auto big = sandwich_check(zoo("translation", 2, {0.5}), cost, rho0, 0.4, 0.5, 0.6);
  CHECK_FALSE(big.regime_met);
  CHECK(big.message.rfind("hypothesis not met", 0) == 0);
}

TEST_CASE("sandwich rejects unordered radii") {
  CHECK_THROWS_AS(sandwich_check(zoo("identity", 2, {}), CostFunction::isotropic(2, 2.0),
                                 Density::uniform(2, 2.0), 0.6, 0.5, 0.4),
                  InputError);
}
