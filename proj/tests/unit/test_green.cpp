#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hmono/green.hpp"

using namespace hmono;

TEST_CASE("fundamental solution") {
  Vector x(3);
  x << 0.0, 3.0, 4.0;
  CHECK(gamma(3, x) == doctest::Approx(-1.0 / (4.0 * std::numbers::pi * 5.0)));
  CHECK(gamma_radial(3, 5.0) == gamma(3, x));
  CHECK_THROWS_AS(gamma(2, Vector::Ones(2)), DimensionError);
  CHECK_THROWS_AS(gamma(3, Vector::Zero(3)), InputError);
}

TEST_CASE("gamma is harmonic away from the origin") {
  Vector x(4);
  x << 0.5, -0.2, 0.7, 0.1;
  CHECK(std::abs(fd_laplacian([](const Vector& z) { return gamma(4, z); }, x, 1e-3)) < 1e-5);
}

TEST_CASE("test function laplacians agree with finite differences") {
  Vector x(3);
  x << 0.3, -0.6, 0.2;
  for (const auto& f : {TestFunction::square_norm(), TestFunction::coordinate(1),
                        TestFunction::saddle(), TestFunction::gaussian()}) {
    CHECK(fd_laplacian(f.value, x) == doctest::Approx(f.laplacian(x)).epsilon(1e-5));
  }
}

TEST_CASE("identity holds in higher dimension") {
  Vector y(4);
  y << 0.1, 0.2, -0.1, 0.0;
  // n >= 4 uses quasi-random sphere directions, hence the looser tolerance
  CHECK(identity_residual(TestFunction::gaussian(), 4, y, 0.6) < 1e-3);
  CHECK(identity_residual(TestFunction::square_norm(), 5, Vector::Zero(5), 1.0) < 1e-10);
}

TEST_CASE("representation terms for a harmonic function") {
  const auto f = TestFunction::saddle();
  Vector y(3);
  y << 0.4, 0.1, 0.0;
  const auto t = representation_terms(f.value, f.laplacian, 3, y, 0.5);
  CHECK(t.correction == doctest::Approx(0.0));
  CHECK(t.average == doctest::Approx(f.value(y)).epsilon(1e-12));
}

TEST_CASE("decomposition probe for p = 4 has a nonzero B term") {
  Vector u(3);
  u << 0.3, 0.5, -0.4;
  const auto d = proof_decomposition_probe(CostFunction::isotropic(3, 4.0), u, 0.25);
  CHECK(d.residual < 1e-8);
  CHECK(d.b_term != 0.0);
  CHECK(d.lhs == doctest::Approx(d.a_term + d.b_term));
}

TEST_CASE("convergence study reports the observed order") {
  const auto s = convergence_study([](std::size_t b) { return 1.0 / (b * b); }, {4, 8, 16, 32});
  CHECK(s.order == doctest::Approx(2.0));
  CHECK(s.decreasing);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows[0].residual == doctest::Approx(1.0 / 16));
}
