#include <cmath>
#include <random>

#include "doctest.h"
#include "hmono/cost.hpp"

using namespace hmono;

namespace {

Vector rand_vec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// |z|^p written as a plug-in model, to exercise the numeric extremes search.
class PowerModel : public CostModel {
 public:
  explicit PowerModel(double p) : p_(p) {}
  double value(const Vector& z) const override { return std::pow(z.norm(), p_); }
  Vector gradient(const Vector& z) const override {
    const double r = z.norm();
    return r == 0.0 ? Vector::Zero(z.size()).eval() : (p_ * std::pow(r, p_ - 2.0) * z).eval();
  }
  Matrix hessian(const Vector& z) const override {
    const double r = z.norm();
    const int n = static_cast<int>(z.size());
    if (r == 0.0) return Matrix::Zero(n, n);
    return p_ * std::pow(r, p_ - 2.0) *
           (Matrix::Identity(n, n) + (p_ - 2.0) * z * z.transpose() / (r * r));
  }

 private:
  double p_;
};

}  // namespace

TEST_CASE("isotropic cost value, gradient, hessian") {
  const auto c = CostFunction::isotropic(3, 3.0);
  Vector z(3);
  z << 0.3, -0.4, 1.2;
  const double r = z.norm();
  CHECK(c.h(z) == doctest::Approx(r * r * r));
  CHECK((c.gradient(z) - 3.0 * r * z).norm() < 1e-12);
  const Matrix expected = 3.0 * r * (Matrix::Identity(3, 3) + z * z.transpose() / (r * r));
  CHECK((c.hessian(z) - expected).norm() < 1e-12);
  CHECK(c.laplacian(z) == doctest::Approx(expected.trace()));
}

TEST_CASE("isotropic sphere extremes") {
  const auto e = CostFunction::isotropic(2, 4.0).extremes();
  CHECK(e.m == 1.0);
  CHECK(e.M == 1.0);
  CHECK(e.grad_max == doctest::Approx(4.0));
  CHECK(e.lambda == doctest::Approx(4.0));
  CHECK(e.Lambda == doctest::Approx(12.0));
}

TEST_CASE("weighted extremes agree with the numeric search") {
  const auto c = CostFunction::weighted({1.0, 2.0, 0.5}, 3.0);
  const auto a = c.extremes();
  const auto b = sphere_extremes_numeric(c);
  CHECK(a.m == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-9));
  CHECK(a.M == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-9));
  CHECK(b.m == doctest::Approx(a.m).epsilon(1e-6));
  CHECK(b.M == doctest::Approx(a.M).epsilon(1e-6));
}

TEST_CASE("custom model matches the built-in family") {
  const auto custom = CostFunction::custom(2, 3.0, std::make_shared<PowerModel>(3.0));
  const auto iso = CostFunction::isotropic(2, 3.0);
  CHECK(custom.extremes().m == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(custom.extremes().M == doctest::Approx(1.0).epsilon(1e-6));
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const Vector x = rand_vec(rng, 2), y = rand_vec(rng, 2), tx = rand_vec(rng, 2),
                 ty = rand_vec(rng, 2);
    CHECK((a_matrix(custom, x, y, tx, ty).value - a_matrix(iso, x, y, tx, ty).value).norm() <
          1e-10);
  }
}

TEST_CASE("invalid costs are rejected") {
  CHECK_THROWS_AS(CostFunction::isotropic(0, 2.0), InputError);
  CHECK_THROWS_AS(CostFunction::isotropic(2, 1.5), InputError);
  CHECK_THROWS_AS(CostFunction::weighted({1.0, -1.0}, 2.0), InputError);
  CHECK_THROWS_AS(CostFunction::weighted({}, 2.0), InputError);
}

TEST_CASE("g_function and phi_weight at p = 2") {
  const auto c = CostFunction::isotropic(3, 2.0);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 50; ++k) {
    const Vector a = rand_vec(rng, 3), b = rand_vec(rng, 3);
    CHECK(g_function(c, a, b) == doctest::Approx(-2.0 * a.dot(b)));
    const Vector x = rand_vec(rng, 3), y = rand_vec(rng, 3), tx = rand_vec(rng, 3),
                 ty = rand_vec(rng, 3);
    CHECK(phi_weight(c, x, y, tx, ty).value == doctest::Approx(1.0));
    CHECK((a_matrix(c, x, y, tx, ty).value - 2.0 * Matrix::Identity(3, 3)).norm() < 1e-13);
  }
}

TEST_CASE("phi_weight at p = 4 against a brute-force tensor rule") {
  const auto c = CostFunction::isotropic(2, 4.0);
  Vector x(2), y(2), tx(2), ty(2);
  x << 0.2, 0.1;
  y << -0.5, 0.3;
  tx << 0.4, -0.3;
  ty << 0.0, 0.9;
  // |w|^2 is a quadratic in (s, t), so a midpoint rule converges at second order
  const int m = 2000;
  double sum = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const double s = (i + 0.5) / m, t = (j + 0.5) / m;
      const Vector w = y - ty + s * (ty - tx) + t * (x - y);
      sum += w.squaredNorm();
    }
  }
  CHECK(phi_weight(c, x, y, tx, ty).value == doctest::Approx(sum / (m * m)).epsilon(1e-6));
}

TEST_CASE("cross determinant identity for the isotropic family") {
  Vector x(2), y(2);
  x << 0.7, 0.1;
  y << -0.2, 0.4;
  CHECK(cross_det_residual(CostFunction::isotropic(2, 3.0), x, y) < 1e-5);
}
