#include <cmath>
#include <random>

#include "doctest.h"
#include "hmono/monotone.hpp"
#include "hmono/zoo.hpp"

using namespace hmono;

TEST_CASE("h_defect of the identity map is 2 h(x - y)") {
  const auto c = CostFunction::isotropic(2, 3.0);
  Vector x(2), y(2);
  x << 0.3, 0.1;
  y << -0.4, 0.8;
  CHECK(h_defect(c, x, y, x, y) == doctest::Approx(2.0 * std::pow((x - y).norm(), 3.0)));
}

TEST_CASE("p = 2 defect reduces to classical monotonicity") {
  const auto c = CostFunction::isotropic(3, 2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rv = [&] { return Vector(Vector::NullaryExpr(3, [&](Eigen::Index) { return u(rng); })); };
  for (int k = 0; k < 100; ++k) {
    const Vector x = rv(), y = rv(), tx = rv(), ty = rv();
    const double classical = 2.0 * (tx - ty).dot(x - y);
    CHECK(h_defect(c, x, y, tx, ty) == doctest::Approx(classical).epsilon(1e-12));
    CHECK(bilinear_defect(c, x, y, tx, ty) == doctest::Approx(classical).epsilon(1e-12));
  }
}

TEST_CASE("check_map on monotone and non-monotone zoo maps") {
  const auto c = CostFunction::isotropic(2, 2.0);
  ZooSpec spec;
  spec.dimension = 2;
  spec.name = "dilation";
  spec.params = {1.5};
  CHECK(check_map(analytic_zoo(spec), c, HForm{}).passed);
  spec.name = "reflection";
  spec.params = {};
  const auto rep = check_map(analytic_zoo(spec), c, HForm{});
  CHECK_FALSE(rep.passed);
  CHECK(rep.worst_defect < 0.0);
  CHECK(rep.worst_pair.first != rep.worst_pair.second);
}

TEST_CASE("sampled mode checks the requested number of pairs") {
  ZooSpec spec;
  spec.dimension = 2;
  spec.samples = 400;
  CheckOptions opt;
  opt.all_pairs_limit = 100;
  opt.sampled_pairs = 5000;
  const auto rep = check_map(analytic_zoo(spec), CostFunction::isotropic(2, 3.0), HForm{}, opt);
  CHECK(rep.pairs_checked == 5000);
  CHECK(rep.passed);
}

TEST_CASE("classical mode with A") {
  ZooSpec spec;
  spec.dimension = 2;
  spec.name = "dilation";
  spec.params = {2.0};
  const auto map = analytic_zoo(spec);
  const auto c = CostFunction::isotropic(2, 2.0);
  // the A terms cancel: any A certifies the same monotone T
  CHECK(check_map(map, c, Classical{Matrix::Identity(2, 2)}).passed);
  CHECK(check_map(map, c, Classical{3.0 * Matrix::Identity(2, 2)}).passed);
  spec.name = "reflection";
  spec.params = {};
  CHECK_FALSE(check_map(analytic_zoo(spec), c, Classical{Matrix::Identity(2, 2)}).passed);
  CHECK(mode_name(Classical{Matrix::Identity(2, 2)}) == "classical");
}

TEST_CASE("dimension mismatch throws") {
  ZooSpec spec;
  spec.dimension = 3;
  CHECK_THROWS_AS(check_map(analytic_zoo(spec), CostFunction::isotropic(2, 2.0), HForm{}),
                  DimensionError);
}
