#include "doctest.h"
#include "hmono/zoo.hpp"

using namespace hmono;

TEST_CASE("zoo closures") {
  ZooSpec spec;
  spec.dimension = 2;
  Vector x(2);
  x << 0.3, -0.4;
  CHECK(analytic_zoo(spec).apply(x) == x);
  spec.name = "translation";
  spec.params = {0.1};
  CHECK((analytic_zoo(spec).apply(x) - Vector((Vector(2) << 0.4, -0.4).finished())).norm() < 1e-15);
  spec.params = {0.1, 0.2};
  CHECK((analytic_zoo(spec).apply(x) - Vector((Vector(2) << 0.4, -0.2).finished())).norm() < 1e-15);
  spec.name = "dilation";
  spec.params = {3.0};
  CHECK((analytic_zoo(spec).apply(x) - 3.0 * x).norm() < 1e-15);
  spec.name = "grad_quartic";
  spec.params = {};
  CHECK((analytic_zoo(spec).apply(x) - 0.25 * x).norm() < 1e-15);
  spec.name = "reflection";
  CHECK(analytic_zoo(spec).apply(x) == -x);
}

TEST_CASE("zoo catalogue") {
  const auto names = zoo_names();
  CHECK(names.size() >= 6);
  CHECK_FALSE(zoo_is_monotone("reflection"));
  CHECK(zoo_is_monotone("dilation"));
  for (const auto& n : names) CHECK_FALSE(zoo_description(n).empty());
}

TEST_CASE("zoo stored samples lie in the ball") {
  ZooSpec spec;
  spec.dimension = 3;
  spec.samples = 100;
  spec.radius = 0.5;
  const auto map = analytic_zoo(spec);
  REQUIRE(map.size() == 100);
  for (std::size_t i = 0; i < map.size(); ++i) CHECK(map[i].x.norm() <= 0.5);
}

TEST_CASE("zoo rejects bad input") {
  ZooSpec spec;
  spec.name = "nope";
  CHECK_THROWS_AS(analytic_zoo(spec), InputError);
  spec.name = "dilation";
  spec.params = {-1.0};
  CHECK_THROWS_AS(analytic_zoo(spec), InputError);
  spec.name = "piecewise_linear";
  spec.params = {};
  spec.dimension = 2;
  CHECK_THROWS(analytic_zoo(spec));
}
