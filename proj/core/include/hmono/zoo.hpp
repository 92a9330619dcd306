#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hmono/discrete_map.hpp"

namespace hmono {

/// Recipe for an analytic test map.
///
///   identity           T x = x
///   translation        T x = x + c           params: c (n values, or one value along e1)
///   dilation           T x = a x, a > 0      params: {a}
///   grad_quartic       T x = k |x|^2 x       params: {k} (default 1); gradient of k|x|^4/4
///   piecewise_linear   1-D, slope s0 left of the knot and s1 right of it, T(knot) = knot
///                                            params: {knot, s0, s1} (default {0, 0.5, 2})
///   reflection         T x = -x              negative control, not monotone
struct ZooSpec {
  std::string name = "identity";
  int dimension = 1;
  std::vector<double> params;
  std::size_t samples = 256;  ///< stored pairs, Halton-sampled in the ball below
  double radius = 1.0;
  std::uint64_t seed = 0;
};

DiscreteMap analytic_zoo(const ZooSpec& spec);

std::vector<std::string> zoo_names();

/// Whether the named member is (h-)monotone for every built-in cost.
bool zoo_is_monotone(const std::string& name);

/// Short description for `hmono zoo list`.
std::string zoo_description(const std::string& name);

}  // namespace hmono
