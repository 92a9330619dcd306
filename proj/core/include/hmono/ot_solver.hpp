#pragma once

#include <vector>

#include "hmono/cost.hpp"
#include "hmono/discrete_map.hpp"

namespace hmono {

using PointCloud = std::vector<Vector>;

/// sigma[i] is the target index assigned to source i.
struct Assignment {
  std::vector<int> sigma;
  double cost = 0.0;
};

/// Dense matrix C(i, j) = h(x_i - y_j).
Matrix cost_matrix(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost);

/// sum_i h(x_i - y_sigma(i)), accumulated in source order.
double assignment_cost(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost,
                       const std::vector<int>& sigma);

/// Exact minimum-cost assignment via shortest augmenting paths with dual
/// potentials. O(N^3). When several permutations are optimal any one of them
/// may be returned.
Assignment solve_exact(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost);

/// Exhaustive search over all N! permutations (N <= 9). Ties go to the
/// lexicographically smallest permutation.
Assignment solve_bruteforce(const PointCloud& xs, const PointCloud& ys,
                            const CostFunction& cost);

inline constexpr std::size_t kBruteforceLimit = 9;

/// Monotone rearrangement in one dimension: i-th smallest source to i-th
/// smallest target. Cost is evaluated with `cost`.
Assignment rearrangement_1d(const PointCloud& xs, const PointCloud& ys,
                            const CostFunction& cost);

/// The map x_i -> y_sigma(i), without a closure.
DiscreteMap assignment_map(const PointCloud& xs, const PointCloud& ys, const Assignment& a,
                           std::string label = "assignment");

}  // namespace hmono
