#pragma once

#include <cstdint>
#include <vector>

#include "hmono/types.hpp"

namespace hmono {

/// Gauss-Legendre rule mapped to [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int order);

/// Same rule mapped to [a, b].
GaussRule gauss_legendre(int order, double a, double b);

/// Volume of the unit ball in R^n (omega_n).
double unit_ball_volume(int n);

/// Surface area of the unit sphere S^{n-1}, n * omega_n.
double unit_sphere_area(int n);

/// Randomly shifted Halton sequence in [0,1)^dim. The Cranley-Patterson shift
/// is drawn from a seeded mt19937_64, so a seed fixes the point set.
class Halton {
 public:
  Halton(int dim, std::uint64_t seed);

  int dimension() const { return static_cast<int>(shift_.size()); }
  Vector point(std::uint64_t index) const;

 private:
  std::vector<double> shift_;
};

/// First `count` Halton points that fall inside B_radius(center), drawn by
/// rejection from the bounding cube.
std::vector<Vector> ball_samples(const Vector& center, double radius, std::size_t count,
                                 std::uint64_t seed);

/// Antipodally symmetric low-discrepancy direction set on S^{n-1}. Returns
/// 2 * ceil(count / 2) unit vectors (exactly {+1, -1} when n == 1).
std::vector<Vector> sphere_directions(int n, std::size_t count);

/// Deterministic covering of S^{n-1} used for extreme-value searches:
/// Fibonacci lattice for n = 3, tensor grids over hyperspherical angles
/// otherwise. `resolution` is the point count for n = 3 and the per-angle
/// count for the other dimensions.
std::vector<Vector> sphere_grid(int n, std::size_t resolution);

}  // namespace hmono
