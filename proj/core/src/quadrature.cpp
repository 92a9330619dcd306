#include "hmono/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace hmono {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw InputError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = order * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - z);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + z);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

GaussRule gauss_legendre(int order, double a, double b) {
  GaussRule rule = gauss_legendre(order);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = a + (b - a) * rule.nodes[i];
    rule.weights[i] *= (b - a);
  }
  return rule;
}

double unit_ball_volume(int n) {
  if (n < 1) throw InputError("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

namespace {

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                           43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double radical_inverse(std::uint64_t index, int base) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * static_cast<double>(index % base);
    index /= base;
    f /= base;
  }
  return result;
}

}  // namespace

Halton::Halton(int dim, std::uint64_t seed) {
  if (dim < 1 || dim > static_cast<int>(std::size(kPrimes))) {
    throw InputError("Halton: unsupported dimension " + std::to_string(dim));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  shift_.resize(dim);
  for (auto& s : shift_) s = unif(rng);
}

Vector Halton::point(std::uint64_t index) const {
  Vector v(dimension());
  for (int d = 0; d < dimension(); ++d) {
    double x = radical_inverse(index + 1, kPrimes[d]) + shift_[d];
    v(d) = x - std::floor(x);
  }
  return v;
}

std::vector<Vector> ball_samples(const Vector& center, double radius, std::size_t count,
                                 std::uint64_t seed) {
  if (!(radius > 0.0)) throw InputError("ball_samples: radius must be positive");
  const int n = static_cast<int>(center.size());
  Halton seq(n, seed);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::uint64_t i = 0; out.size() < count; ++i) {
    Vector u = 2.0 * seq.point(i) - Vector::Ones(n);
    if (u.squaredNorm() <= 1.0) out.push_back(center + radius * u);
  }
  return out;
}

std::vector<Vector> sphere_directions(int n, std::size_t count) {
  if (n < 1) throw InputError("sphere_directions: n must be >= 1");
  std::vector<Vector> out;
  if (n == 1) {
    out.push_back(Vector::Constant(1, 1.0));
    out.push_back(Vector::Constant(1, -1.0));
    return out;
  }
  const std::size_t half = std::max<std::size_t>(1, (count + 1) / 2);
  out.reserve(2 * half);
  if (n == 2) {
    for (std::size_t i = 0; i < half; ++i) {
      const double a = std::numbers::pi * (i + 0.5) / half;
      Vector v(2);
      v << std::cos(a), std::sin(a);
      out.push_back(v);
      out.push_back(-v);
    }
    return out;
  }
  if (n == 3) {
    // Fibonacci lattice on the upper hemisphere, mirrored through the origin.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < half; ++i) {
      const double z = 1.0 - (i + 0.5) / half;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * i;
      Vector v(3);
      v << rho * std::cos(a), rho * std::sin(a), z;
      out.push_back(v);
      out.push_back(-v);
    }
    return out;
  }
  // Halton points pushed through Box-Muller, then normalised.
  const int pairs = (n + 1) / 2;
  Halton seq(2 * pairs, 0);
  for (std::size_t i = 0; i < half; ++i) {
    const Vector u = seq.point(i);
    Vector g(2 * pairs);
    for (int k = 0; k < pairs; ++k) {
      const double r = std::sqrt(-2.0 * std::log(std::max(u(2 * k), 1e-300)));
      g(2 * k) = r * std::cos(2.0 * std::numbers::pi * u(2 * k + 1));
      g(2 * k + 1) = r * std::sin(2.0 * std::numbers::pi * u(2 * k + 1));
    }
    Vector v = g.head(n);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    v /= norm;
    out.push_back(v);
    out.push_back(-v);
  }
  return out;
}

std::vector<Vector> sphere_grid(int n, std::size_t resolution) {
  if (n < 1) throw InputError("sphere_grid: n must be >= 1");
  if (resolution < 2) resolution = 2;
  std::vector<Vector> out;
  if (n == 1) {
    out.push_back(Vector::Constant(1, 1.0));
    out.push_back(Vector::Constant(1, -1.0));
    return out;
  }
  if (n == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < resolution; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / resolution;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vector v(3);
      v << rho * std::cos(golden * i), rho * std::sin(golden * i), z;
      out.push_back(v);
    }
    return out;
  }
  // Hyperspherical angles: phi_1..phi_{n-2} in [0, pi], phi_{n-1} in [0, 2pi).
  const int angles = n - 1;
  std::vector<std::size_t> idx(angles, 0);
  for (;;) {
    Vector v(n);
    double sin_prod = 1.0;
    for (int k = 0; k < angles; ++k) {
      const bool last = (k == angles - 1);
      const double phi = last ? 2.0 * std::numbers::pi * idx[k] / resolution
                              : std::numbers::pi * (idx[k] + 0.5) / resolution;
      v(k) = sin_prod * std::cos(phi);
      sin_prod *= std::sin(phi);
    }
    v(n - 1) = sin_prod;
    out.push_back(v);
    int k = 0;
    while (k < angles && ++idx[k] == resolution) {
      idx[k] = 0;
      ++k;
    }
    if (k == angles) break;
  }
  return out;
}

}  // namespace hmono
