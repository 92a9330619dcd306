#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hmono/cost.hpp"

namespace hmono {

/// Fundamental solution of the Laplacian, |x|^{2-n} / (n omega_n (2 - n)).
/// Requires n >= 3 and x != 0.
double gamma(int n, const Vector& x);

/// Radial profile of gamma at |x| = s.
double gamma_radial(int n, double s);

struct TestFunction {
  std::function<double(const Vector&)> value;
  std::function<double(const Vector&)> laplacian;
  std::string label;

  static TestFunction square_norm();          ///< |x|^2, Laplacian 2n
  static TestFunction coordinate(int axis);   ///< x_axis, harmonic
  static TestFunction saddle();               ///< x_1^2 - x_2^2, harmonic
  static TestFunction gaussian();             ///< exp(-|x|^2)
};

/// Central-difference Laplacian with step `step`.
double fd_laplacian(const std::function<double(const Vector&)>& f, const Vector& x,
                    double step = 1e-4);

struct GreenQuadrature {
  int outer_order = 64;             ///< Gauss nodes in the averaging radius
  int inner_order = 32;             ///< Gauss nodes in the inner radius
  std::size_t directions = 2048;    ///< sphere nodes per radius
};

struct RepresentationTerms {
  double average = 0.0;     ///< mean of f over B_r(center)
  double correction = 0.0;  ///< (n/r^n) int_0^r rho^{n-1} int_{B_rho} (Gamma - Gamma(rho)) Lap f
};

/// Both right-hand terms of the ball-averaged Green representation of f at
/// `center`. Integrals over balls are taken in polar coordinates, which makes
/// s^{n-1} Gamma(s) polynomial and removes the singularity.
RepresentationTerms representation_terms(const std::function<double(const Vector&)>& value,
                                         const std::function<double(const Vector&)>& laplacian,
                                         int n, const Vector& center, double r,
                                         const GreenQuadrature& quad = {});

/// |f(y) - average - correction|; `budget` is the number of sphere nodes.
double identity_residual(const TestFunction& f, int n, const Vector& y, double r,
                         std::size_t budget = 2048);

struct DecompositionProbe {
  double lhs = 0.0;     ///< -G(r omega, u)
  double a_term = 0.0;  ///< ball average of -G(., u) over B_r(r omega)
  double b_term = 0.0;  ///< Gamma-weighted Laplacian term
  double residual = 0.0;
};

/// Applies the representation to v(x) = -G(x, u) = h(x) + h(u) - h(x - u) on
/// the ball of radius r = delta |u| centred at r u/|u|.
DecompositionProbe proof_decomposition_probe(const CostFunction& cost, const Vector& u,
                                             double delta, std::size_t budget = 2048);

struct ConvergenceRow {
  std::size_t budget = 0;
  double residual = 0.0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Smallest observed order log(r_k / r_{k+1}) / log(b_{k+1} / b_k) over
  /// consecutive rows whose residuals both sit above `floor`.
  double order = 0.0;
  bool decreasing = false;
};

ConvergenceStudy convergence_study(const std::function<double(std::size_t)>& residual,
                                   const std::vector<std::size_t>& budgets,
                                   double floor = 1e-13);

}  // namespace hmono
