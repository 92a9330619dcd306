#include "hmono/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

void require_green_dimension(int n) {
  if (n < 3) throw DimensionError("Green identity needs n >= 3");
}

struct SphereRule {
  std::vector<Vector> nodes;
  std::vector<double> weights;  // sum to the sphere area
};

// n = 3: Gauss in cos(theta) times equispaced phi, symmetric under x -> -x.
// n >= 4: equal-weight antipodal low-discrepancy directions.
SphereRule sphere_rule(int n, std::size_t budget) {
  SphereRule rule;
  if (n == 3) {
    const int k = std::max(1, static_cast<int>(std::lround(std::sqrt(budget / 2.0))));
    const GaussRule g = gauss_legendre(k, -1.0, 1.0);
    const int m = 2 * k;
    for (int a = 0; a < k; ++a) {
      const double z = g.nodes[a];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int b = 0; b < m; ++b) {
        const double phi = 2.0 * std::numbers::pi * (b + 0.5) / m;
        Vector v(3);
        v << rho * std::cos(phi), rho * std::sin(phi), z;
        rule.nodes.push_back(v);
        rule.weights.push_back(g.weights[a] * 2.0 * std::numbers::pi / m);
      }
    }
    return rule;
  }
  rule.nodes = sphere_directions(n, std::max<std::size_t>(2, budget));
  const double w = unit_sphere_area(n) / static_cast<double>(rule.nodes.size());
  rule.weights.assign(rule.nodes.size(), w);
  return rule;
}

double sphere_integral(const std::function<double(const Vector&)>& f, const SphereRule& rule,
                       const Vector& center, double s) {
  return ordered_sum(rule.nodes.size(), [&](std::size_t i) {
    return rule.weights[i] * f(center + s * rule.nodes[i]);
  });
}

}  // namespace

double gamma_radial(int n, double s) {
  require_green_dimension(n);
  if (!(s > 0.0)) throw InputError("gamma: x must be nonzero");
  return std::pow(s, 2.0 - n) / (n * unit_ball_volume(n) * (2.0 - n));
}

double gamma(int n, const Vector& x) {
  require_dimension(x, n, "gamma");
  return gamma_radial(n, x.norm());
}

TestFunction TestFunction::square_norm() {
  return {[](const Vector& x) { return x.squaredNorm(); },
          [](const Vector& x) { return 2.0 * static_cast<double>(x.size()); }, "square_norm"};
}

TestFunction TestFunction::coordinate(int axis) {
  if (axis < 0) throw InputError("coordinate: axis must be >= 0");
  return {[axis](const Vector& x) { return x(axis); }, [](const Vector&) { return 0.0; },
          "coordinate_" + std::to_string(axis)};
}

TestFunction TestFunction::saddle() {
  return {[](const Vector& x) { return x(0) * x(0) - x(1) * x(1); },
          [](const Vector&) { return 0.0; }, "saddle"};
}

TestFunction TestFunction::gaussian() {
  return {[](const Vector& x) { return std::exp(-x.squaredNorm()); },
          [](const Vector& x) {
            const double q = x.squaredNorm();
            return (4.0 * q - 2.0 * static_cast<double>(x.size())) * std::exp(-q);
          },
          "gaussian"};
}

double fd_laplacian(const std::function<double(const Vector&)>& f, const Vector& x,
                    double step) {
  const double f0 = f(x);
  double acc = 0.0;
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Vector xp = x, xm = x;
    xp(d) += step;
    xm(d) -= step;
    acc += f(xp) - 2.0 * f0 + f(xm);
  }
  return acc / (step * step);
}

RepresentationTerms representation_terms(const std::function<double(const Vector&)>& value,
                                         const std::function<double(const Vector&)>& laplacian,
                                         int n, const Vector& center, double r,
                                         const GreenQuadrature& quad) {
  require_green_dimension(n);
  require_dimension(center, n, "representation_terms");
  if (!(r > 0.0)) throw InputError("representation_terms: radius must be positive");
  if (quad.outer_order < 1 || quad.inner_order < 1) {
    throw InputError("representation_terms: quadrature orders must be positive");
  }
  const SphereRule sphere = sphere_rule(n, quad.directions);
  const GaussRule outer = gauss_legendre(quad.outer_order, 0.0, r);
  const GaussRule inner = gauss_legendre(quad.inner_order);
  const double omega = unit_ball_volume(n);
  const double norm = 1.0 / (n * omega * (2.0 - n));

  RepresentationTerms out;
  out.average = ordered_sum(outer.nodes.size(), [&](std::size_t k) {
                  const double s = outer.nodes[k];
                  return outer.weights[k] * std::pow(s, n - 1) *
                         sphere_integral(value, sphere, center, s);
                }) /
                (omega * std::pow(r, n));

  // s^{n-1} (Gamma(s) - Gamma(rho)) = norm (s - s^{n-1} rho^{2-n}).
  std::vector<double> outer_terms(outer.nodes.size());
  parallel_for(outer.nodes.size(), [&](std::size_t k) {
    const double rho = outer.nodes[k];
    double ball = 0.0;
    for (std::size_t j = 0; j < inner.nodes.size(); ++j) {
      const double s = rho * inner.nodes[j];
      const double kernel = norm * (s - std::pow(s, n - 1) * std::pow(rho, 2.0 - n));
      ball += rho * inner.weights[j] * kernel * sphere_integral(laplacian, sphere, center, s);
    }
    outer_terms[k] = outer.weights[k] * std::pow(rho, n - 1) * ball;
  });
  out.correction = n / std::pow(r, n) * pairwise_sum(outer_terms);
  return out;
}

double identity_residual(const TestFunction& f, int n, const Vector& y, double r,
                         std::size_t budget) {
  GreenQuadrature quad;
  quad.directions = budget;
  const auto terms = representation_terms(f.value, f.laplacian, n, y, r, quad);
  return std::abs(f.value(y) - terms.average - terms.correction);
}

DecompositionProbe proof_decomposition_probe(const CostFunction& cost, const Vector& u,
                                             double delta, std::size_t budget) {
  const int n = cost.dimension();
  require_green_dimension(n);
  require_dimension(u, n, "proof_decomposition_probe");
  const double un = u.norm();
  if (!(un > 0.0)) throw InputError("proof_decomposition_probe: u must be nonzero");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InputError("proof_decomposition_probe: delta must lie in (0, 1)");
  }
  const double r = delta * un;
  const Vector center = (r / un) * u;
  auto v = [&](const Vector& x) { return -g_function(cost, x, u); };
  auto lap = [&](const Vector& x) {
    return cost.laplacian(x) - cost.laplacian(Vector(x - u));
  };
  GreenQuadrature quad;
  quad.directions = budget;
  const auto terms = representation_terms(v, lap, n, center, r, quad);
  DecompositionProbe out;
  out.lhs = v(center);
  out.a_term = terms.average;
  out.b_term = terms.correction;
  out.residual = std::abs(out.lhs - (out.a_term + out.b_term));
  return out;
}

ConvergenceStudy convergence_study(const std::function<double(std::size_t)>& residual,
                                   const std::vector<std::size_t>& budgets, double floor) {
  ConvergenceStudy out;
  for (std::size_t b : budgets) out.rows.push_back({b, residual(b)});
  out.decreasing = out.rows.size() >= 2;
  double order = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k + 1 < out.rows.size(); ++k) {
    const auto& a = out.rows[k];
    const auto& b = out.rows[k + 1];
    if (a.residual <= floor && b.residual <= floor) continue;
    if (!(b.residual <= a.residual)) out.decreasing = false;
    if (a.residual > floor && b.residual > floor && b.budget > a.budget) {
      order = std::min(order, std::log(a.residual / b.residual) /
                                  std::log(static_cast<double>(b.budget) / a.budget));
      any = true;
    }
  }
  out.order = any ? order : 0.0;
  return out;
}

}  // namespace hmono
