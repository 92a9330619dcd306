#include "hmono/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("beta must lie in (0, 1)");
}

void check_ball(const Ball& ball, int n) {
  require_dimension(ball.center, n, "ball center");
  if (!(ball.radius > 0.0)) throw InputError("ball radius must be > 0");
}

// Mean and standard error of f over the sample, scaled by `volume`.
template <class F>
IntegralEstimate qmc_integral(const std::vector<Vector>& pts, double volume, F&& f) {
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = f(pts[i]); });
  const double n = static_cast<double>(pts.size());
  const double mean = pairwise_sum(vals) / n;
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = (vals[i] - mean) * (vals[i] - mean);
  const double var = pts.size() > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;
  return {volume * mean, volume * std::sqrt(var / n), pts.size()};
}

// Integral of f over the ball. In 1-D the ball is an interval and a composite
// Gauss-Legendre rule (order 8, even panel count so the centre is a panel
// edge) replaces QMC; the error estimate is the gap to the half-panel rule.
template <class F>
IntegralEstimate ball_integral(const Ball& ball, int n, std::size_t budget, F&& f) {
  if (n != 1) {
    const auto pts = ball_samples(ball.center, ball.radius, budget, ball.seed);
    return qmc_integral(pts, unit_ball_volume(n) * std::pow(ball.radius, n), f);
  }
  constexpr int kOrder = 8;
  const std::size_t panels = std::max<std::size_t>(2, (budget / kOrder) & ~std::size_t{1});
  const GaussRule g = gauss_legendre(kOrder);
  const double a = ball.center(0) - ball.radius;
  auto composite = [&](std::size_t count) {
    const double h = 2.0 * ball.radius / static_cast<double>(count);
    std::vector<double> vals(count);
    parallel_for(count, [&](std::size_t k) {
      double acc = 0.0;
      for (int q = 0; q < kOrder; ++q) {
        acc += g.weights[q] * f(Vector::Constant(1, a + h * (k + g.nodes[q])));
      }
      vals[k] = h * acc;
    });
    return pairwise_sum(vals);
  };
  const double fine = composite(panels);
  const double coarse = composite(panels / 2);
  return {fine, std::abs(fine - coarse), panels * kOrder};
}

// Largest |g(x)| over the QMC sample of B_{beta R} and over stored points inside it.
template <class G>
double empirical_sup(const DiscreteMap& map, const Ball& inner, std::size_t budget, G&& g) {
  const auto pts = ball_samples(inner.center, inner.radius, budget, inner.seed);
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { vals[i] = g(pts[i], map.apply(pts[i])); });
  double sup = 0.0;
  for (double v : vals) sup = std::max(sup, v);
  for (const auto& pr : map.pairs()) {
    if ((pr.x - inner.center).norm() < inner.radius) sup = std::max(sup, g(pr.x, pr.tx));
  }
  return sup;
}

}  // namespace

std::string to_string(Branch b) { return b == Branch::Small ? "small" : "large"; }

EstimateConstants EstimateConstants::from_cost(const CostFunction& cost, double beta,
                                               std::optional<double> bar_delta) {
  check_beta(beta);
  EstimateConstants c;
  c.n = cost.dimension();
  c.p = cost.degree();
  c.beta = beta;
  c.m = cost.extremes().m;
  c.M = cost.extremes().M;
  c.bar_delta = bar_delta;
  const double n = c.n;
  const double p = c.p;
  const double ratio = c.M / c.m;
  c.C1 = std::pow(2.0, p + 1.0) * ratio / unit_ball_volume(c.n);
  c.C2 = std::pow(2.0, p + 2.0) * (std::pow(2.0, p - 1.0) + 1.0) * ratio;
  if (bar_delta) {
    if (!(*bar_delta > 0.0)) throw InputError("bar_delta must be > 0");
    c.C2 = std::max(c.C2, 1.0 / std::pow(*bar_delta, p - 1.0));
  }
  const double q = (n + 1.0) / (p - 1.0);
  c.K1 = (std::pow(q, -(n + 1.0) / (n + p)) + std::pow(q, (p - 1.0) / (n + p))) *
         std::pow(c.C1, (p - 1.0) / (n + p)) * std::pow(c.C2, (n + 1.0) / (n + p));
  c.K2 = c.C1 * (p + n) / (p - 1.0) * std::pow(0.5 * (1.0 - beta), -(n + 1.0));
  return c;
}

double h_curve(double r, double delta, const EstimateConstants& c) {
  return c.C1 * delta * std::pow(r, -(c.n + 1.0)) + c.C2 * std::pow(r, c.p - 1.0);
}

BoundResult linfty_bound(double delta, double radius, const EstimateConstants& c) {
  check_beta(c.beta);
  if (!(delta >= 0.0)) throw InputError("linfty_bound: Delta must be >= 0");
  if (!(radius > 0.0)) throw InputError("linfty_bound: R must be > 0");
  const double n = c.n;
  const double p = c.p;
  BoundResult out;
  out.r0 = std::pow((n + 1.0) * c.C1 * delta / ((p - 1.0) * c.C2), 1.0 / (n + p));
  out.delta0 = std::pow(0.5 * (1.0 - c.beta) * radius, n + p) * (p - 1.0) * c.C2 /
               ((n + 1.0) * c.C1);
  if (delta <= out.delta0) {
    out.branch = Branch::Small;
    out.bound = std::pow(c.K1, 1.0 / (p - 1.0)) * std::pow(delta, 1.0 / (n + p));
  } else {
    out.branch = Branch::Large;
    out.bound = std::pow(c.K2 * std::pow(radius, -(n + 1.0)) * delta, 1.0 / (p - 1.0));
  }
  return out;
}

IntegralEstimate lp_mass(const DiscreteMap& map, const CostFunction& cost, const Ball& ball,
                         std::size_t budget) {
  map.require_closure("lp_mass");
  check_ball(ball, cost.dimension());
  if (budget == 0) throw InputError("lp_mass: quadrature budget is zero");
  const double p = cost.degree();
  return ball_integral(ball, cost.dimension(), budget, [&](const Vector& x) {
    return std::pow((map.apply(x) - x).norm(), p);
  });
}

EstimateReport certify(const DiscreteMap& map, const CostFunction& cost, const Ball& ball,
                       const EstimateConstants& consts, const CertifyOptions& options) {
  map.require_closure("certify");
  check_ball(ball, cost.dimension());
  if (consts.n != cost.dimension() || consts.p != cost.degree()) {
    throw InputError("certify: constants were built for a different cost");
  }
  const IntegralEstimate mass = lp_mass(map, cost, ball, options.budget);
  const BoundResult b = linfty_bound(mass.value, ball.radius, consts);

  EstimateReport r;
  r.kind = "linfty";
  r.ball = ball;
  r.beta = consts.beta;
  r.delta = mass.value;
  r.delta0 = b.delta0;
  r.branch = b.branch;
  r.r0 = b.r0;
  r.bound = b.bound;
  r.samples = mass.samples;
  r.std_error = mass.std_error;
  r.quadrature_clean = mass.value == 0.0 ? mass.std_error == 0.0
                                         : mass.std_error < 0.01 * mass.value;
  r.constants_extrapolated = cost.dimension() <= 2;
  r.monotone_certified = options.monotone_certified;
  r.cert_tolerance = options.cert_tolerance;
  const Ball inner{ball.center, consts.beta * ball.radius, ball.seed + 1};
  r.empirical_sup = empirical_sup(map, inner, options.budget,
                                  [](const Vector& x, const Vector& tx) { return (tx - x).norm(); });
  r.passed = r.empirical_sup <= r.bound * (1.0 + options.cert_tolerance);
  return r;
}

std::vector<double> default_delta_grid(std::size_t points, double max_delta) {
  std::vector<double> grid(points);
  for (std::size_t k = 0; k < points; ++k) grid[k] = max_delta * (k + 1.0) / points;
  return grid;
}

ProbeResult probe_lower_bound(const CostFunction& cost, const Vector& u,
                              const std::vector<double>& delta_grid) {
  require_dimension(u, cost.dimension(), "probe_lower_bound: u");
  const double un = u.norm();
  if (un == 0.0) throw InputError("probe_lower_bound: u must be nonzero");
  ProbeResult out;
  out.threshold = 0.5 * cost.extremes().m;
  out.deltas = delta_grid;
  std::sort(out.deltas.begin(), out.deltas.end());
  const double up = std::pow(un, cost.degree());
  bool prefix_ok = true;
  for (double d : out.deltas) {
    if (!(d > 0.0)) throw InputError("probe_lower_bound: grid values must be > 0");
    // r omega = delta |u| u/|u| = delta u
    const double ratio = -g_function(cost, d * u, u) / (d * up);
    out.ratios.push_back(ratio);
    if (prefix_ok && ratio >= out.threshold) {
      out.delta0 = d;
    } else {
      prefix_ok = false;
    }
  }
  return out;
}

LipschitzDiagnostic lipschitz_diagnostic(const DiscreteMap& map, const CostFunction& cost,
                                         const Vector& x0, const std::vector<double>& radii,
                                         std::size_t budget) {
  map.require_closure("lipschitz_diagnostic");
  require_dimension(x0, cost.dimension(), "lipschitz_diagnostic: x0");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0)) throw InputError("lipschitz_diagnostic: radii must be > 0");
    if (i > 0 && !(radii[i] < radii[i - 1])) {
      throw InputError("lipschitz_diagnostic: radii must be descending");
    }
  }
  const double p = cost.degree();
  const int n = cost.dimension();
  LipschitzDiagnostic out;
  for (double radius : radii) {
    const Ball ball{x0, radius, 0};
    const IntegralEstimate mass = lp_mass(map, cost, ball, budget);
    const double avg = mass.value / (unit_ball_volume(n) * std::pow(radius, n));
    const Ball half{x0, 0.5 * radius, 1};
    const double sup = empirical_sup(map, half, budget, [](const Vector& x, const Vector& tx) {
      return (tx - x).norm();
    });
    out.rows.push_back({radius, avg / std::pow(radius, p), sup / radius});
  }
  if (out.rows.size() >= 2) {
    const double first = out.rows.front().scaled_average;
    const double last = out.rows.back().scaled_average;
    out.hypothesis_fails = last > first * (1.0 + 1e-6) + 1e-300;
  }
  return out;
}

EstimateReport lemma51_bound(const DiscreteMap& map, const Matrix& a, const Vector& b,
                             const Ball& ball, double beta, const CertifyOptions& options) {
  map.require_closure("lemma51_bound");
  check_beta(beta);
  const int n = map.dimension() > 0 ? map.dimension() : static_cast<int>(ball.center.size());
  check_ball(ball, n);
  if (a.rows() != n || a.cols() != n) throw DimensionError("lemma51_bound: A shape");
  require_dimension(b, n, "lemma51_bound: b");
  if (options.budget == 0) throw InputError("lemma51_bound: quadrature budget is zero");

  auto residual = [&](const Vector& x, const Vector& tx) { return (tx - a * x - b).norm(); };
  const double omega = unit_ball_volume(n);
  const IntegralEstimate l1 = ball_integral(
      ball, n, options.budget, [&](const Vector& x) { return residual(x, map.apply(x)); });

  const double norm_a = a.size() == 0 ? 0.0 : Eigen::JacobiSVD<Matrix>(a).singularValues()(0);
  const double mass = 2.0 / omega * l1.value;
  const double r_edge = 0.5 * (1.0 - beta) * ball.radius;
  auto f = [&](double r) { return mass / std::pow(r, n) + 4.0 * norm_a * r; };

  EstimateReport r;
  r.kind = "lemma51";
  r.ball = ball;
  r.beta = beta;
  r.delta = mass;
  r.samples = l1.samples;
  r.std_error = 2.0 / omega * l1.std_error;
  r.quadrature_clean = mass == 0.0 ? r.std_error == 0.0 : r.std_error < 0.01 * mass;
  r.monotone_certified = options.monotone_certified;
  r.cert_tolerance = options.cert_tolerance;
  if (mass == 0.0) {
    r.branch = Branch::Small;
    r.bound = 0.0;
  } else if (norm_a == 0.0) {
    r.branch = Branch::Large;
    r.r0 = r_edge;
    r.delta0 = 0.0;
    r.bound = f(r_edge);
  } else {
    r.r0 = std::pow(n * mass / (4.0 * norm_a), 1.0 / (n + 1.0));
    r.delta0 = 4.0 * norm_a * std::pow(r_edge, n + 1.0) / n;
    if (r.r0 < r_edge) {
      r.branch = Branch::Small;
      r.bound = f(r.r0);
    } else {
      r.branch = Branch::Large;
      r.bound = f(r_edge);
    }
  }
  const Ball inner{ball.center, beta * ball.radius, ball.seed + 1};
  r.empirical_sup = empirical_sup(map, inner, options.budget, residual);
  r.passed = r.empirical_sup <= r.bound * (1.0 + options.cert_tolerance);
  return r;
}

}  // namespace hmono
