#include "hmono/fluid.hpp"

#include <algorithm>
#include <cmath>

#include "hmono/estimates.hpp"
#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

// Volume-scaled mean and standard error of per-sample values over a ball.
ActionEstimate ball_mean(const std::vector<double>& values, int n, double radius) {
  ActionEstimate out;
  out.samples = values.size();
  if (values.empty()) return out;
  const double count = static_cast<double>(values.size());
  const double volume = unit_ball_volume(n) * std::pow(radius, n);
  const double mean = pairwise_sum(values) / count;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = values.size() > 1 ? pairwise_sum(sq) / (count - 1.0) : 0.0;
  out.value = volume * mean;
  out.std_error = volume * std::sqrt(var / count);
  return out;
}

void require_radius(double r, const char* what) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError(std::string(what) + ": radius must be positive");
}

}  // namespace

Vector velocity(const DiscreteMap& map, double t, const Vector& x,
                const InversionOptions& options) {
  const auto pre = invert_interpolant(map, t, x, options);
  if (!pre) throw NumericError("velocity: inversion of T_t did not converge");
  return map.apply(*pre) - *pre;
}

FlowField make_flow_field(const DiscreteMap& map, const Density& rho0,
                          const InversionOptions& options) {
  map.require_closure("make_flow_field");
  if (rho0.dimension() != map.dimension()) {
    throw DimensionError("make_flow_field: density and map dimensions differ");
  }
  auto v = [map, options](const Vector& x, double t) { return velocity(map, t, x, options); };
  auto rho = [map, rho0, options](const Vector& x, double t) {
    return transported_density(map, rho0, t, x, options);
  };
  return make_flow_field(map.dimension(), v, rho);
}

FlowField make_flow_field(int dimension, std::function<Vector(const Vector&, double)> velocity,
                          std::function<double(const Vector&, double)> density) {
  if (dimension < 1) throw DimensionError("make_flow_field: dimension must be >= 1");
  FlowField f;
  f.dimension = dimension;
  f.velocity = velocity;
  f.density = density;
  f.flux = [velocity, density](const Vector& x, double t) {
    return Vector(density(x, t) * velocity(x, t));
  };
  return f;
}

double continuity_residual(const FlowField& field, const Grid& grid,
                           const std::vector<double>& t_grid, const FdSteps& steps) {
  if (grid.dimension() != field.dimension) {
    throw DimensionError("continuity_residual: grid dimension");
  }
  if (!(steps.dx > 0.0 && steps.dt > 0.0)) throw InputError("continuity_residual: steps");
  const int n = field.dimension;
  const std::size_t cells = grid.cell_count();
  std::vector<double> worst(cells * t_grid.size(), 0.0);
  parallel_for(worst.size(), [&](std::size_t k) {
    const double t = t_grid[k / cells];
    const Vector x = grid.cell_center(k % cells);
    double r = (field.density(x, t + steps.dt) - field.density(x, t - steps.dt)) /
               (2.0 * steps.dt);
    for (int d = 0; d < n; ++d) {
      Vector xp = x, xm = x;
      xp(d) += steps.dx;
      xm(d) -= steps.dx;
      r += (field.flux(xp, t)(d) - field.flux(xm, t)(d)) / (2.0 * steps.dx);
    }
    worst[k] = std::abs(r);
  });
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

ActionEstimate action_integral(const FlowField& field, double beta, int t_nodes,
                               std::size_t spatial_budget, double p, std::uint64_t seed) {
  require_radius(beta, "action_integral");
  if (t_nodes < 1 || spatial_budget == 0) throw InputError("action_integral: empty budget");
  const int n = field.dimension;
  const GaussRule rule = gauss_legendre(t_nodes);
  const auto xs = ball_samples(Vector::Zero(n), beta, spatial_budget, seed);
  std::vector<double> g(xs.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      const double rho = field.density(xs[i], t);
      if (!(rho > 0.0)) throw NumericError("action_integral: density must be positive on B_beta");
      const double j = field.flux(xs[i], t).norm();
      acc += rule.weights[k] * std::pow(j, p) / std::pow(rho, p - 1.0);
    }
    g[i] = acc;
  });
  return ball_mean(g, n, beta);
}

ActionEstimate displacement_energy(const DiscreteMap& map, const Density& rho0, double radius,
                                   std::size_t spatial_budget, double p, std::uint64_t seed) {
  map.require_closure("displacement_energy");
  require_radius(radius, "displacement_energy");
  const int n = map.dimension();
  const auto xs = ball_samples(Vector::Zero(n), radius, spatial_budget, seed);
  std::vector<double> g(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    g[i] = std::pow((map.apply(xs[i]) - xs[i]).norm(), p) * rho0(xs[i]);
  });
  return ball_mean(g, n, radius);
}

ActionEstimate pulled_back_action(const DiscreteMap& map, const Density& rho0, double beta,
                                  double enclosing, int t_nodes, std::size_t spatial_budget,
                                  double p, std::uint64_t seed) {
  map.require_closure("pulled_back_action");
  require_radius(beta, "pulled_back_action");
  require_radius(enclosing, "pulled_back_action");
  const int n = map.dimension();
  const GaussRule rule = gauss_legendre(t_nodes);
  const auto xs = ball_samples(Vector::Zero(n), enclosing, spatial_budget, seed);
  std::vector<double> g(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) {
    const Vector tz = map.apply(xs[i]);
    const double w = std::pow((tz - xs[i]).norm(), p) * rho0(xs[i]);
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double t = rule.nodes[k];
      if ((t * tz + (1.0 - t) * xs[i]).norm() < beta) acc += rule.weights[k] * w;
    }
    g[i] = acc;
  });
  return ball_mean(g, n, enclosing);
}

SandwichResult sandwich_check(const DiscreteMap& map, const CostFunction& cost,
                              const Density& rho0, double beta_inner, double beta,
                              double beta_outer, const SandwichOptions& options) {
  map.require_closure("sandwich_check");
  if (!(beta_inner > 0.0 && beta_inner < beta && beta < beta_outer && beta_outer < 1.0)) {
    throw InputError("sandwich_check: need 0 < beta'' < beta < beta' < 1");
  }
  if (map.dimension() != cost.dimension() || rho0.dimension() != cost.dimension()) {
    throw DimensionError("sandwich_check: map, cost and density dimensions differ");
  }
  const int n = cost.dimension();
  const double p = cost.degree();
  SandwichResult out;

  {
    const double delta = lp_mass(map, cost, Ball{Vector::Zero(n), 1.0, options.seed}).value;
    const auto c = EstimateConstants::from_cost(cost, beta_inner);
    out.linfty_estimate = linfty_bound(delta, 1.0, c).bound;
  }

  // |T_t x| <= max(|x|, |Tx|), so the forward condition only needs t = 1.
  auto probes = [&](double radius) {
    auto pts = ball_samples(Vector::Zero(n), radius, options.regime_samples, options.seed + 7);
    for (const auto& d : sphere_directions(n, std::max<std::size_t>(64, options.regime_samples / 16))) {
      pts.push_back(radius * d);
    }
    return pts;
  };
  for (const auto& x : probes(beta_inner)) {
    if (map.apply(x).norm() >= beta) {
      out.message = "hypothesis not met: sup over B_beta'' of |T x| reaches beta";
      return out;
    }
  }
  const GaussRule rule = gauss_legendre(options.t_nodes);
  std::vector<double> times = rule.nodes;
  times.push_back(1.0);
  const auto zs = probes(beta);
  for (double t : times) {
    for (const auto& z : zs) {
      const auto x = invert_interpolant(map, t, z, options.inversion);
      if (!x || x->norm() >= beta_outer) {
        out.message = "hypothesis not met: T_t^{-1}(B_beta) leaves B_beta' at t=" +
                      std::to_string(t);
        return out;
      }
    }
  }
  out.regime_met = true;

  const auto lo = displacement_energy(map, rho0, beta_inner, options.spatial_budget, p,
                                      options.seed);
  const auto hi = displacement_energy(map, rho0, beta_outer, options.spatial_budget, p,
                                      options.seed);
  const auto act = action_integral(make_flow_field(map, rho0, options.inversion), beta,
                                   options.t_nodes, options.spatial_budget, p, options.seed);
  out.lower = lo.value;
  out.upper = hi.value;
  out.action = act.value;
  out.std_error = std::sqrt(lo.std_error * lo.std_error + hi.std_error * hi.std_error +
                            act.std_error * act.std_error);
  const double slack = 3.0 * out.std_error + 1e-12 * std::max(1.0, std::abs(out.upper));
  out.passed = out.lower <= out.action + slack && out.action <= out.upper + slack;
  out.message = out.passed ? "lower <= action <= upper" : "sandwich violated";
  return out;
}

}  // namespace hmono
