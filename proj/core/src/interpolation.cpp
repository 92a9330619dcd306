#include "hmono/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

void check_t(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("t must lie in [0, 1]");
}

Matrix interpolant_jacobian(const DiscreteMap& map, double t, const Vector& x, double step) {
  const Matrix jac = fd_jacobian(map.closure(), x, step);
  return t * jac + (1.0 - t) * Matrix::Identity(x.size(), x.size());
}

}  // namespace

Vector t_map(const DiscreteMap& map, double t, const Vector& x) {
  check_t(t);
  if (map.has_closure()) return t * map.apply(x) + (1.0 - t) * x;
  for (const auto& pr : map.pairs()) {
    if (pr.x == x) return t * pr.tx + (1.0 - t) * x;
  }
  throw InputError("t_map: closure absent and x is not a stored point");
}

std::optional<Vector> invert_interpolant(const DiscreteMap& map, double t, const Vector& z,
                                         const InversionOptions& options) {
  map.require_closure("invert_interpolant");
  auto tt = [&](const Vector& x) { return Vector(t * map.apply(x) + (1.0 - t) * x); };
  Vector x = z;
  Vector res = tt(x) - z;
  double norm = res.norm();
  const double target = options.tolerance * std::max(1.0, z.norm());
  for (int it = 0; it < options.max_iterations; ++it) {
    if (norm <= target) return x;
    const Matrix jac = interpolant_jacobian(map, t, x, options.fd_step);
    const Vector step = jac.partialPivLu().solve(res);
    if (!step.allFinite()) return std::nullopt;
    double damp = 1.0;
    bool accepted = false;
    for (int k = 0; k < 30; ++k) {
      const Vector cand = x - damp * step;
      const Vector cres = tt(cand) - z;
      const double cnorm = cres.norm();
      if (cnorm < norm) {
        x = cand;
        res = cres;
        norm = cnorm;
        accepted = true;
        break;
      }
      damp *= 0.5;
    }
    if (!accepted) break;
  }
  if (norm <= target) return x;
  return std::nullopt;
}

InterpolationResult inclusion_check(const DiscreteMap& map, const CostFunction& cost,
                                    double beta, double beta_bar,
                                    const std::vector<double>& t_grid, std::size_t budget,
                                    std::uint64_t seed, std::size_t max_recorded) {
  if (!(beta > 0.0 && beta < beta_bar && beta_bar < 1.0)) {
    throw InputError("inclusion_check: need 0 < beta < beta_bar < 1");
  }
  if (map.dimension() != cost.dimension()) {
    throw DimensionError("inclusion_check: map and cost dimensions differ");
  }
  for (double t : t_grid) check_t(t);
  const int n = cost.dimension();
  const double p = cost.degree();

  std::vector<MapPair> sample;
  if (map.has_closure()) {
    for (auto& x : ball_samples(Vector::Zero(n), 1.0, budget, seed)) {
      Vector tx = map.apply(x);
      sample.push_back({std::move(x), std::move(tx)});
    }
  } else {
    for (const auto& pr : map.pairs()) {
      if (pr.x.norm() < 1.0) sample.push_back(pr);
    }
  }

  InterpolationResult out;
  out.t_grid = t_grid;
  out.beta = beta;
  out.beta_bar = beta_bar;
  out.samples = sample.size();
  if (!sample.empty()) {
    const double mean = ordered_sum(sample.size(), [&](std::size_t i) {
                          return std::pow((sample[i].tx - sample[i].x).norm(), p);
                        }) /
                        static_cast<double>(sample.size());
    out.energy = unit_ball_volume(n) * mean;
  }
  for (double t : t_grid) {
    for (const auto& pr : sample) {
      if (pr.x.norm() < beta_bar) continue;
      if ((t * pr.tx + (1.0 - t) * pr.x).norm() < beta) {
        ++out.violation_count;
        if (out.violations.size() < max_recorded) out.violations.push_back({t, pr.x});
      }
    }
  }
  return out;
}

double det_logconcavity_residual(const Matrix& a, const Matrix& b, double t) {
  check_t(t);
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw DimensionError("det_logconcavity_residual: shape mismatch");
  }
  auto min_eig = [](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  };
  if (!(min_eig(a) > 0.0) || !(min_eig(b) > 0.0)) {
    throw InputError("det_logconcavity_residual: matrices must be positive definite");
  }
  const double lhs = ((1.0 - t) * a + t * b).determinant();
  return lhs - std::pow(a.determinant(), 1.0 - t) * std::pow(b.determinant(), t);
}

double det_interp_bound_check(const DiscreteMap& map, const Vector& x, double t,
                              double fd_step) {
  map.require_closure("det_interp_bound_check");
  check_t(t);
  const Matrix jac = fd_jacobian(map.closure(), x, fd_step);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (jac + jac.transpose()),
                                           Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 0.0)) {
    throw InputError("det_interp_bound_check: Jacobian is not positive definite at x");
  }
  const Matrix jt = t * jac + (1.0 - t) * Matrix::Identity(x.size(), x.size());
  return jt.determinant() - std::pow(jac.determinant(), t);
}

double transported_density(const DiscreteMap& map, const Density& rho0, double t,
                           const Vector& z, const InversionOptions& options) {
  const auto x = invert_interpolant(map, t, z, options);
  if (!x) throw NumericError("transported_density: inversion of T_t did not converge");
  const double det = interpolant_jacobian(map, t, *x, options.fd_step).determinant();
  if (!(det > 0.0)) throw NumericError("transported_density: det grad T_t <= 0");
  return rho0(*x) / det;
}

DensitySnapshot density_closed_form(const DiscreteMap& map, const Density& rho0, double t,
                                    const Grid& grid, const InversionOptions& options) {
  map.require_closure("density_closed_form");
  check_t(t);
  DensitySnapshot snap;
  snap.t = t;
  snap.grid = grid;
  snap.provenance = Provenance::ClosedForm;
  snap.values.assign(grid.cell_count(), 0.0);
  std::vector<char> failed(grid.cell_count(), 0);
  parallel_for(grid.cell_count(), [&](std::size_t c) {
    try {
      snap.values[c] = transported_density(map, rho0, t, grid.cell_center(c), options);
    } catch (const NumericError&) {
      snap.values[c] = std::numeric_limits<double>::quiet_NaN();
      failed[c] = 1;
    }
  });
  for (std::size_t c = 0; c < failed.size(); ++c) {
    if (failed[c]) snap.failed_cells.push_back(c);
  }
  return snap;
}

DensitySnapshot density_pushforward(const DiscreteMap& map, const Density& rho0, double t,
                                    const Grid& grid, std::size_t particles,
                                    std::uint64_t seed) {
  map.require_closure("density_pushforward");
  check_t(t);
  if (particles == 0) throw InputError("density_pushforward: particle budget is zero");
  const int n = rho0.dimension();
  if (grid.dimension() != n) throw DimensionError("density_pushforward: grid dimension");
  const bool product = static_cast<int>(rho0.inverse_cdf.size()) == n;
  const Halton seq(product ? n : n + 1, seed);

  // Draw source particles in index order so the set is independent of threading.
  std::vector<Vector> sources;
  sources.reserve(particles);
  if (product) {
    sources.resize(particles);
    parallel_for(particles, [&](std::size_t i) {
      const Vector u = seq.point(i);
      Vector x(n);
      for (int d = 0; d < n; ++d) x(d) = rho0.inverse_cdf[d](u(d));
      sources[i] = std::move(x);
    });
  } else {
    const Vector span = rho0.upper - rho0.lower;
    std::uint64_t next = 0;
    const std::size_t batch = 1 << 16;
    while (sources.size() < particles) {
      std::vector<Vector> cand(batch);
      std::vector<char> keep(batch, 0);
      parallel_for(batch, [&](std::size_t k) {
        const Vector u = seq.point(next + k);
        Vector x = rho0.lower + u.head(n).cwiseProduct(span);
        keep[k] = u(n) * rho0.envelope <= rho0(x) ? 1 : 0;
        cand[k] = std::move(x);
      });
      next += batch;
      for (std::size_t k = 0; k < batch && sources.size() < particles; ++k) {
        if (keep[k]) sources.push_back(std::move(cand[k]));
      }
    }
  }

  std::vector<long long> cell(particles);
  parallel_for(particles, [&](std::size_t i) {
    const Vector z = t * map.apply(sources[i]) + (1.0 - t) * sources[i];
    const auto c = grid.locate(z);
    cell[i] = c ? static_cast<long long>(*c) : -1;
  });

  DensitySnapshot snap;
  snap.t = t;
  snap.grid = grid;
  snap.provenance = Provenance::PushforwardHistogram;
  snap.particles = particles;
  std::vector<std::size_t> counts(grid.cell_count(), 0);
  std::size_t outside = 0;
  for (long long c : cell) {
    if (c < 0) {
      ++outside;
    } else {
      ++counts[static_cast<std::size_t>(c)];
    }
  }
  const double weight = rho0.mass / static_cast<double>(particles);
  const double vol = grid.cell_volume();
  snap.values.resize(counts.size());
  for (std::size_t c = 0; c < counts.size(); ++c) snap.values[c] = counts[c] * weight / vol;
  snap.mass_outside = outside * weight;
  return snap;
}

std::string to_string(SupStatus s) {
  switch (s) {
    case SupStatus::Pass:
      return "pass";
    case SupStatus::Fail:
      return "fail";
    case SupStatus::RegimeNotMet:
      return "hypothesis regime not met";
  }
  return "unknown";
}

SupCheckResult density_sup_check(const DiscreteMap& map, const Density& rho0,
                                 const Density& rho1, const HolderData& holder0,
                                 const HolderData& holder1,
                                 const std::vector<DensitySnapshot>& snapshots, double beta,
                                 const SupCheckOptions& options) {
  map.require_closure("density_sup_check");
  if (!(beta > 0.0 && beta < 1.0)) throw InputError("density_sup_check: beta in (0,1)");
  const int n = map.dimension();
  SupCheckResult out;
  const Vector origin = Vector::Zero(n);
  if (std::abs(rho0(origin) - 1.0) > options.normalization_tolerance ||
      std::abs(rho1(origin) - 1.0) > options.normalization_tolerance) {
    out.status = SupStatus::RegimeNotMet;
    out.message = "densities are not normalised to 1 at the origin";
    return out;
  }
  const auto probes = ball_samples(origin, beta, options.regime_samples, 5);
  for (const auto& snap : snapshots) {
    for (const auto& z : probes) {
      const auto x = invert_interpolant(map, snap.t, z);
      if (!x || x->norm() >= 1.0 || map.apply(*x).norm() >= 1.0) {
        out.status = SupStatus::RegimeNotMet;
        out.message = "T_t^{-1}(B_beta) or its image under T leaves B_1 at t=" +
                      std::to_string(snap.t);
        return out;
      }
    }
  }

  out.status = SupStatus::Pass;
  out.margin = std::numeric_limits<double>::infinity();
  for (const auto& snap : snapshots) {
    double sup = 0.0;
    for (std::size_t c = 0; c < snap.values.size(); ++c) {
      if (snap.grid.cell_center(c).norm() < beta && std::isfinite(snap.values[c])) {
        sup = std::max(sup, snap.values[c]);
      }
    }
    const double bound = std::pow(1.0 + holder0.seminorm, 1.0 - snap.t) *
                         std::pow(1.0 + holder1.seminorm, snap.t);
    out.rows.push_back({snap.t, sup, bound});
    out.margin = std::min(out.margin, bound - sup);
    if (sup > bound * (1.0 + options.tolerance)) out.status = SupStatus::Fail;
  }
  return out;
}

}  // namespace hmono
