#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmono/cost.hpp"
#include "hmono/density.hpp"
#include "hmono/discrete_map.hpp"

namespace hmono {

/// T_t x = t T x + (1 - t) x. Uses the closure, or the stored pair when x is
/// one of the map's source points.
Vector t_map(const DiscreteMap& map, double t, const Vector& x);

struct InversionOptions {
  int max_iterations = 50;
  double tolerance = 1e-10;  ///< target |T_t x - z|
  double fd_step = 1e-6;
};

/// Solves T_t x = z by damped Newton with a finite-difference Jacobian,
/// starting from x = z. Returns nullopt when it does not converge.
std::optional<Vector> invert_interpolant(const DiscreteMap& map, double t, const Vector& z,
                                         const InversionOptions& options = {});

struct InclusionViolation {
  double t = 0.0;
  Vector x;
};

struct InterpolationResult {
  std::vector<double> t_grid;
  double beta = 0.0;
  double beta_bar = 0.0;
  std::vector<InclusionViolation> violations;  ///< first `max_recorded` found
  std::size_t violation_count = 0;
  double energy = 0.0;  ///< int_{B_1} |Tx - x|^p
  std::size_t samples = 0;

  bool inclusion_holds() const { return violation_count == 0; }
};

/// Looks for x in B_1 with |x| >= beta_bar but |T_t x| < beta. With a closure
/// the ball is sampled (`budget` points); otherwise the stored pairs inside
/// B_1 are used and the energy is their Monte Carlo average times omega_n.
InterpolationResult inclusion_check(const DiscreteMap& map, const CostFunction& cost,
                                    double beta, double beta_bar,
                                    const std::vector<double>& t_grid,
                                    std::size_t budget = 20000, std::uint64_t seed = 0,
                                    std::size_t max_recorded = 64);

/// det((1-t)A + tB) - det(A)^{1-t} det(B)^t for positive definite A, B.
double det_logconcavity_residual(const Matrix& a, const Matrix& b, double t);

/// det(grad T_t)(x) - det(grad T(x))^t with grad T from central differences.
/// The Jacobian's symmetric part must be positive definite.
double det_interp_bound_check(const DiscreteMap& map, const Vector& x, double t,
                              double fd_step = 1e-5);

/// rho(t, z) = rho0(T_t^{-1} z) / det(grad T_t(T_t^{-1} z)). Throws
/// NumericError when the inversion fails.
double transported_density(const DiscreteMap& map, const Density& rho0, double t,
                           const Vector& z, const InversionOptions& options = {});

/// Closed-form density at cell centres; cells whose inversion fails are
/// listed in failed_cells and carry NaN.
DensitySnapshot density_closed_form(const DiscreteMap& map, const Density& rho0, double t,
                                    const Grid& grid, const InversionOptions& options = {});

/// Histogram of rho0 particles pushed through T_t. Particles come from a
/// shifted Halton sequence: inverse CDF per axis for product densities,
/// rejection against the envelope otherwise.
DensitySnapshot density_pushforward(const DiscreteMap& map, const Density& rho0, double t,
                                    const Grid& grid, std::size_t particles,
                                    std::uint64_t seed = 0);

struct HolderData {
  double alpha = 1.0;
  double seminorm = 0.0;  ///< [rho]_{alpha, 1} over B_1
};

enum class SupStatus { Pass, Fail, RegimeNotMet };

std::string to_string(SupStatus s);

struct SupCheckRow {
  double t = 0.0;
  double sup = 0.0;
  double bound = 0.0;
};

struct SupCheckOptions {
  double tolerance = 1e-9;               ///< relative slack on the bound (histograms need more)
  double normalization_tolerance = 1e-9; ///< |rho_i(0) - 1|
  std::size_t regime_samples = 4096;
};

struct SupCheckResult {
  SupStatus status = SupStatus::Pass;
  double margin = 0.0;  ///< min over snapshots of bound - sup
  std::vector<SupCheckRow> rows;
  std::string message;
};

/// sup_{B_beta} rho(t, .) <= (1 + [rho0])^{1-t} (1 + [rho1])^t per snapshot.
/// Reports RegimeNotMet, not Fail, when rho_i(0) != 1 or when
/// T_t^{-1}(B_beta) or T(T_t^{-1}(B_beta)) leaves B_1.
SupCheckResult density_sup_check(const DiscreteMap& map, const Density& rho0,
                                 const Density& rho1, const HolderData& holder0,
                                 const HolderData& holder1,
                                 const std::vector<DensitySnapshot>& snapshots, double beta,
                                 const SupCheckOptions& options = {});

}  // namespace hmono
