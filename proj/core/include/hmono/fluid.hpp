#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmono/cost.hpp"
#include "hmono/density.hpp"
#include "hmono/discrete_map.hpp"
#include "hmono/interpolation.hpp"

namespace hmono {

/// Velocity, flux and density of a transport along T_t, as closures of (x, t).
struct FlowField {
  int dimension = 0;
  std::function<Vector(const Vector&, double)> velocity;
  std::function<Vector(const Vector&, double)> flux;
  std::function<double(const Vector&, double)> density;
};

/// v(x, t) = (T - Id)(T_t^{-1} x). Throws NumericError when T_t cannot be
/// inverted at x.
Vector velocity(const DiscreteMap& map, double t, const Vector& x,
                const InversionOptions& options = {});

/// Flow field from the closed-form transported density of rho0; the flux is
/// rho * v.
FlowField make_flow_field(const DiscreteMap& map, const Density& rho0,
                          const InversionOptions& options = {});

/// Flow field from explicit velocity and density closures.
FlowField make_flow_field(int dimension, std::function<Vector(const Vector&, double)> velocity,
                          std::function<double(const Vector&, double)> density);

struct FdSteps {
  double dx = 1e-3;
  double dt = 1e-3;
};

/// max |d_t rho + div j| over the cell centres of `grid` and the times in
/// `t_grid`, by central differences.
double continuity_residual(const FlowField& field, const Grid& grid,
                           const std::vector<double>& t_grid, const FdSteps& steps = {});

struct ActionEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// int_0^1 int_{B_beta} |j|^p / rho^{p-1} dx dt: Gauss-Legendre in t with
/// `t_nodes` nodes, quasi Monte Carlo in x.
ActionEstimate action_integral(const FlowField& field, double beta, int t_nodes,
                               std::size_t spatial_budget, double p, std::uint64_t seed = 0);

/// int_{B_radius} |Tz - z|^p rho0(z) dz. The integrand does not depend on t,
/// so this is also the time integral over [0, 1].
ActionEstimate displacement_energy(const DiscreteMap& map, const Density& rho0, double radius,
                                   std::size_t spatial_budget, double p,
                                   std::uint64_t seed = 0);

/// int_0^1 int_{T_t^{-1}(B_beta)} |Tz - z|^p rho0(z) dz dt, sampled over
/// B_enclosing with the indicator |T_t z| < beta. `enclosing` must contain
/// every T_t^{-1}(B_beta).
ActionEstimate pulled_back_action(const DiscreteMap& map, const Density& rho0, double beta,
                                  double enclosing, int t_nodes, std::size_t spatial_budget,
                                  double p, std::uint64_t seed = 0);

struct SandwichOptions {
  int t_nodes = 8;
  std::size_t spatial_budget = 20000;
  std::size_t regime_samples = 4096;
  std::uint64_t seed = 0;
  InversionOptions inversion;
};

struct SandwichResult {
  double lower = 0.0;
  double action = 0.0;
  double upper = 0.0;
  double std_error = 0.0;  ///< combined over the three estimates
  bool regime_met = false;
  bool passed = false;
  std::string message;
  /// L-infinity bound for T - Id on B_{beta''} from the h-monotone estimate,
  /// reported for information only.
  std::optional<double> linfty_estimate;
};

/// lower <= action <= upper with lower over B_{beta''} and upper over
/// B_{beta'}. The regime is checked directly: sup_{B_{beta''}} |T_t x| < beta
/// and T_t^{-1}(B_beta) inside B_{beta'} on the time nodes. When either
/// fails the result is "hypothesis not met" and passed stays false.
SandwichResult sandwich_check(const DiscreteMap& map, const CostFunction& cost,
                              const Density& rho0, double beta_inner, double beta,
                              double beta_outer, const SandwichOptions& options = {});

}  // namespace hmono
