#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmono/cost.hpp"
#include "hmono/discrete_map.hpp"

namespace hmono {

struct Ball {
  Vector center;
  double radius = 1.0;
  std::uint64_t seed = 0;  ///< sampler seed
};

/// Constants of the two-branch L-infinity estimate for an h-monotone map.
///
///   C1 = 2^{p+1} (M/m) / omega_n
///   C2 = 2^{p+2} (2^{p-1} + 1) (M/m), raised to 1/bar_delta^{p-1} if larger
///   K1 = (q^{-(n+1)/(n+p)} + q^{(p-1)/(n+p)}) C1^{(p-1)/(n+p)} C2^{(n+1)/(n+p)},  q = (n+1)/(p-1)
///   K2 = C1 (p+n)/(p-1) ((1-beta)/2)^{-(n+1)}
struct EstimateConstants {
  int n = 0;
  double p = 2.0;
  double beta = 0.5;
  double m = 1.0;
  double M = 1.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double K1 = 0.0;
  double K2 = 0.0;
  std::optional<double> bar_delta;

  static EstimateConstants from_cost(const CostFunction& cost, double beta,
                                     std::optional<double> bar_delta = std::nullopt);
};

enum class Branch { Small, Large };

std::string to_string(Branch b);

struct BoundResult {
  Branch branch = Branch::Small;
  double r0 = 0.0;      ///< unconstrained minimiser of H
  double delta0 = 0.0;  ///< branch threshold ((1-beta)R/2)^{n+p} (p-1) C2 / ((n+1) C1)
  double bound = 0.0;   ///< bound on sup_{B_{beta R}} |u|
};

/// H(r) = C1 Delta r^{-(n+1)} + C2 r^{p-1}.
double h_curve(double r, double delta, const EstimateConstants& c);

/// Two-branch bound from Delta = int_{B_R} |u|^p. Small branch iff Delta <= Delta0.
BoundResult linfty_bound(double delta, double radius, const EstimateConstants& c);

struct IntegralEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// int_{B_R(x0)} |Tx - x|^p dx by quasi-Monte Carlo (shifted Halton, rejection
/// from the bounding cube, exact ball volume); composite Gauss-Legendre in 1-D.
IntegralEstimate lp_mass(const DiscreteMap& map, const CostFunction& cost, const Ball& ball,
                         std::size_t budget = 100000);

struct EstimateReport {
  std::string kind;  ///< "linfty" or "lemma51"
  Ball ball;
  double beta = 0.5;
  double delta = 0.0;
  double delta0 = 0.0;
  Branch branch = Branch::Small;
  double r0 = 0.0;
  double bound = 0.0;
  double empirical_sup = 0.0;
  bool passed = false;
  std::size_t samples = 0;
  double std_error = 0.0;
  bool quadrature_clean = true;   ///< std_error < 1% of delta
  bool constants_extrapolated = false;  ///< n <= 2 for the h-monotone estimate
  std::optional<bool> monotone_certified;  ///< as supplied by the caller
  double cert_tolerance = 1e-9;
};

struct CertifyOptions {
  std::size_t budget = 100000;
  double cert_tolerance = 1e-9;
  std::optional<bool> monotone_certified;
};

/// Delta from lp_mass, bound from linfty_bound, and the empirical supremum of
/// |Tx - x| over a dense sample of B_{beta R} plus the stored points there.
/// Does not re-verify h-monotonicity.
EstimateReport certify(const DiscreteMap& map, const CostFunction& cost, const Ball& ball,
                       const EstimateConstants& consts, const CertifyOptions& options = {});

struct ProbeResult {
  double delta0 = 0.0;     ///< largest grid delta with ratio >= m/2 on the whole prefix
  double threshold = 0.0;  ///< m/2
  std::vector<double> deltas;
  std::vector<double> ratios;  ///< -G(delta u, u) / (delta |u|^p)
};

std::vector<double> default_delta_grid(std::size_t points = 1000, double max_delta = 1.0);

ProbeResult probe_lower_bound(const CostFunction& cost, const Vector& u,
                              const std::vector<double>& delta_grid = default_delta_grid());

struct LipschitzRow {
  double radius = 0.0;
  double scaled_average = 0.0;  ///< R^{-p} avg_{B_R} |u|^p
  double quotient = 0.0;        ///< sup_{B_{R/2}} |u| / R
};

struct LipschitzDiagnostic {
  std::vector<LipschitzRow> rows;
  bool hypothesis_fails = false;  ///< scaled average grows as R shrinks
};

/// Radii must be strictly descending.
LipschitzDiagnostic lipschitz_diagnostic(const DiscreteMap& map, const CostFunction& cost,
                                         const Vector& x0, const std::vector<double>& radii,
                                         std::size_t budget = 20000);

/// Estimate for u = Tx - A x - b with T classically monotone:
///   F(r) = Delta'/r^n + 4 ||A|| r,  Delta' = (2/omega_n) int_{B_R} |u|,
/// minimised over (0, (1-beta)R/2]. ||A|| is the spectral norm.
EstimateReport lemma51_bound(const DiscreteMap& map, const Matrix& a, const Vector& b,
                             const Ball& ball, double beta, const CertifyOptions& options = {});

}  // namespace hmono
