#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hmono/types.hpp"

namespace hmono {

/// A nonnegative density on a box, with what a sampler needs to draw from it.
struct Density {
  std::string label;
  std::function<double(const Vector&)> value;
  Vector lower;           ///< support box
  Vector upper;
  double envelope = 1.0;  ///< upper bound of `value`, for rejection sampling
  double mass = 1.0;      ///< integral of `value`
  /// Per-axis inverse CDFs on [0,1] -> [lower_i, upper_i]. Set only for
  /// product densities; otherwise sampling falls back to rejection.
  std::vector<std::function<double(double)>> inverse_cdf;

  int dimension() const { return static_cast<int>(lower.size()); }
  double operator()(const Vector& x) const { return value(x); }

  /// 1 on [-half_width, half_width]^n, 0 outside.
  static Density uniform(int n, double half_width);

  /// prod_i (1 - a + a cos(pi x_i / L)) on [-L, L]^n, equal to 1 at the
  /// origin; 0 <= a < 1/2. Sampled by rejection.
  static Density cosine_bump(int n, double half_width, double amplitude);
};

/// Regular lattice of cells over a box.
struct Grid {
  Vector lower;
  Vector upper;
  std::vector<int> cells;  ///< per axis

  int dimension() const { return static_cast<int>(lower.size()); }
  std::size_t cell_count() const;
  double cell_volume() const;
  Vector cell_center(std::size_t index) const;
  /// Cell containing x, if x lies inside the box.
  std::optional<std::size_t> locate(const Vector& x) const;

  static Grid cube(int n, double half_width, int cells_per_axis);
};

enum class Provenance { PushforwardHistogram, ClosedForm };

std::string to_string(Provenance p);

struct DensitySnapshot {
  double t = 0.0;
  Grid grid;
  std::vector<double> values;         ///< one per cell
  Provenance provenance = Provenance::ClosedForm;
  std::vector<std::size_t> failed_cells;  ///< closed form: inversion did not converge
  std::size_t particles = 0;              ///< pushforward only
  double mass_outside = 0.0;              ///< pushforward: mass landing outside the grid
};

/// Hoelder seminorm sup |rho(x) - rho(y)| / |x - y|^alpha over B_1(0), estimated
/// from `pairs` low-discrepancy pairs.
double estimate_holder_seminorm(const Density& rho, double alpha, std::size_t pairs = 200000);

}  // namespace hmono
