#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "hmono/cost.hpp"
#include "hmono/discrete_map.hpp"

namespace hmono {

/// h(x - Ty) + h(y - Tx) - h(x - Tx) - h(y - Ty); the pair is h-monotone
/// iff this is >= 0.
double h_defect(const CostFunction& cost, const Vector& x, const Vector& y, const Vector& tx,
                const Vector& ty);

/// <A(x,y)(x - y), Tx - Ty>. Equals h_defect up to quadrature error.
double bilinear_defect(const CostFunction& cost, const Vector& x, const Vector& y,
                       const Vector& tx, const Vector& ty, const QuadratureSpec& quad = {});

/// (ux - uy).(x - y) + <A(x - y), x - y> for u = T - A x - b.
double classical_defect(const Matrix& a, const Vector& x, const Vector& y, const Vector& ux,
                        const Vector& uy);

struct HForm {};
struct BilinearForm {
  QuadratureSpec quad;
};
struct Classical {
  Matrix a;
};
using CheckMode = std::variant<HForm, BilinearForm, Classical>;

std::string mode_name(const CheckMode& mode);

struct CheckOptions {
  /// Defaults to 1e-9 for closed-form defects, 1e-6 when quadrature is used.
  std::optional<double> tolerance;
  std::size_t all_pairs_limit = 512;      ///< evaluate every ordered pair up to this N
  std::size_t sampled_pairs = 100000;     ///< random ordered pairs above the limit
  std::uint64_t seed = 0x5eed;
};

struct MonotonicityReport {
  std::string mode;
  std::size_t pairs_checked = 0;
  double worst_defect = 0.0;
  std::pair<std::size_t, std::size_t> worst_pair{0, 0};
  bool passed = false;
  double tolerance = 0.0;
};

/// Evaluates the chosen defect over ordered pairs (i != j). The worst pair is
/// the minimum defect, ties broken by the lexicographically smallest (i, j).
MonotonicityReport check_map(const DiscreteMap& map, const CostFunction& cost,
                             const CheckMode& mode, const CheckOptions& options = {});

/// Minimum eigenvalue of the symmetrised product D^2h(x - Tx) * dT/dx, with the
/// Jacobian taken by central differences of the map's closure.
double psd_probe(const DiscreteMap& map, const CostFunction& cost, const Vector& x,
                 double fd_step = 1e-5);

}  // namespace hmono
