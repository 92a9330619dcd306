#include "hmono/monotone.hpp"

#include <random>
#include <vector>

#include "hmono/parallel.hpp"

namespace hmono {

double h_defect(const CostFunction& cost, const Vector& x, const Vector& y, const Vector& tx,
                const Vector& ty) {
  const int n = cost.dimension();
  require_dimension(x, n, "h_defect: x");
  require_dimension(y, n, "h_defect: y");
  require_dimension(tx, n, "h_defect: Tx");
  require_dimension(ty, n, "h_defect: Ty");
  return cost.h(x - ty) + cost.h(y - tx) - cost.h(x - tx) - cost.h(y - ty);
}

double bilinear_defect(const CostFunction& cost, const Vector& x, const Vector& y,
                       const Vector& tx, const Vector& ty, const QuadratureSpec& quad) {
  const Matrix a = a_matrix(cost, x, y, tx, ty, quad).value;
  return (a * (x - y)).dot(tx - ty);
}

double classical_defect(const Matrix& a, const Vector& x, const Vector& y, const Vector& ux,
                        const Vector& uy) {
  const Eigen::Index n = x.size();
  if (a.rows() != n || a.cols() != n) throw DimensionError("classical_defect: A shape");
  require_dimension(y, static_cast<int>(n), "classical_defect: y");
  require_dimension(ux, static_cast<int>(n), "classical_defect: ux");
  require_dimension(uy, static_cast<int>(n), "classical_defect: uy");
  const Vector d = x - y;
  return (ux - uy).dot(d) + (a * d).dot(d);
}

std::string mode_name(const CheckMode& mode) {
  struct Visitor {
    std::string operator()(const HForm&) const { return "h"; }
    std::string operator()(const BilinearForm&) const { return "bilinear"; }
    std::string operator()(const Classical&) const { return "classical"; }
  };
  return std::visit(Visitor{}, mode);
}

MonotonicityReport check_map(const DiscreteMap& map, const CostFunction& cost,
                             const CheckMode& mode, const CheckOptions& options) {
  const std::size_t n_pts = map.size();
  if (n_pts < 2) throw InputError("check_map: map needs at least 2 points");
  if (map.dimension() != cost.dimension()) {
    throw DimensionError("check_map: map and cost dimensions differ");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n_pts <= options.all_pairs_limit) {
    pairs.reserve(n_pts * (n_pts - 1));
    for (std::size_t i = 0; i < n_pts; ++i) {
      for (std::size_t j = 0; j < n_pts; ++j) {
        if (i != j) pairs.emplace_back(i, j);
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n_pts - 1);
    pairs.reserve(options.sampled_pairs);
    while (pairs.size() < options.sampled_pairs) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i != j) pairs.emplace_back(i, j);
    }
  }

  std::vector<Vector> residual;  // u = Tx - A x in classical mode
  if (const auto* cl = std::get_if<Classical>(&mode)) {
    if (cl->a.rows() != cost.dimension() || cl->a.cols() != cost.dimension()) {
      throw DimensionError("check_map: classical matrix shape");
    }
    residual.reserve(n_pts);
    for (const auto& pr : map.pairs()) residual.push_back(pr.tx - cl->a * pr.x);
  }

  std::vector<double> defects(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    const MapPair& a = map[i];
    const MapPair& b = map[j];
    if (std::holds_alternative<HForm>(mode)) {
      defects[k] = h_defect(cost, a.x, b.x, a.tx, b.tx);
    } else if (const auto* bf = std::get_if<BilinearForm>(&mode)) {
      defects[k] = bilinear_defect(cost, a.x, b.x, a.tx, b.tx, bf->quad);
    } else {
      const auto& cl = std::get<Classical>(mode);
      defects[k] = classical_defect(cl.a, a.x, b.x, residual[i], residual[j]);
    }
  });

  MonotonicityReport report;
  report.mode = mode_name(mode);
  report.pairs_checked = pairs.size();
  report.tolerance = options.tolerance.value_or(
      std::holds_alternative<BilinearForm>(mode) ? 1e-6 : 1e-9);
  report.worst_defect = defects.front();
  report.worst_pair = pairs.front();
  for (std::size_t k = 1; k < pairs.size(); ++k) {
    if (defects[k] < report.worst_defect ||
        (defects[k] == report.worst_defect && pairs[k] < report.worst_pair)) {
      report.worst_defect = defects[k];
      report.worst_pair = pairs[k];
    }
  }
  report.passed = report.worst_defect >= -report.tolerance;
  return report;
}

double psd_probe(const DiscreteMap& map, const CostFunction& cost, const Vector& x,
                 double fd_step) {
  map.require_closure("psd_probe");
  require_dimension(x, cost.dimension(), "psd_probe: x");
  const Matrix jac = fd_jacobian(map.closure(), x, fd_step);
  const Matrix prod = cost.hessian(x - map.apply(x)) * jac;
  const Matrix sym = 0.5 * (prod + prod.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace hmono
