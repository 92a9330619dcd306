#include "hmono/ot_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hmono/parallel.hpp"

namespace hmono {

namespace {

void check_clouds(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost) {
  if (xs.size() != ys.size()) throw InputError("assignment: |X| != |Y|");
  if (xs.empty()) throw InputError("assignment: empty point clouds");
  for (const auto& x : xs) require_dimension(x, cost.dimension(), "assignment: source point");
  for (const auto& y : ys) require_dimension(y, cost.dimension(), "assignment: target point");
}

}  // namespace

Matrix cost_matrix(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost) {
  Matrix c(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(ys.size()));
  parallel_for(xs.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cost.h(xs[i] - ys[j]);
    }
  });
  if (!c.allFinite()) throw NumericError("assignment: non-finite cost matrix entry");
  return c;
}

double assignment_cost(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost,
                       const std::vector<int>& sigma) {
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) total += cost.h(xs[i] - ys[sigma[i]]);
  return total;
}

Assignment solve_exact(const PointCloud& xs, const PointCloud& ys, const CostFunction& cost) {
  check_clouds(xs, ys, cost);
  const Matrix c = cost_matrix(xs, ys, cost);
  const int n = static_cast<int>(xs.size());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // 1-based shortest augmenting path (Hungarian with potentials u, v).
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  Assignment out;
  out.sigma.assign(n, -1);
  for (int j = 1; j <= n; ++j) out.sigma[match[j] - 1] = j - 1;
  out.cost = assignment_cost(xs, ys, cost, out.sigma);
  return out;
}

Assignment solve_bruteforce(const PointCloud& xs, const PointCloud& ys,
                            const CostFunction& cost) {
  check_clouds(xs, ys, cost);
  if (xs.size() > kBruteforceLimit) {
    throw InputError("solve_bruteforce: N exceeds " + std::to_string(kBruteforceLimit));
  }
  const Matrix c = cost_matrix(xs, ys, cost);
  std::vector<int> perm(xs.size());
  std::iota(perm.begin(), perm.end(), 0);
  Assignment best{perm, assignment_cost(xs, ys, cost, perm)};
  while (std::next_permutation(perm.begin(), perm.end())) {
    // cheap screen with the matrix, exact comparison with the canonical sum
    double total = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += c(i, perm[i]);
    if (total > best.cost * (1.0 + 1e-12) + 1e-300) continue;
    const double exact = assignment_cost(xs, ys, cost, perm);
    if (exact < best.cost) best = {perm, exact};
  }
  return best;
}

Assignment rearrangement_1d(const PointCloud& xs, const PointCloud& ys,
                            const CostFunction& cost) {
  check_clouds(xs, ys, cost);
  if (cost.dimension() != 1) throw InputError("rearrangement_1d: requires n == 1");
  const std::size_t n = xs.size();
  std::vector<int> sx(n), sy(n);
  std::iota(sx.begin(), sx.end(), 0);
  std::iota(sy.begin(), sy.end(), 0);
  std::stable_sort(sx.begin(), sx.end(), [&](int a, int b) { return xs[a](0) < xs[b](0); });
  std::stable_sort(sy.begin(), sy.end(), [&](int a, int b) { return ys[a](0) < ys[b](0); });
  Assignment out;
  out.sigma.assign(n, -1);
  for (std::size_t k = 0; k < n; ++k) out.sigma[sx[k]] = sy[k];
  out.cost = assignment_cost(xs, ys, cost, out.sigma);
  return out;
}

DiscreteMap assignment_map(const PointCloud& xs, const PointCloud& ys, const Assignment& a,
                           std::string label) {
  if (a.sigma.size() != xs.size()) throw InputError("assignment_map: size mismatch");
  std::vector<MapPair> pairs;
  pairs.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) pairs.push_back({xs[i], ys[a.sigma[i]]});
  return DiscreteMap(std::move(label), std::move(pairs));
}

}  // namespace hmono
