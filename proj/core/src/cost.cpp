#include "hmono/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

class IsotropicPower final : public CostModel {
 public:
  IsotropicPower(int n, double p) : n_(n), p_(p) {}

  double value(const Vector& z) const override {
    if (p_ == 2.0) return z.squaredNorm();
    return std::pow(z.norm(), p_);
  }

  Vector gradient(const Vector& z) const override {
    const double r = z.norm();
    if (r == 0.0) return Vector::Zero(z.size());
    if (p_ == 2.0) return 2.0 * z;
    return p_ * std::pow(r, p_ - 2.0) * z;
  }

  Matrix hessian(const Vector& z) const override {
    const Eigen::Index n = z.size();
    if (p_ == 2.0) return 2.0 * Matrix::Identity(n, n);
    const double r = z.norm();
    if (r == 0.0) return Matrix::Zero(n, n);
    const Vector e = z / r;
    return p_ * std::pow(r, p_ - 2.0) *
           (Matrix::Identity(n, n) + (p_ - 2.0) * e * e.transpose());
  }

  double laplacian(const Vector& z) const override {
    const double n = static_cast<double>(z.size());
    if (p_ == 2.0) return 2.0 * n;
    const double r = z.norm();
    if (r == 0.0) return 0.0;
    return p_ * std::pow(r, p_ - 2.0) * (n + p_ - 2.0);
  }

  std::optional<SphereExtremes> analytic_extremes() const override {
    // D^2|z|^p on the sphere has eigenvalue p (tangential, n-1 times) and
    // p(p-1) (radial). In one dimension only the radial one exists.
    SphereExtremes e;
    e.m = 1.0;
    e.M = 1.0;
    e.grad_max = p_;
    e.lambda = (n_ == 1) ? p_ * (p_ - 1.0) : p_;
    e.Lambda = p_ * (p_ - 1.0);
    return e;
  }

 private:
  int n_;
  double p_;
};

class WeightedPower final : public CostModel {
 public:
  WeightedPower(std::vector<double> w, double p)
      : w_(Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()))), p_(p) {}

  double value(const Vector& z) const override {
    const double q = quad(z);
    if (p_ == 2.0) return q;
    return std::pow(q, 0.5 * p_);
  }

  Vector gradient(const Vector& z) const override {
    const double q = quad(z);
    const Vector wz = w_.cwiseProduct(z);
    if (q == 0.0) return Vector::Zero(z.size());
    if (p_ == 2.0) return 2.0 * wz;
    return p_ * std::pow(q, 0.5 * p_ - 1.0) * wz;
  }

  Matrix hessian(const Vector& z) const override {
    const Matrix w = w_.asDiagonal();
    if (p_ == 2.0) return 2.0 * w;
    const double q = quad(z);
    if (q == 0.0) return Matrix::Zero(z.size(), z.size());
    const Vector wz = w_.cwiseProduct(z);
    return p_ * std::pow(q, 0.5 * p_ - 1.0) * w +
           p_ * (p_ - 2.0) * std::pow(q, 0.5 * p_ - 2.0) * wz * wz.transpose();
  }

 private:
  double quad(const Vector& z) const { return z.cwiseProduct(z).dot(w_); }

  Vector w_;
  double p_;
};

void check_degree(double p) {
  if (!std::isfinite(p) || p < 2.0) {
    throw InputError("cost degree p must be a finite real >= 2, got " + std::to_string(p));
  }
}

}  // namespace

std::string to_string(CostFamily family) {
  switch (family) {
    case CostFamily::Isotropic:
      return "isotropic";
    case CostFamily::Weighted:
      return "weighted";
    case CostFamily::Custom:
      return "custom";
  }
  return "unknown";
}

CostFunction::CostFunction(int n, double p, CostFamily family, std::vector<double> weights,
                           std::shared_ptr<const CostModel> model)
    : n_(n), p_(p), family_(family), weights_(std::move(weights)), model_(std::move(model)) {
  extremes_ = sphere_extremes(*this);
}

CostFunction CostFunction::isotropic(int n, double p) {
  if (n < 1) throw InputError("cost dimension must be >= 1");
  check_degree(p);
  return CostFunction(n, p, CostFamily::Isotropic, {}, std::make_shared<IsotropicPower>(n, p));
}

CostFunction CostFunction::weighted(std::vector<double> weights, double p) {
  if (weights.empty()) throw InputError("weighted cost needs at least one weight");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw InputError("cost weights must be finite and > 0");
  }
  check_degree(p);
  const int n = static_cast<int>(weights.size());
  auto model = std::make_shared<WeightedPower>(weights, p);
  return CostFunction(n, p, CostFamily::Weighted, std::move(weights), std::move(model));
}

CostFunction CostFunction::custom(int n, double p, std::shared_ptr<const CostModel> model) {
  if (n < 1) throw InputError("cost dimension must be >= 1");
  if (!model) throw InputError("custom cost needs a model");
  check_degree(p);
  return CostFunction(n, p, CostFamily::Custom, {}, std::move(model));
}

double CostFunction::h(const Vector& z) const {
  require_dimension(z, n_, "h");
  return model_->value(z);
}

Vector CostFunction::gradient(const Vector& z) const {
  require_dimension(z, n_, "grad h");
  return model_->gradient(z);
}

Matrix CostFunction::hessian(const Vector& z) const {
  require_dimension(z, n_, "hess h");
  return model_->hessian(z);
}

double CostFunction::laplacian(const Vector& z) const {
  require_dimension(z, n_, "laplacian h");
  return model_->laplacian(z);
}

namespace {

using SphereObjective = std::function<double(const Vector&)>;

std::size_t grid_resolution(int n) {
  if (n == 3) return 4096;
  if (n == 2) return 2048;
  // keep the tensor grid near 2e4 points
  const double r = std::pow(2.0e4, 1.0 / (n - 1));
  return std::max<std::size_t>(4, static_cast<std::size_t>(r));
}

// Pattern search on the sphere; `sign` = +1 minimises, -1 maximises.
double refine_on_sphere(const SphereObjective& f, Vector x, double step, double tol,
                        double sign) {
  const Eigen::Index n = x.size();
  double best = sign * f(x);
  for (int iter = 0; iter < 100000 && step >= tol; ++iter) {
    bool improved = false;
    for (Eigen::Index i = 0; i < n && !improved; ++i) {
      Vector d = -x(i) * x;
      d(i) += 1.0;
      const double dn = d.norm();
      if (dn < 1e-3) continue;
      d /= dn;
      for (double dir : {1.0, -1.0}) {
        Vector cand = (x + dir * step * d).normalized();
        const double v = sign * f(cand);
        if (v < best) {
          best = v;
          x = std::move(cand);
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return sign * best;
}

struct Extremum {
  double min;
  double max;
};

Extremum search_extremum(const SphereObjective& f, const std::vector<Vector>& grid,
                         double step, double tol) {
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = f(grid[i]); });
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  Extremum out{values[order.front()], values[order.back()]};
  if (grid.front().size() == 1) return out;
  const std::size_t k = std::min<std::size_t>(6, order.size());
  for (std::size_t c = 0; c < k; ++c) {
    out.min = std::min(out.min, refine_on_sphere(f, grid[order[c]], step, tol, 1.0));
    out.max = std::max(out.max,
                       refine_on_sphere(f, grid[order[order.size() - 1 - c]], step, tol, -1.0));
  }
  return out;
}

}  // namespace

SphereExtremes sphere_extremes_numeric(const CostFunction& cost, double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("sphere_extremes: tolerance must be > 0");
  const int n = cost.dimension();
  const std::size_t res = grid_resolution(n);
  const std::vector<Vector> grid = sphere_grid(n, res);
  const double step =
      (n == 3) ? std::sqrt(4.0 * std::acos(-1.0) / res) : 2.0 * std::acos(-1.0) / res;

  auto eig = [&](const Vector& z) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cost.hessian(z), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  };
  const Extremum hv = search_extremum([&](const Vector& z) { return cost.h(z); }, grid, step,
                                      tolerance);
  const Extremum gv = search_extremum(
      [&](const Vector& z) { return cost.gradient(z).norm(); }, grid, step, tolerance);
  const Extremum lo = search_extremum([&](const Vector& z) { return eig(z)(0); }, grid, step,
                                      tolerance);
  const Extremum hi = search_extremum(
      [&](const Vector& z) { return eig(z)(z.size() - 1); }, grid, step, tolerance);

  SphereExtremes e;
  e.m = hv.min;
  e.M = hv.max;
  e.grad_max = gv.max;
  e.Lambda = hi.max;
  e.lambda = lo.min > 1e-12 * std::max(1.0, e.Lambda) ? lo.min : 0.0;
  return e;
}

SphereExtremes sphere_extremes(const CostFunction& cost, double tolerance) {
  if (!(tolerance > 0.0)) throw InputError("sphere_extremes: tolerance must be > 0");
  if (auto exact = cost.model().analytic_extremes()) return *exact;
  return sphere_extremes_numeric(cost, tolerance);
}

double g_function(const CostFunction& cost, const Vector& a, const Vector& b) {
  require_dimension(a, cost.dimension(), "G: a");
  require_dimension(b, cost.dimension(), "G: b");
  return cost.h(a - b) - cost.h(a) - cost.h(b);
}


namespace {

struct Segment {
  Vector base;    // y - Ty
  Vector along_s; // Ty - Tx
  Vector along_t; // x - y
};

Segment make_segment(const CostFunction& cost, const Vector& x, const Vector& y,
                     const Vector& tx, const Vector& ty) {
  const int n = cost.dimension();
  require_dimension(x, n, "A(x,y): x");
  require_dimension(y, n, "A(x,y): y");
  require_dimension(tx, n, "A(x,y): Tx");
  require_dimension(ty, n, "A(x,y): Ty");
  return {y - ty, ty - tx, x - y};
}

// Point of [0,1]^2 where |base + s along_s + t along_t| is smallest.
std::pair<double, double> nearest_to_origin(const Segment& seg) {
  auto value = [&](double s, double t) {
    return (seg.base + s * seg.along_s + t * seg.along_t).squaredNorm();
  };
  auto clamp01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
  // minimiser along one free variable with the other fixed
  auto line = [&](const Vector& fixed, const Vector& dir) {
    const double dd = dir.squaredNorm();
    return dd > 0.0 ? clamp01(-fixed.dot(dir) / dd) : 0.0;
  };
  std::vector<std::pair<double, double>> cand;
  Eigen::Matrix2d gram;
  gram << seg.along_s.squaredNorm(), seg.along_s.dot(seg.along_t),
      seg.along_s.dot(seg.along_t), seg.along_t.squaredNorm();
  const Eigen::Vector2d rhs(-seg.base.dot(seg.along_s), -seg.base.dot(seg.along_t));
  if (std::abs(gram.determinant()) > 1e-14 * (1.0 + gram.squaredNorm())) {
    const Eigen::Vector2d st = gram.inverse() * rhs;
    if (st(0) >= 0.0 && st(0) <= 1.0 && st(1) >= 0.0 && st(1) <= 1.0) cand.emplace_back(st(0), st(1));
  }
  for (double s : {0.0, 1.0}) {
    cand.emplace_back(s, line(Vector(seg.base + s * seg.along_s), seg.along_t));
  }
  for (double t : {0.0, 1.0}) {
    cand.emplace_back(line(Vector(seg.base + t * seg.along_t), seg.along_s), t);
  }
  auto best = cand.front();
  for (const auto& c : cand) {
    if (value(c.first, c.second) < value(best.first, best.second)) best = c;
  }
  return best;
}

constexpr double kGradeRatio = 0.15;
constexpr int kMaxLayers = 14;

// Geometric layers needed to resolve a singularity at relative distance `scale`.
int layers_for(double scale) {
  if (!(scale < 1.0)) return 0;
  if (!(scale > 0.0)) return kMaxLayers;
  return std::min(kMaxLayers, static_cast<int>(std::ceil(std::log(scale) / std::log(kGradeRatio))));
}

// Gauss rule on [0,1]. With layers > 0 it is split at c and each side is
// graded geometrically towards c.
GaussRule graded_rule(const GaussRule& base, double c, int layers) {
  if (layers == 0) return base;
  GaussRule out;
  auto panel = [&](double a, double b) {
    const double h = b - a;
    if (!(h > 0.0)) return;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      out.nodes.push_back(a + h * base.nodes[i]);
      out.weights.push_back(h * base.weights[i]);
    }
  };
  for (double side : {-c, 1.0 - c}) {
    if (side == 0.0) continue;
    double outer = 1.0;
    for (int k = 0; k < layers; ++k) {
      const double inner = outer * kGradeRatio;
      const double a = c + inner * side, b = c + outer * side;
      panel(std::min(a, b), std::max(a, b));
      outer = inner;
    }
    const double b = c + outer * side;
    panel(std::min(c, b), std::max(c, b));
  }
  return out;
}

// Point of [0,1] nearest the origin on the line a + v d, and its distance
// relative to |d| (how far the complex singularity of |a + v d| sits from
// the real axis, in units of the interval).
std::pair<double, double> line_singularity(const Vector& a, const Vector& d) {
  const double dd = d.squaredNorm();
  if (!(dd > 0.0)) return {0.0, 1.0};
  const double v = std::clamp(-a.dot(d) / dd, 0.0, 1.0);
  return {v, (a + v * d).norm() / std::sqrt(dd)};
}

// Smooth integrands get the plain tensor rule. Otherwise [0,1]^2 is fanned
// into triangles around the point c nearest the origin of h and each triangle
// is Duffy-mapped, (u, v) -> c + u (P1 - c + v (P2 - P1)), so that
// z = z_c + u zeta(v). When z_c = 0 the u-direction is a pure power of u;
// both directions are graded only as deeply as their nearest complex
// singularity requires.
template <class T, class F>
T tensor_rule(int order, const Segment& seg, bool smooth, bool integer_p, F&& integrand,
              T zero) {
  const GaussRule rule = gauss_legendre(order);
  if (smooth) {
    T acc = zero;
    for (int i = 0; i < order; ++i) {
      const Vector a = seg.base + rule.nodes[i] * seg.along_s;
      for (int j = 0; j < order; ++j) {
        acc += (rule.weights[i] * rule.weights[j]) * integrand(Vector(a + rule.nodes[j] * seg.along_t));
      }
    }
    return acc;
  }
  const auto [sc, tc] = nearest_to_origin(seg);
  const Vector zc = seg.base + sc * seg.along_s + tc * seg.along_t;
  const double scale = seg.base.norm() + seg.along_s.norm() + seg.along_t.norm();
  const bool through_origin = zc.norm() <= 1e-12 * scale;
  const double corners[5][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  T acc = zero;
  for (int e = 0; e < 4; ++e) {
    const double p1s = corners[e][0] - sc, p1t = corners[e][1] - tc;
    const double es = corners[e + 1][0] - corners[e][0], et = corners[e + 1][1] - corners[e][1];
    const double jac = std::abs(p1s * et - p1t * es);
    if (!(jac > 1e-15)) continue;
    const Vector zeta0 = p1s * seg.along_s + p1t * seg.along_t;
    const Vector dzeta = es * seg.along_s + et * seg.along_t;
    const auto [vr, vscale] = line_singularity(zeta0, dzeta);
    const GaussRule vrule = graded_rule(rule, vr, layers_for(vscale));
    for (std::size_t i = 0; i < vrule.nodes.size(); ++i) {
      const Vector zeta = zeta0 + vrule.nodes[i] * dzeta;
      GaussRule urule_graded;
      if (!through_origin || !integer_p) {
        const auto [ur, uscale] = line_singularity(through_origin ? Vector(Vector::Zero(zc.size())) : zc, zeta);
        urule_graded = graded_rule(rule, ur, through_origin ? kMaxLayers : layers_for(uscale));
      }
      const GaussRule& urule = through_origin && integer_p ? rule : urule_graded;
      T part = zero;
      for (std::size_t j = 0; j < urule.nodes.size(); ++j) {
        const double u = urule.nodes[j];
        const Vector z = through_origin ? Vector(u * zeta) : Vector(zc + u * zeta);
        part += (urule.weights[j] * u) * integrand(z);
      }
      acc += (vrule.weights[i] * jac) * part;
    }
  }
  return acc;
}

// D^2h is polynomial for the built-in families when p is an even integer.
bool smooth_hessian(const CostFunction& cost) {
  const double p = cost.degree();
  return cost.family() != CostFamily::Custom && p == std::floor(p) &&
         static_cast<long long>(p) % 2 == 0;
}

void check_order(const QuadratureSpec& quad) {
  if (quad.order < 2) throw InputError("quadrature order must be >= 2 per axis");
}

}  // namespace

Quadrature<Matrix> a_matrix(const CostFunction& cost, const Vector& x, const Vector& y,
                            const Vector& tx, const Vector& ty, const QuadratureSpec& quad) {
  check_order(quad);
  const Segment seg = make_segment(cost, x, y, tx, ty);
  const int n = cost.dimension();
  const bool smooth = smooth_hessian(cost);
  const bool integer_p = cost.degree() == std::floor(cost.degree());
  auto hess = [&](const Vector& z) { return cost.hessian(z); };
  Matrix fine = tensor_rule(quad.order, seg, smooth, integer_p, hess, Matrix(Matrix::Zero(n, n)));
  const Matrix coarse =
      tensor_rule(std::max(1, quad.order / 2), seg, smooth, integer_p, hess, Matrix(Matrix::Zero(n, n)));
  if (!fine.allFinite()) throw NumericError("A(x,y): non-finite quadrature value");
  // symmetrise away roundoff; D^2h is symmetric node by node
  fine = 0.5 * (fine + fine.transpose()).eval();
  return {fine, (fine - coarse).cwiseAbs().maxCoeff()};
}

Quadrature<double> phi_weight(const CostFunction& cost, const Vector& x, const Vector& y,
                              const Vector& tx, const Vector& ty, const QuadratureSpec& quad) {
  check_order(quad);
  const Segment seg = make_segment(cost, x, y, tx, ty);
  const double p = cost.degree();
  if (p == 2.0) return {1.0, 0.0};
  auto weight = [&](const Vector& z) { return std::pow(z.norm(), p - 2.0); };
  const bool smooth = smooth_hessian(cost);
  const bool integer_p = p == std::floor(p);
  const double fine = tensor_rule(quad.order, seg, smooth, integer_p, weight, 0.0);
  const double coarse = tensor_rule(std::max(1, quad.order / 2), seg, smooth, integer_p, weight, 0.0);
  if (!std::isfinite(fine)) throw NumericError("Phi(x,y): non-finite quadrature value");
  return {fine, std::abs(fine - coarse)};
}

double cross_det_residual(const CostFunction& cost, const Vector& x, const Vector& y,
                          double fd_step) {
  if (cost.family() != CostFamily::Isotropic) {
    throw InputError("cross_det_residual: isotropic family only");
  }
  const int n = cost.dimension();
  require_dimension(x, n, "cross_det_residual: x");
  require_dimension(y, n, "cross_det_residual: y");
  const Vector d = x - y;
  const double r = d.norm();
  if (r == 0.0) throw InputError("cross_det_residual: x == y is an unsupported input");
  const double p = cost.degree();
  const double step = fd_step * std::max(1.0, r);
  // d/dy of grad_x c(x,y) = d/dy grad h(x - y)
  const Matrix mixed = fd_jacobian([&](const Vector& yy) { return cost.gradient(x - yy); }, y,
                                   step);
  const double expected = (p - 1.0) * std::pow(-p * std::pow(r, p - 2.0), n);
  return std::abs(mixed.determinant() - expected);
}

}  // namespace hmono
