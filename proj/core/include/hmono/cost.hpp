#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hmono/types.hpp"

namespace hmono {

/// Extremes of h and of its Hessian quadratic form over the unit sphere.
struct SphereExtremes {
  double m = 0.0;          ///< min h on S^{n-1}
  double M = 0.0;          ///< max h on S^{n-1}
  double grad_max = 0.0;   ///< max |grad h| on S^{n-1}
  double lambda = 0.0;     ///< min Hessian eigenvalue on S^{n-1}; 0 if not strictly convex
  double Lambda = 0.0;     ///< max Hessian eigenvalue on S^{n-1}
};

/// Evaluator interface for a cost h(z). Built-in families implement it; user
/// code can plug in its own via CostFunction::custom.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual double value(const Vector& z) const = 0;
  virtual Vector gradient(const Vector& z) const = 0;
  virtual Matrix hessian(const Vector& z) const = 0;
  virtual double laplacian(const Vector& z) const { return hessian(z).trace(); }
  /// Closed-form sphere extremes, when known.
  virtual std::optional<SphereExtremes> analytic_extremes() const { return std::nullopt; }
};

enum class CostFamily { Isotropic, Weighted, Custom };

std::string to_string(CostFamily family);

/// Homogeneous, even, convex cost c(x, y) = h(x - y) of degree p >= 2.
/// Immutable; sphere extremes are computed once at construction.
class CostFunction {
 public:
  /// h(z) = |z|^p.
  static CostFunction isotropic(int n, double p);
  /// h(z) = (sum_i w_i z_i^2)^{p/2}, w_i > 0.
  static CostFunction weighted(std::vector<double> weights, double p);
  /// User-supplied evaluator. The model must be homogeneous of degree p.
  static CostFunction custom(int n, double p, std::shared_ptr<const CostModel> model);

  int dimension() const { return n_; }
  double degree() const { return p_; }
  CostFamily family() const { return family_; }
  const std::vector<double>& weights() const { return weights_; }
  const SphereExtremes& extremes() const { return extremes_; }
  const CostModel& model() const { return *model_; }

  double h(const Vector& z) const;
  Vector gradient(const Vector& z) const;
  Matrix hessian(const Vector& z) const;
  double laplacian(const Vector& z) const;

 private:
  CostFunction(int n, double p, CostFamily family, std::vector<double> weights,
               std::shared_ptr<const CostModel> model);

  int n_;
  double p_;
  CostFamily family_;
  std::vector<double> weights_;
  std::shared_ptr<const CostModel> model_;
  SphereExtremes extremes_;
};

/// Numerical search for sphere extremes: deterministic sphere covering plus a
/// gradient-free pattern search on the best candidates, stopped when the
/// step falls below `tolerance`. Analytic families return closed forms.
SphereExtremes sphere_extremes(const CostFunction& cost, double tolerance = 1e-10);

/// Same search ignoring any closed form the model provides.
SphereExtremes sphere_extremes_numeric(const CostFunction& cost, double tolerance = 1e-10);

/// G(a, b) = h(a - b) - h(a) - h(b).
double g_function(const CostFunction& cost, const Vector& a, const Vector& b);

struct QuadratureSpec {
  int order = 16;  ///< Gauss-Legendre nodes per axis and panel on [0,1]^2
};

template <class T>
struct Quadrature {
  T value;
  double error_estimate = 0.0;  ///< |rule(order) - rule(order/2)|, max-norm
};

/// A(x,y) = int_0^1 int_0^1 D^2h(y - Ty + s(Ty - Tx) + t(x - y)) dt ds.
Quadrature<Matrix> a_matrix(const CostFunction& cost, const Vector& x, const Vector& y,
                            const Vector& tx, const Vector& ty,
                            const QuadratureSpec& quad = {});

/// Phi(x,y) = int_0^1 int_0^1 |y - Ty + s(Ty - Tx) + t(x - y)|^{p-2} dt ds.
Quadrature<double> phi_weight(const CostFunction& cost, const Vector& x, const Vector& y,
                              const Vector& tx, const Vector& ty,
                              const QuadratureSpec& quad = {});

/// |det D_xy c(x,y) - (p-1)(-p|x-y|^{p-2})^n| with the mixed derivative taken
/// by central differences of grad h. Isotropic family only, x != y.
double cross_det_residual(const CostFunction& cost, const Vector& x, const Vector& y,
                          double fd_step = 1e-5);

}  // namespace hmono
