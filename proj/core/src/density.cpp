#include "hmono/density.hpp"

#include <cmath>
#include <numbers>

#include "hmono/parallel.hpp"
#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

bool inside_box(const Vector& x, const Vector& lo, const Vector& hi) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < lo(i) || x(i) > hi(i)) return false;
  }
  return true;
}

}  // namespace

Density Density::uniform(int n, double half_width) {
  if (n < 1 || !(half_width > 0.0)) throw InputError("Density::uniform: bad arguments");
  Density d;
  d.label = "uniform";
  d.lower = Vector::Constant(n, -half_width);
  d.upper = Vector::Constant(n, half_width);
  const Vector lo = d.lower;
  const Vector hi = d.upper;
  d.value = [lo, hi](const Vector& x) { return inside_box(x, lo, hi) ? 1.0 : 0.0; };
  d.envelope = 1.0;
  d.mass = std::pow(2.0 * half_width, n);
  for (int i = 0; i < n; ++i) {
    d.inverse_cdf.push_back([half_width](double u) { return -half_width + 2.0 * half_width * u; });
  }
  return d;
}

Density Density::cosine_bump(int n, double half_width, double amplitude) {
  if (n < 1 || !(half_width > 0.0) || amplitude < 0.0 || amplitude >= 0.5) {
    throw InputError("Density::cosine_bump: bad arguments");
  }
  Density d;
  d.label = "cosine_bump";
  d.lower = Vector::Constant(n, -half_width);
  d.upper = Vector::Constant(n, half_width);
  const Vector lo = d.lower;
  const Vector hi = d.upper;
  const double a = amplitude;
  const double l = half_width;
  d.value = [=](const Vector& x) {
    if (!inside_box(x, lo, hi)) return 0.0;
    double v = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      v *= 1.0 - a + a * std::cos(std::numbers::pi * x(i) / l);
    }
    return v;
  };
  d.envelope = 1.0;
  // each factor integrates to (1 - a) 2L over [-L, L]
  d.mass = std::pow((1.0 - a) * 2.0 * l, n);
  return d;
}

std::size_t Grid::cell_count() const {
  std::size_t total = 1;
  for (int c : cells) total *= static_cast<std::size_t>(c);
  return total;
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < dimension(); ++i) v *= (upper(i) - lower(i)) / cells[i];
  return v;
}

Vector Grid::cell_center(std::size_t index) const {
  Vector c(dimension());
  for (int i = 0; i < dimension(); ++i) {
    const std::size_t k = index % cells[i];
    index /= cells[i];
    c(i) = lower(i) + (k + 0.5) * (upper(i) - lower(i)) / cells[i];
  }
  return c;
}

std::optional<std::size_t> Grid::locate(const Vector& x) const {
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int i = 0; i < dimension(); ++i) {
    const double f = (x(i) - lower(i)) / (upper(i) - lower(i));
    if (!(f >= 0.0 && f < 1.0)) return std::nullopt;
    const auto k = std::min<std::size_t>(cells[i] - 1, static_cast<std::size_t>(f * cells[i]));
    index += k * stride;
    stride *= cells[i];
  }
  return index;
}

Grid Grid::cube(int n, double half_width, int cells_per_axis) {
  if (n < 1 || !(half_width > 0.0) || cells_per_axis < 1) {
    throw InputError("Grid::cube: bad arguments");
  }
  return Grid{Vector::Constant(n, -half_width), Vector::Constant(n, half_width),
              std::vector<int>(n, cells_per_axis)};
}

std::string to_string(Provenance p) {
  return p == Provenance::ClosedForm ? "closed_form" : "pushforward_histogram";
}

double estimate_holder_seminorm(const Density& rho, double alpha, std::size_t pairs) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("Hoelder exponent must be in (0, 1]");
  const int n = rho.dimension();
  const auto xs = ball_samples(Vector::Zero(n), 1.0, pairs, 11);
  const auto ys = ball_samples(Vector::Zero(n), 1.0, pairs, 29);
  std::vector<double> q(pairs, 0.0);
  parallel_for(pairs, [&](std::size_t i) {
    // pair each point with a far partner and with a near one
    const double far = (xs[i] - ys[i]).norm();
    double best = far > 0.0 ? std::abs(rho(xs[i]) - rho(ys[i])) / std::pow(far, alpha) : 0.0;
    const Vector near = xs[i] + 1e-3 * (ys[i] - xs[i]);
    const double dn = (near - xs[i]).norm();
    if (dn > 0.0 && near.norm() <= 1.0) {
      best = std::max(best, std::abs(rho(xs[i]) - rho(near)) / std::pow(dn, alpha));
    }
    q[i] = best;
  });
  double sup = 0.0;
  for (double v : q) sup = std::max(sup, v);
  return sup;
}

}  // namespace hmono
