#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>

namespace hmono {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Point-to-point map x -> Tx.
using MapFn = std::function<Vector(const Vector&)>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand sizes disagree with the declared ambient dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (bad beta ordering, empty map, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Non-finite intermediate or a solver that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

inline void require_dimension(const Vector& v, int n, const char* what) {
  if (v.size() != n) {
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(n) +
                         ", got " + std::to_string(v.size()));
  }
}

/// Central-difference Jacobian of `fn` at `x`; column j is dT/dx_j.
Matrix fd_jacobian(const MapFn& fn, const Vector& x, double step);

}  // namespace hmono
