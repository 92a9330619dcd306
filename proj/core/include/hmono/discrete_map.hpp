#pragma once

#include <string>
#include <vector>

#include "hmono/types.hpp"

namespace hmono {

struct MapPair {
  Vector x;
  Vector tx;
};

/// A finite family of (x, Tx) pairs, optionally backed by a closure that
/// evaluates T anywhere (needed for continuum integrals and resampling).
class DiscreteMap {
 public:
  DiscreteMap() = default;
  /// Throws DimensionError on mixed dimensions and InputError if a closure is
  /// given and disagrees with a stored pair by more than 1e-12 (relative).
  DiscreteMap(std::string label, std::vector<MapPair> pairs, MapFn closure = {});

  /// Samples `closure` at `points`.
  static DiscreteMap from_closure(std::string label, const std::vector<Vector>& points,
                                  MapFn closure);

  const std::string& label() const { return label_; }
  int dimension() const { return n_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const std::vector<MapPair>& pairs() const { return pairs_; }
  const MapPair& operator[](std::size_t i) const { return pairs_[i]; }

  bool has_closure() const { return static_cast<bool>(closure_); }
  const MapFn& closure() const { return closure_; }

  /// T(x) through the closure; throws InputError("closure absent") without one.
  Vector apply(const Vector& x) const;

  /// Throws InputError("closure absent") unless a closure is attached.
  void require_closure(const char* what) const;

 private:
  std::string label_;
  std::vector<MapPair> pairs_;
  MapFn closure_;
  int n_ = 0;
};

}  // namespace hmono
