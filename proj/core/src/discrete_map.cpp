#include "hmono/discrete_map.hpp"

namespace hmono {

DiscreteMap::DiscreteMap(std::string label, std::vector<MapPair> pairs, MapFn closure)
    : label_(std::move(label)), pairs_(std::move(pairs)), closure_(std::move(closure)) {
  if (!pairs_.empty()) n_ = static_cast<int>(pairs_.front().x.size());
  for (const auto& pr : pairs_) {
    require_dimension(pr.x, n_, "DiscreteMap: source point");
    require_dimension(pr.tx, n_, "DiscreteMap: image point");
  }
  if (closure_) {
    for (const auto& pr : pairs_) {
      const Vector expect = closure_(pr.x);
      if ((expect - pr.tx).norm() > 1e-12 * (1.0 + expect.norm())) {
        throw InputError("DiscreteMap '" + label_ + "': stored pair disagrees with closure");
      }
    }
  }
}

DiscreteMap DiscreteMap::from_closure(std::string label, const std::vector<Vector>& points,
                                      MapFn closure) {
  if (!closure) throw InputError("DiscreteMap::from_closure: closure absent");
  std::vector<MapPair> pairs;
  pairs.reserve(points.size());
  for (const auto& x : points) pairs.push_back({x, closure(x)});
  return DiscreteMap(std::move(label), std::move(pairs), std::move(closure));
}

void DiscreteMap::require_closure(const char* what) const {
  if (!closure_) throw InputError(std::string(what) + ": closure absent");
}

Vector DiscreteMap::apply(const Vector& x) const {
  require_closure("DiscreteMap::apply");
  if (n_ != 0) require_dimension(x, n_, "DiscreteMap::apply");
  return closure_(x);
}

}  // namespace hmono
