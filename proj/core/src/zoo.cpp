#include "hmono/zoo.hpp"

#include <algorithm>
#include <map>

#include "hmono/quadrature.hpp"

namespace hmono {

namespace {

struct Member {
  bool monotone;
  const char* description;
};

const std::map<std::string, Member>& members() {
  static const std::map<std::string, Member> table = {
      {"identity", {true, "T x = x"}},
      {"translation", {true, "T x = x + c; params: c"}},
      {"dilation", {true, "T x = a x, a > 0; params: a"}},
      {"grad_quartic", {true, "T x = k |x|^2 x (gradient of k|x|^4/4); params: k"}},
      {"piecewise_linear", {true, "1-D nondecreasing, slopes s0|s1 at knot; params: knot,s0,s1"}},
      {"reflection", {false, "T x = -x (negative control)"}},
  };
  return table;
}

MapFn make_closure(const ZooSpec& spec) {
  const int n = spec.dimension;
  const auto& prm = spec.params;
  if (spec.name == "identity") {
    return [](const Vector& x) { return x; };
  }
  if (spec.name == "translation") {
    Vector c = Vector::Zero(n);
    if (prm.size() == 1) {
      c(0) = prm[0];
    } else if (static_cast<int>(prm.size()) == n) {
      for (int i = 0; i < n; ++i) c(i) = prm[i];
    } else {
      throw InputError("zoo translation: expected 1 or n parameters");
    }
    return [c](const Vector& x) { return Vector(x + c); };
  }
  if (spec.name == "dilation") {
    const double a = prm.empty() ? 2.0 : prm[0];
    if (!(a > 0.0)) throw InputError("zoo dilation: factor must be > 0");
    return [a](const Vector& x) { return Vector(a * x); };
  }
  if (spec.name == "grad_quartic") {
    const double k = prm.empty() ? 1.0 : prm[0];
    if (!(k > 0.0)) throw InputError("zoo grad_quartic: scale must be > 0");
    return [k](const Vector& x) { return Vector(k * x.squaredNorm() * x); };
  }
  if (spec.name == "piecewise_linear") {
    if (n != 1) throw InputError("zoo piecewise_linear: one-dimensional only");
    const double knot = prm.size() > 0 ? prm[0] : 0.0;
    const double s0 = prm.size() > 1 ? prm[1] : 0.5;
    const double s1 = prm.size() > 2 ? prm[2] : 2.0;
    if (s0 < 0.0 || s1 < 0.0) throw InputError("zoo piecewise_linear: slopes must be >= 0");
    return [=](const Vector& x) {
      const double d = x(0) - knot;
      return Vector::Constant(1, knot + (d < 0.0 ? s0 : s1) * d).eval();
    };
  }
  if (spec.name == "reflection") {
    return [](const Vector& x) { return Vector(-x); };
  }
  throw InputError("unknown zoo map '" + spec.name + "'");
}

}  // namespace

DiscreteMap analytic_zoo(const ZooSpec& spec) {
  if (spec.dimension < 1) throw InputError("zoo: dimension must be >= 1");
  MapFn closure = make_closure(spec);
  const auto points =
      ball_samples(Vector::Zero(spec.dimension), spec.radius, spec.samples, spec.seed);
  return DiscreteMap::from_closure(spec.name, points, std::move(closure));
}

std::vector<std::string> zoo_names() {
  std::vector<std::string> names;
  for (const auto& [name, m] : members()) names.push_back(name);
  return names;
}

bool zoo_is_monotone(const std::string& name) {
  const auto it = members().find(name);
  if (it == members().end()) throw InputError("unknown zoo map '" + name + "'");
  return it->second.monotone;
}

std::string zoo_description(const std::string& name) {
  const auto it = members().find(name);
  if (it == members().end()) throw InputError("unknown zoo map '" + name + "'");
  return it->second.description;
}

}  // namespace hmono
