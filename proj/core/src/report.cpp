#include "hmono/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "hmono/density.hpp"
#include "hmono/estimates.hpp"
#include "hmono/fluid.hpp"
#include "hmono/green.hpp"
#include "hmono/interpolation.hpp"
#include "hmono/monotone.hpp"
#include "hmono/ot_solver.hpp"
#include "hmono/quadrature.hpp"
#include "json_io.hpp"

namespace hmono {

using detail::Json;

namespace {

// Typed access to a JSON object that remembers which keys were read, so
// misspelt keys can be reported instead of silently ignored.
class Params {
 public:
  Params(Json j, std::string where) : j_(std::move(j)), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  template <typename F>
  static auto wrap(F&& f) {
    try {
      return f();
    } catch (const ConfigError&) {
      throw;
    } catch (const IoError& e) {
      throw ConfigError(e.what());
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  std::optional<double> maybe_number(const std::string& key) {
    const Json* v = take(key);
    if (!v || v->is_null()) return std::nullopt;
    if (!v->is_number()) fail(key, "expected a number");
    return v->get<double>();
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_integer() || v->get<long long>() < 0) {
      fail(key, "expected a nonnegative integer");
    }
    return v->get<std::size_t>();
  }

  bool flag(const std::string& key, bool fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    if (!v->is_boolean()) fail(key, "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    if (!v->is_string()) fail(key, "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    const Vector x = wrap([&] { return detail::vector_from_json(*v, path(key)); });
    return {x.data(), x.data() + x.size()};
  }

  Vector vec(const std::string& key, const Vector& fallback, Eigen::Index size) {
    const Json* v = take(key);
    if (!v) return fallback;
    const Vector x = wrap([&] { return detail::vector_from_json(*v, path(key)); });
    if (x.size() != size) fail(key, "expected " + std::to_string(size) + " entries");
    return x;
  }

  Matrix mat(const std::string& key, const Matrix& fallback) {
    const Json* v = take(key);
    if (!v) return fallback;
    const Matrix m = wrap([&] { return detail::matrix_from_json(*v, path(key)); });
    if (m.rows() != fallback.rows() || m.cols() != fallback.cols()) {
      fail(key, "expected a " + std::to_string(fallback.rows()) + "x" +
                    std::to_string(fallback.cols()) + " matrix");
    }
    return m;
  }

  std::optional<Params> object(const std::string& key) {
    const Json* v = take(key);
    if (!v) return std::nullopt;
    return Params(*v, path(key));
  }

  const Json* raw(const std::string& key) { return take(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown key");
    }
  }

  const Json& json() const { return j_; }
  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const Json* take(const std::string& key) {
    used_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError(path(key) + ": " + what);
  }

  Json j_;
  std::string where_;
  std::set<std::string> used_;
};

Density parse_density(std::optional<Params> p, int n) {
  if (!p) return Density::uniform(n, 2.0);
  const std::string kind = p->text("kind", "uniform");
  const double hw = p->number("half_width", 2.0);
  Density d;
  if (kind == "uniform") {
    p->finish();
    d = Density::uniform(n, hw);
  } else if (kind == "cosine_bump") {
    const double a = p->number("amplitude", 0.2);
    p->finish();
    d = Density::cosine_bump(n, hw, a);
  } else {
    throw ConfigError(p->path("kind") + ": expected \"uniform\" or \"cosine_bump\"");
  }
  return d;
}

const CostFunction& need_cost(const CostFunction* cost, const std::string& kind) {
  if (!cost) throw ConfigError(kind + ": the config has no cost");
  return *cost;
}

const DiscreteMap& need_map(const DiscreteMap* map, const std::string& kind) {
  if (!map) throw ConfigError(kind + ": the config has no map");
  return *map;
}

struct Partial {
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  Json result;
};

Partial run_monotone(Params& p, const CostFunction& cost, const DiscreteMap& map,
                     std::uint64_t seed) {
  const std::string mode = p.text("mode", "h");
  CheckOptions opt;
  opt.tolerance = p.maybe_number("tolerance");
  opt.all_pairs_limit = p.count("all_pairs_limit", opt.all_pairs_limit);
  opt.sampled_pairs = p.count("sampled_pairs", opt.sampled_pairs);
  opt.seed = seed;
  CheckMode m = HForm{};
  if (mode == "bilinear") {
    BilinearForm b;
    b.quad.order = static_cast<int>(p.count("order", 16));
    m = b;
  } else if (mode == "classical") {
    m = Classical{p.mat("a", Matrix::Zero(map.dimension(), map.dimension()))};
  } else if (mode != "h") {
    throw ConfigError(p.path("mode") + ": expected \"h\", \"bilinear\" or \"classical\"");
  }
  p.finish();
  const auto rep = check_map(map, cost, m, opt);
  Partial out;
  out.result = detail::to_json(rep);
  out.status = rep.passed ? CheckStatus::Pass : CheckStatus::Fail;
  std::ostringstream msg;
  msg << "worst defect " << format_number(rep.worst_defect) << " at pair ("
      << rep.worst_pair.first << ", " << rep.worst_pair.second << ")";
  out.message = msg.str();
  return out;
}

Partial run_certify(Params& p, const CostFunction& cost, const DiscreteMap& map,
                    std::uint64_t seed) {
  const int n = cost.dimension();
  Ball ball{p.vec("center", Vector::Zero(n), n), p.number("radius", 1.0), seed};
  const double beta = p.number("beta", 0.5);
  const auto bar_delta = p.maybe_number("bar_delta");
  CertifyOptions opt;
  opt.budget = p.count("budget", opt.budget);
  opt.cert_tolerance = p.number("cert_tolerance", opt.cert_tolerance);
  const bool verify = p.flag("verify_monotone", true);
  const std::size_t probe_points = p.count("probe_points", 0);
  p.finish();

  Json mono;
  if (verify && map.size() >= 2) {
    CheckOptions copt;
    copt.seed = seed;
    const auto rep = check_map(map, cost, HForm{}, copt);
    opt.monotone_certified = rep.passed;
    mono = detail::to_json(rep);
  }
  const auto consts = EstimateConstants::from_cost(cost, beta, bar_delta);
  const auto rep = certify(map, cost, ball, consts, opt);
  Partial out;
  out.result = detail::to_json(rep);
  out.result["constants"] = detail::to_json(consts);
  if (!mono.is_null()) out.result["monotonicity"] = std::move(mono);
  if (probe_points > 0) {
    Vector u = Vector::Zero(n);
    u(0) = 1.0;
    out.result["probe"] = detail::to_json(
        probe_lower_bound(cost, u, default_delta_grid(probe_points, 1.0)));
  }
  std::ostringstream msg;
  msg << "sup " << format_number(rep.empirical_sup) << " vs bound " << format_number(rep.bound)
      << " (" << to_string(rep.branch) << " branch)";
  out.message = msg.str();
  if (rep.passed) {
    out.status = CheckStatus::Pass;
  } else if (rep.monotone_certified == false) {
    out.status = CheckStatus::Gated;
    out.message = "hypothesis not met: map is not h-monotone; " + out.message;
  } else {
    out.status = CheckStatus::Fail;
  }
  return out;
}

Partial run_lemma51(Params& p, const DiscreteMap& map, std::uint64_t seed) {
  const int n = map.dimension();
  const Matrix a = p.mat("a", Matrix::Zero(n, n));
  const Vector b = p.vec("b", Vector::Zero(n), n);
  Ball ball{p.vec("center", Vector::Zero(n), n), p.number("radius", 1.0), seed};
  const double beta = p.number("beta", 0.5);
  CertifyOptions opt;
  opt.budget = p.count("budget", opt.budget);
  opt.cert_tolerance = p.number("cert_tolerance", opt.cert_tolerance);
  const bool verify = p.flag("verify_monotone", true);
  p.finish();

  Json mono;
  if (verify && map.size() >= 2) {
    CheckOptions copt;
    copt.seed = seed;
    // classical monotonicity of T is the classical defect with A = 0
    const auto cost = CostFunction::isotropic(n, 2.0);
    const auto rep = check_map(map, cost, Classical{Matrix::Zero(n, n)}, copt);
    opt.monotone_certified = rep.passed;
    mono = detail::to_json(rep);
  }
  const auto rep = lemma51_bound(map, a, b, ball, beta, opt);
  Partial out;
  out.result = detail::to_json(rep);
  if (!mono.is_null()) out.result["monotonicity"] = std::move(mono);
  std::ostringstream msg;
  msg << "sup " << format_number(rep.empirical_sup) << " vs bound " << format_number(rep.bound);
  out.message = msg.str();
  if (rep.passed) {
    out.status = CheckStatus::Pass;
  } else if (rep.monotone_certified == false) {
    out.status = CheckStatus::Gated;
    out.message = "hypothesis not met: map is not monotone; " + out.message;
  } else {
    out.status = CheckStatus::Fail;
  }
  return out;
}

Partial run_interp(Params& p, const CostFunction& cost, const DiscreteMap& map,
                   std::uint64_t seed) {
  const int n = cost.dimension();
  const double beta = p.number("beta", 0.5);
  const double beta_bar = p.number("beta_bar", 0.75);
  const auto t_grid = p.list("t_grid", {0.0, 0.25, 0.5, 0.75, 1.0});
  const std::size_t budget = p.count("budget", 20000);
  const Density rho0 = parse_density(p.object("density"), n);
  const auto snap_t = p.list("snapshot_t", {0.25, 0.5, 0.75});
  const int cells = static_cast<int>(p.count("cells", 16));
  const double grid_half = p.number("grid_half_width", 1.0);
  const std::size_t particles = p.count("particles", 0);
  const bool sup = p.flag("sup_check", true);
  const double alpha = p.number("holder_alpha", 1.0);
  const std::size_t holder_pairs = p.count("holder_pairs", 20000);
  p.finish();

  Partial out;
  const auto inc = inclusion_check(map, cost, beta, beta_bar, t_grid, budget, seed);
  out.result["inclusion"] = detail::to_json(inc);
  out.status = inc.inclusion_holds() ? CheckStatus::Pass : CheckStatus::Fail;
  out.message = std::to_string(inc.violation_count) + " inclusion violations";
  if (!map.has_closure()) {
    out.message += "; no closure, density checks skipped";
    return out;
  }

  const Grid grid = Grid::cube(n, grid_half, cells);
  std::vector<DensitySnapshot> snaps;
  Json js = Json::array();
  for (double t : snap_t) {
    snaps.push_back(particles > 0 ? density_pushforward(map, rho0, t, grid, particles, seed)
                                  : density_closed_form(map, rho0, t, grid));
    js.push_back(detail::to_json(snaps.back()));
  }
  out.result["snapshots"] = std::move(js);

  if (sup) {
    Density rho1 = rho0;
    rho1.label = "transported";
    rho1.inverse_cdf.clear();
    rho1.value = [map, rho0](const Vector& z) { return transported_density(map, rho0, 1.0, z); };
    const Vector origin = Vector::Zero(n);
    HolderData h0{alpha, 0.0}, h1{alpha, 0.0};
    if (std::abs(rho0(origin) - 1.0) <= 1e-9 && std::abs(rho1(origin) - 1.0) <= 1e-9) {
      h0.seminorm = estimate_holder_seminorm(rho0, alpha, holder_pairs);
      h1.seminorm = estimate_holder_seminorm(rho1, alpha, holder_pairs);
    }
    SupCheckOptions sopt;
    if (particles > 0) sopt.tolerance = 0.05;
    const auto res = density_sup_check(map, rho0, rho1, h0, h1, snaps, beta, sopt);
    out.result["sup_check"] = detail::to_json(res);
    out.message += "; density sup check: " + to_string(res.status);
    if (res.status == SupStatus::Fail) {
      out.status = CheckStatus::Fail;
    } else if (res.status == SupStatus::RegimeNotMet && out.status == CheckStatus::Pass) {
      out.status = CheckStatus::Gated;
    }
  }
  return out;
}

Partial run_fluid(Params& p, const CostFunction& cost, const DiscreteMap& map,
                  std::uint64_t seed) {
  const int n = cost.dimension();
  const double b2 = p.number("beta_inner", 0.4);
  const double b = p.number("beta", 0.5);
  const double b1 = p.number("beta_outer", 0.6);
  SandwichOptions opt;
  opt.t_nodes = static_cast<int>(p.count("t_nodes", static_cast<std::size_t>(opt.t_nodes)));
  opt.spatial_budget = p.count("budget", opt.spatial_budget);
  opt.regime_samples = p.count("regime_samples", opt.regime_samples);
  opt.seed = seed;
  const Density rho0 = parse_density(p.object("density"), n);
  p.finish();

  const auto res = sandwich_check(map, cost, rho0, b2, b, b1, opt);
  Partial out;
  out.result = detail::to_json(res);
  out.result["beta_inner"] = b2;
  out.result["beta"] = b;
  out.result["beta_outer"] = b1;
  out.message = res.message;
  out.status = !res.regime_met ? CheckStatus::Gated
               : res.passed    ? CheckStatus::Pass
                               : CheckStatus::Fail;
  return out;
}

TestFunction parse_test_function(const std::string& name, const std::string& where) {
  if (name == "square_norm") return TestFunction::square_norm();
  if (name == "coordinate") return TestFunction::coordinate(0);
  if (name == "saddle") return TestFunction::saddle();
  if (name == "gaussian") return TestFunction::gaussian();
  throw ConfigError(where + ": expected square_norm, coordinate, saddle or gaussian");
}

Partial run_green(Params& p, const CostFunction* cost) {
  const int n = static_cast<int>(p.count("n", cost ? static_cast<std::size_t>(cost->dimension()) : 3));
  const TestFunction f = parse_test_function(p.text("function", "square_norm"), p.path("function"));
  const Vector y = p.vec("y", Vector::Zero(n), n);
  const double r = p.number("r", 1.0);
  std::vector<std::size_t> budgets;
  for (double b : p.list("budgets", {128, 512, 2048})) {
    if (!(b >= 1.0) || b != std::floor(b)) throw ConfigError(p.path("budgets") + ": expected positive integers");
    budgets.push_back(static_cast<std::size_t>(b));
  }
  if (budgets.empty()) throw ConfigError(p.path("budgets") + ": empty");
  const double tol = p.number("tolerance", 1e-4);
  auto probe = p.object("probe");
  std::optional<Vector> u;
  double delta = 0.3, probe_tol = 1e-3;
  std::size_t probe_budget = budgets.back();
  if (probe) {
    const int cn = need_cost(cost, "green-check probe").dimension();
    Vector e1 = Vector::Zero(cn);
    e1(0) = 1.0;
    u = probe->vec("u", e1, cn);
    delta = probe->number("delta", delta);
    probe_tol = probe->number("tolerance", probe_tol);
    probe_budget = probe->count("budget", probe_budget);
    probe->finish();
  }
  p.finish();

  const auto study = convergence_study(
      [&](std::size_t b) { return identity_residual(f, n, y, r, b); }, budgets);
  Partial out;
  out.result["anchor"] = "green-representation";
  out.result["function"] = f.label;
  out.result["n"] = n;
  out.result["y"] = detail::vector_json(y);
  out.result["r"] = r;
  Json rows = Json::array();
  for (const auto& row : study.rows) {
    Json e;
    e["budget"] = row.budget;
    e["residual"] = detail::number(row.residual);
    rows.push_back(std::move(e));
  }
  out.result["rows"] = std::move(rows);
  out.result["order"] = detail::number(study.order);
  out.result["decreasing"] = study.decreasing;
  out.result["tolerance"] = tol;
  const double last = study.rows.back().residual;
  bool ok = last < tol;
  std::ostringstream msg;
  msg << "residual " << format_number(last) << " at budget " << study.rows.back().budget;
  if (u) {
    const auto pr = proof_decomposition_probe(*cost, *u, delta, probe_budget);
    Json e;
    e["u"] = detail::vector_json(*u);
    e["delta"] = delta;
    e["lhs"] = detail::number(pr.lhs);
    e["a_term"] = detail::number(pr.a_term);
    e["b_term"] = detail::number(pr.b_term);
    e["residual"] = detail::number(pr.residual);
    e["tolerance"] = probe_tol;
    out.result["probe"] = std::move(e);
    ok = ok && pr.residual < probe_tol;
    msg << "; probe residual " << format_number(pr.residual);
  }
  out.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
  out.message = msg.str();
  return out;
}

const char* anchor_for(const std::string& kind) {
  if (kind == "check") return "h-monotone-pairwise";
  if (kind == "certify") return "h-monotone-linfty";
  if (kind == "lemma51") return "classical-monotone-linfty";
  if (kind == "interp") return "interpolant-inclusion";
  if (kind == "fluid") return "action-sandwich";
  return "green-representation";
}

std::uint64_t json_seed(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) throw ConfigError(where + ": expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string two_digits(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02zu", i);
  return buf;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Gated:
      return "gated";
    case CheckStatus::Error:
      return "error";
  }
  return "unknown";
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t at = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(at), '\n');
    const auto nl = text.rfind('\n', at == 0 ? 0 : at - 1);
    const auto col = nl == std::string::npos ? at + 1 : at - nl;
    throw ConfigError("config: line " + std::to_string(line) + ", column " +
                      std::to_string(col) + ": " + e.what());
  }
  Params p(root, "config");
  ExperimentConfig cfg;
  if (const Json* s = p.raw("seed")) cfg.seed = json_seed(*s, "config.seed");
  if (const Json* c = p.raw("cost")) {
    try {
      cfg.cost = detail::cost_from(*c);
    } catch (const IoError& e) {
      throw ConfigError(std::string("config.") + e.what());
    }
  }
  if (auto m = p.object("map")) {
    if (auto z = m->object("zoo")) {
      ZooSpec spec;
      spec.name = z->text("name", spec.name);
      spec.dimension = cfg.cost ? cfg.cost->dimension() : 1;
      spec.params = z->list("params", {});
      spec.samples = z->count("samples", spec.samples);
      spec.radius = z->number("radius", spec.radius);
      spec.seed = cfg.seed;
      z->finish();
      cfg.map = ZooSource{spec};
    } else if (const Json* c = m->raw("csv")) {
      if (!c->is_string()) throw ConfigError("config.map.csv: expected a path");
      std::filesystem::path path = c->get<std::string>();
      if (path.is_relative()) path = base_dir / path;
      if (!std::filesystem::exists(path)) {
        throw ConfigError("config.map.csv: file not found: " + path.string());
      }
      cfg.map = CsvSource{path};
    } else if (auto a = m->object("assignment")) {
      AssignmentSource src;
      src.points = a->count("points", src.points);
      src.seed = a->has("seed") ? json_seed(*a->raw("seed"), a->path("seed")) : cfg.seed;
      src.noise = a->number("noise", src.noise);
      src.shift = a->list("shift", {});
      a->finish();
      cfg.map = src;
    } else {
      throw ConfigError("config.map: expected one of zoo, csv, assignment");
    }
    m->finish();
  }
  if (const Json* checks = p.raw("checks")) {
    if (!checks->is_array()) throw ConfigError("config.checks: expected a list");
    for (std::size_t i = 0; i < checks->size(); ++i) {
      const std::string where = "config.checks[" + std::to_string(i) + "]";
      Json c = (*checks)[i];
      if (!c.is_object() || !c.contains("kind") || !c["kind"].is_string()) {
        throw ConfigError(where + ".kind: expected a string");
      }
      const std::string kind = c["kind"].get<std::string>();
      static const std::set<std::string> kinds{"check", "certify", "lemma51",
                                               "interp", "fluid", "green-check"};
      if (!kinds.count(kind)) throw ConfigError(where + ".kind: unknown check '" + kind + "'");
      c.erase("kind");
      cfg.checks.push_back({kind, c.dump()});
    }
  }
  cfg.output_dir = p.text("output_dir", cfg.output_dir.string());
  if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
  p.finish();
  if (std::holds_alternative<ZooSource>(cfg.map) && !cfg.cost) {
    throw ConfigError("config.map.zoo: a cost is needed to fix the dimension");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.parent_path());
}

DiscreteMap build_map(const MapSource& source, const CostFunction& cost) {
  const int n = cost.dimension();
  if (const auto* z = std::get_if<ZooSource>(&source)) {
    ZooSpec spec = z->spec;
    spec.dimension = n;
    return analytic_zoo(spec);
  }
  if (const auto* c = std::get_if<CsvSource>(&source)) {
    DiscreteMap map = read_map_csv(c->path);
    if (map.dimension() != n) {
      throw ConfigError(c->path.string() + ": map dimension " + std::to_string(map.dimension()) +
                        " differs from the cost dimension " + std::to_string(n));
    }
    return map;
  }
  if (const auto* a = std::get_if<AssignmentSource>(&source)) {
    if (a->points < 2) throw ConfigError("config.map.assignment.points: need at least 2");
    if (!a->shift.empty() && static_cast<int>(a->shift.size()) != n) {
      throw ConfigError("config.map.assignment.shift: expected " + std::to_string(n) + " entries");
    }
    const PointCloud xs = ball_samples(Vector::Zero(n), 1.0, a->points, a->seed);
    std::mt19937_64 rng(a->seed);
    std::normal_distribution<double> normal;
    PointCloud ys;
    for (const auto& x : xs) {
      Vector y = x;
      for (int d = 0; d < n; ++d) {
        y(d) += (a->shift.empty() ? 0.0 : a->shift[d]) + a->noise * normal(rng);
      }
      ys.push_back(y);
    }
    // present targets in a scrambled order so the identity is not the trivial answer
    std::shuffle(ys.begin(), ys.end(), rng);
    return assignment_map(xs, ys, solve_exact(xs, ys, cost), "assignment");
  }
  throw ConfigError("config.map: missing");
}

CheckOutcome run_check(const CheckSpec& spec, const CostFunction* cost, const DiscreteMap* map,
                       std::uint64_t seed) {
  Json params;
  try {
    params = Json::parse(spec.params);
  } catch (const Json::parse_error& e) {
    throw ConfigError(spec.kind + ": parameters are not valid JSON: " + e.what());
  }
  Params p(params, spec.kind);
  CheckOutcome out;
  out.kind = spec.kind;
  Partial part;
  try {
    if (spec.kind == "check") {
      part = run_monotone(p, need_cost(cost, spec.kind), need_map(map, spec.kind), seed);
    } else if (spec.kind == "certify") {
      part = run_certify(p, need_cost(cost, spec.kind), need_map(map, spec.kind), seed);
    } else if (spec.kind == "lemma51") {
      part = run_lemma51(p, need_map(map, spec.kind), seed);
    } else if (spec.kind == "interp") {
      part = run_interp(p, need_cost(cost, spec.kind), need_map(map, spec.kind), seed);
    } else if (spec.kind == "fluid") {
      part = run_fluid(p, need_cost(cost, spec.kind), need_map(map, spec.kind), seed);
    } else if (spec.kind == "green-check") {
      part = run_green(p, cost);
    } else {
      throw ConfigError("unknown check '" + spec.kind + "'");
    }
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    part.status = CheckStatus::Error;
    part.message = e.what();
    part.result = nullptr;
  }
  out.status = part.status;
  out.message = part.message;
  Json rep;
  rep["kind"] = spec.kind;
  rep["anchor"] = anchor_for(spec.kind);
  rep["status"] = to_string(part.status);
  rep["message"] = part.message;
  rep["map"] = map ? Json(map->label()) : Json(nullptr);
  rep["cost"] = cost && cost->family() != CostFamily::Custom ? detail::to_json(*cost) : Json(nullptr);
  rep["seed"] = seed;
  rep["params"] = params;
  rep["result"] = std::move(part.result);
  out.report = detail::dump(rep);
  return out;
}

RunResult run(const ExperimentConfig& config) {
  RunResult res;
  std::vector<std::string> reports;
  Json summary;
  Json entries = Json::array();
  std::size_t counts[4] = {0, 0, 0, 0};
  std::string fatal;
  try {
    std::optional<DiscreteMap> map;
    if (!std::holds_alternative<std::monostate>(config.map)) {
      if (!config.cost) throw ConfigError("config.cost: needed to build the map");
      map = build_map(config.map, *config.cost);
    }
    for (std::size_t i = 0; i < config.checks.size(); ++i) {
      const auto& spec = config.checks[i];
      auto outcome = run_check(spec, config.cost ? &*config.cost : nullptr,
                               map ? &*map : nullptr, config.seed);
      const std::string name = two_digits(i + 1) + "-" + spec.kind + ".json";
      const auto path = config.output_dir / name;
      write_text_file(path, outcome.report);
      res.files.push_back(path);
      reports.push_back(outcome.report);
      ++counts[static_cast<int>(outcome.status)];
      Json e;
      e["index"] = i + 1;
      e["kind"] = spec.kind;
      e["status"] = to_string(outcome.status);
      e["message"] = outcome.message;
      e["report"] = name;
      entries.push_back(std::move(e));
      res.outcomes.push_back(std::move(outcome));
    }
    for (auto& f : emit_plot_data(reports, config.output_dir / "plots")) res.files.push_back(f);
  } catch (const IoError& e) {
    fatal = e.what();
  } catch (const Error& e) {
    fatal = e.what();
  }
  const bool failed = counts[static_cast<int>(CheckStatus::Fail)] > 0 ||
                      counts[static_cast<int>(CheckStatus::Error)] > 0;
  res.exit_code = !fatal.empty() ? 2 : failed ? 1 : 0;
  summary["checks"] = std::move(entries);
  summary["passed"] = counts[0];
  summary["failed"] = counts[1];
  summary["gated"] = counts[2];
  summary["errors"] = counts[3];
  summary["fatal"] = fatal.empty() ? Json(nullptr) : Json(fatal);
  summary["exit_code"] = res.exit_code;
  try {
    const auto path = config.output_dir / "summary.json";
    write_text_file(path, detail::dump(summary));
    res.files.push_back(path);
  } catch (const IoError&) {
    res.exit_code = 2;
  }
  return res;
}

std::vector<std::filesystem::path> emit_plot_data(const std::vector<std::string>& reports,
                                                  const std::filesystem::path& out_dir) {
  std::ostringstream bounds, curve, probe, density, sandwich, conv;
  bounds << "index,kind,n,p,beta,radius,delta,delta0,branch,bound,empirical_sup,passed\n";
  curve << "index,r,H,is_r0\n";
  probe << "index,delta,ratio\n";
  sandwich << "index,beta_inner,beta,beta_outer,lower,action,upper,stderr,pass\n";
  conv << "index,budget,residual\n";
  std::size_t nb = 0, nc = 0, np = 0, nd = 0, ns = 0, nv = 0;
  std::vector<std::pair<std::size_t, Json>> snapshots;
  int max_dim = 0;

  auto num = [](const Json& v) {
    return v.is_number() ? format_number(v.get<double>()) : std::string("nan");
  };

  for (std::size_t i = 0; i < reports.size(); ++i) {
    Json rep;
    try {
      rep = Json::parse(reports[i]);
    } catch (const Json::parse_error& e) {
      throw IoError("report " + std::to_string(i + 1) + ": " + e.what());
    }
    const std::size_t idx = i + 1;
    const std::string kind = rep.value("kind", "");
    const Json& r = rep.contains("result") ? rep["result"] : Json();
    if (r.is_null()) continue;
    if (kind == "certify" || kind == "lemma51") {
      const double p = kind == "lemma51" ? 1.0
                       : rep["cost"].is_object() ? rep["cost"]["p"].get<double>()
                                                 : std::nan("");
      bounds << idx << ',' << kind << ',' << r["center"].size() << ',' << format_number(p) << ','
             << num(r["beta"]) << ',' << num(r["radius"]) << ',' << num(r["delta"]) << ','
             << num(r["delta0"]) << ',' << r["branch"].get<std::string>() << ','
             << num(r["bound"]) << ',' << num(r["empirical_sup"]) << ','
             << (r["passed"].get<bool>() ? 1 : 0) << '\n';
      ++nb;
    }
    if (kind == "certify" && r.contains("constants")) {
      const Json& cj = r["constants"];
      EstimateConstants c;
      c.n = cj["n"].get<int>();
      c.p = cj["p"].get<double>();
      c.beta = cj["beta"].get<double>();
      c.m = cj["m"].get<double>();
      c.M = cj["M"].get<double>();
      c.C1 = cj["C1"].get<double>();
      c.C2 = cj["C2"].get<double>();
      c.K1 = cj["K1"].get<double>();
      c.K2 = cj["K2"].get<double>();
      const double delta = r["delta"].get<double>();
      const double edge = (1.0 - c.beta) * r["radius"].get<double>() / 2.0;
      if (delta > 0.0) {
        for (int k = 1; k <= 64; ++k) {
          const double rr = edge * k / 64.0;
          curve << idx << ',' << format_number(rr) << ',' << format_number(h_curve(rr, delta, c))
                << ",0\n";
          ++nc;
        }
        const double r0 = r["r0"].get<double>();
        curve << idx << ',' << format_number(r0) << ',' << format_number(h_curve(r0, delta, c))
              << ",1\n";
        ++nc;
      }
    }
    if (kind == "certify" && r.contains("probe")) {
      const Json& pj = r["probe"];
      for (std::size_t k = 0; k < pj["deltas"].size(); ++k) {
        probe << idx << ',' << num(pj["deltas"][k]) << ',' << num(pj["ratios"][k]) << '\n';
        ++np;
      }
    }
    if (kind == "interp" && r.contains("snapshots")) {
      for (const auto& s : r["snapshots"]) {
        snapshots.emplace_back(idx, s);
        max_dim = std::max(max_dim, static_cast<int>(s["lower"].size()));
      }
    }
    if (kind == "fluid" && r.contains("lower")) {
      sandwich << idx << ',' << num(r["beta_inner"]) << ',' << num(r["beta"]) << ','
               << num(r["beta_outer"]) << ',' << num(r["lower"]) << ',' << num(r["action"])
               << ',' << num(r["upper"]) << ',' << num(r["stderr"]) << ','
               << (r["pass"].get<bool>() ? 1 : 0) << '\n';
      ++ns;
    }
    if (kind == "green-check" && r.contains("rows")) {
      for (const auto& row : r["rows"]) {
        conv << idx << ',' << row["budget"].get<std::size_t>() << ',' << num(row["residual"])
             << '\n';
        ++nv;
      }
    }
  }

  density << "index,t,provenance";
  for (int d = 0; d < max_dim; ++d) density << ",x" << d + 1;
  density << ",value\n";
  for (const auto& [idx, s] : snapshots) {
    Grid g;
    g.lower = detail::vector_from_json(s["lower"], "lower");
    g.upper = detail::vector_from_json(s["upper"], "upper");
    g.cells = s["cells"].get<std::vector<int>>();
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      const Vector x = g.cell_center(c);
      density << idx << ',' << num(s["t"]) << ',' << s["provenance"].get<std::string>();
      for (int d = 0; d < max_dim; ++d) {
        density << ',' << (d < x.size() ? format_number(x(d)) : std::string());
      }
      density << ',' << num(s["values"][c]) << '\n';
      ++nd;
    }
  }

  std::vector<std::filesystem::path> written;
  auto emit = [&](const char* name, std::size_t rows, const std::ostringstream& body) {
    if (rows == 0) return;
    const auto path = out_dir / name;
    write_text_file(path, body.str());
    written.push_back(path);
  };
  emit("bounds.csv", nb, bounds);
  emit("h_curve.csv", nc, curve);
  emit("probe.csv", np, probe);
  emit("density.csv", nd, density);
  emit("sandwich.csv", ns, sandwich);
  emit("convergence.csv", nv, conv);
  return written;
}

}  // namespace hmono
