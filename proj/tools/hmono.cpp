// hmono: command-line front end for the h-monotone map toolkit.
//
//   hmono check       --cost c.json --map m.csv [--mode h|bilinear|classical]
//   hmono certify     --cost c.json --map m.csv --radius R --beta B --budget N
//   hmono lemma51     --map m.csv [--a '[[..]]'] [--b '[..]']
//   hmono interp      --cost c.json --zoo dilation --zoo-params 2
//   hmono fluid       --cost c.json --zoo translation --zoo-params 0.02,0
//   hmono green-check --function square_norm --n 3 --budgets 128,512,2048
//   hmono run config.json
//   hmono zoo list
//
// Reports go to stdout, or to --out. Exit codes: 0 pass (or gated), 1 check
// failure, 2 configuration or I/O error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmono/io.hpp"
#include "hmono/report.hpp"
#include "hmono/zoo.hpp"
#include "json.hpp"

namespace {

using Json = nlohmann::ordered_json;

struct MapArgs {
  std::string cost_path;
  std::string map_path;
  std::string zoo;
  std::vector<double> zoo_params;
  std::size_t samples = 256;
  double zoo_radius = 1.0;
};

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  std::string params;  // extra JSON merged into the check parameters
};

void add_map_args(CLI::App* sub, MapArgs& m, bool need_cost = true) {
  auto* c = sub->add_option("--cost", m.cost_path, "cost JSON file");
  if (need_cost) c->required();
  auto* map = sub->add_option("--map", m.map_path, "map CSV (x then Tx per row)");
  auto* zoo = sub->add_option("--zoo", m.zoo, "analytic zoo map name");
  map->excludes(zoo);
  sub->add_option("--zoo-params", m.zoo_params, "zoo parameters")->delimiter(',');
  sub->add_option("--samples", m.samples, "stored pairs for zoo maps");
  sub->add_option("--zoo-radius", m.zoo_radius, "sampling radius for zoo maps");
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "global seed");
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--params", c.params, "extra check parameters as a JSON object");
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    hmono::write_text_file(out, text);
  }
}

int exit_for(hmono::CheckStatus s) {
  return s == hmono::CheckStatus::Pass || s == hmono::CheckStatus::Gated ? 0 : 1;
}

// Runs one check kind with flags folded into its parameter object.
hmono::CheckOutcome run_single(const std::string& kind, const MapArgs& m, const Common& c,
                               Json params, bool needs_map = true) {
  if (!c.params.empty()) {
    Json extra;
    try {
      extra = Json::parse(c.params);
    } catch (const Json::parse_error& e) {
      throw hmono::ConfigError(std::string("--params: ") + e.what());
    }
    if (!extra.is_object()) throw hmono::ConfigError("--params: expected a JSON object");
    params.update(extra);
  }
  std::optional<hmono::CostFunction> cost;
  if (!m.cost_path.empty()) cost = hmono::cost_from_json(hmono::read_text_file(m.cost_path));
  std::optional<hmono::DiscreteMap> map;
  if (needs_map) {
    if (!m.map_path.empty()) {
      map = hmono::read_map_csv(m.map_path);
    } else if (!m.zoo.empty()) {
      if (!cost) throw hmono::ConfigError("--zoo needs --cost to fix the dimension");
      hmono::ZooSpec spec;
      spec.name = m.zoo;
      spec.dimension = cost->dimension();
      spec.params = m.zoo_params;
      spec.samples = m.samples;
      spec.radius = m.zoo_radius;
      spec.seed = c.seed;
      map = hmono::analytic_zoo(spec);
    } else {
      throw hmono::ConfigError("one of --map or --zoo is required");
    }
  }
  const auto outcome = hmono::run_check({kind, params.dump()}, cost ? &*cost : nullptr,
                                        map ? &*map : nullptr, c.seed);
  emit(outcome.report, c.out);
  std::cerr << kind << ": " << hmono::to_string(outcome.status) << ": " << outcome.message
            << "\n";
  return outcome;
}

template <typename T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks and estimates for h-monotone maps"};
  app.require_subcommand(1);

  MapArgs m;
  Common c;

  auto* check = app.add_subcommand("check", "pairwise h-monotonicity of a map");
  add_map_args(check, m);
  add_common(check, c);
  std::string mode = "h";
  std::optional<int> order;
  std::optional<double> tolerance;
  check->add_option("--mode", mode, "h, bilinear or classical")
      ->check(CLI::IsMember({"h", "bilinear", "classical"}));
  check->add_option("--order", order, "Gauss order for the bilinear form");
  check->add_option("--tolerance", tolerance, "defect tolerance");

  auto* cert = app.add_subcommand("certify", "L-infinity bound versus empirical sup");
  add_map_args(cert, m);
  add_common(cert, c);
  std::optional<std::vector<double>> center;
  std::optional<double> radius, beta, bar_delta;
  std::optional<std::size_t> budget;
  cert->add_option("--center", center, "ball centre")->delimiter(',');
  cert->add_option("--radius", radius, "ball radius R");
  cert->add_option("--beta", beta, "inner ratio beta");
  cert->add_option("--budget", budget, "quadrature points");
  cert->add_option("--bar-delta", bar_delta, "optional lower-bound probe delta");

  auto* l51 = app.add_subcommand("lemma51", "bound for classically monotone maps");
  add_map_args(l51, m, false);
  add_common(l51, c);
  std::string a_json, b_json;
  l51->add_option("--a", a_json, "matrix A as JSON rows");
  l51->add_option("--b", b_json, "vector b as JSON");
  l51->add_option("--center", center, "ball centre")->delimiter(',');
  l51->add_option("--radius", radius, "ball radius R");
  l51->add_option("--beta", beta, "inner ratio beta");
  l51->add_option("--budget", budget, "quadrature points");

  auto* interp = app.add_subcommand("interp", "displacement interpolation checks");
  add_map_args(interp, m);
  add_common(interp, c);
  std::optional<double> beta_bar;
  std::optional<std::size_t> particles;
  interp->add_option("--beta", beta, "inner radius beta");
  interp->add_option("--beta-bar", beta_bar, "outer radius beta_bar");
  interp->add_option("--budget", budget, "ball samples");
  interp->add_option("--particles", particles, "pushforward particles (0: closed form)");

  auto* fluid = app.add_subcommand("fluid", "action-integral sandwich");
  add_map_args(fluid, m);
  add_common(fluid, c);
  std::optional<double> beta_inner, beta_outer;
  fluid->add_option("--beta-inner", beta_inner, "inner radius");
  fluid->add_option("--beta", beta, "middle radius");
  fluid->add_option("--beta-outer", beta_outer, "outer radius");
  fluid->add_option("--budget", budget, "spatial samples");

  auto* green = app.add_subcommand("green-check", "Green representation residuals");
  add_map_args(green, m, false);
  add_common(green, c);
  std::string function = "square_norm";
  std::optional<int> dim;
  std::optional<double> r;
  std::optional<std::vector<double>> budgets;
  std::string csv;
  green->add_option("--function", function, "square_norm, coordinate, saddle or gaussian");
  green->add_option("--n", dim, "dimension (>= 3)");
  green->add_option("--r", r, "ball radius");
  green->add_option("--budgets", budgets, "sphere-node budgets")->delimiter(',');
  green->add_option("--csv", csv, "write the budget,residual table here");

  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string config_path;
  run->add_option("config", config_path, "config JSON")->required();

  auto* zoo = app.add_subcommand("zoo", "analytic map zoo");
  auto* zoo_list = zoo->add_subcommand("list", "list zoo members");
  zoo->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (zoo_list->parsed()) {
      for (const auto& name : hmono::zoo_names()) {
        std::cout << name << (hmono::zoo_is_monotone(name) ? "" : " (not monotone)") << ": "
                  << hmono::zoo_description(name) << "\n";
      }
      return 0;
    }
    if (run->parsed()) {
      const auto cfg = hmono::load_config(config_path);
      const auto res = hmono::run(cfg);
      for (std::size_t i = 0; i < res.outcomes.size(); ++i) {
        const auto& o = res.outcomes[i];
        std::cout << i + 1 << " " << o.kind << ": " << hmono::to_string(o.status) << ": "
                  << o.message << "\n";
      }
      std::cout << "exit " << res.exit_code << "\n";
      return res.exit_code;
    }
    Json p = Json::object();
    if (check->parsed()) {
      p["mode"] = mode;
      put(p, "order", order);
      put(p, "tolerance", tolerance);
      return exit_for(run_single("check", m, c, p).status);
    }
    if (cert->parsed() || l51->parsed()) {
      put(p, "center", center);
      put(p, "radius", radius);
      put(p, "beta", beta);
      put(p, "budget", budget);
      if (cert->parsed()) {
        put(p, "bar_delta", bar_delta);
        return exit_for(run_single("certify", m, c, p).status);
      }
      try {
        if (!a_json.empty()) p["a"] = Json::parse(a_json);
        if (!b_json.empty()) p["b"] = Json::parse(b_json);
      } catch (const Json::parse_error& e) {
        throw hmono::ConfigError(std::string("--a/--b: ") + e.what());
      }
      return exit_for(run_single("lemma51", m, c, p).status);
    }
    if (interp->parsed()) {
      put(p, "beta", beta);
      put(p, "beta_bar", beta_bar);
      put(p, "budget", budget);
      put(p, "particles", particles);
      return exit_for(run_single("interp", m, c, p).status);
    }
    if (fluid->parsed()) {
      put(p, "beta_inner", beta_inner);
      put(p, "beta", beta);
      put(p, "beta_outer", beta_outer);
      put(p, "budget", budget);
      return exit_for(run_single("fluid", m, c, p).status);
    }
    if (green->parsed()) {
      p["function"] = function;
      put(p, "n", dim);
      put(p, "r", r);
      put(p, "budgets", budgets);
      const auto outcome = run_single("green-check", m, c, p, false);
      if (!csv.empty()) {
        const Json rep = Json::parse(outcome.report);
        std::string table = "budget,residual\n";
        if (rep.contains("result") && rep["result"].contains("rows")) {
          for (const auto& row : rep["result"]["rows"]) {
            table += std::to_string(row["budget"].get<std::size_t>()) + "," +
                     (row["residual"].is_number()
                          ? hmono::format_number(row["residual"].get<double>())
                          : std::string("nan")) +
                     "\n";
          }
        }
        hmono::write_text_file(csv, table);
      }
      return exit_for(outcome.status);
    }
  } catch (const hmono::IoError& e) {
    std::cerr << "hmono: " << e.what() << "\n";
    return 2;
  } catch (const hmono::Error& e) {
    std::cerr << "hmono: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
