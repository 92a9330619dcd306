#include <filesystem>

#include "doctest.h"
#include "hmono/io.hpp"
#include "hmono/report.hpp"
#include "json.hpp"

using namespace hmono;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"({
    "seed": 3,
    "cost": {"family": "isotropic", "n": 2, "p": 3},
    "map": {"zoo": {"name": "dilation", "params": [1.5]}},
    "checks": [{"kind": "check"}, {"kind": "certify", "beta": 0.4}]
  })");
  CHECK(cfg.seed == 3);
  REQUIRE(cfg.cost.has_value());
  CHECK(cfg.cost->degree() == 3.0);
  CHECK(std::holds_alternative<ZooSource>(cfg.map));
  REQUIRE(cfg.checks.size() == 2);
  CHECK(cfg.checks[1].kind == "certify");
}

TEST_CASE("config errors") {
  CHECK_THROWS_WITH_AS(parse_config("{\n  \"seed\": ,\n}"), doctest::Contains("line 2"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"sed": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"checks": [{"kind": "nope"}]})"), ConfigError);
}

TEST_CASE("unknown check parameters are rejected at run time") {
  const auto cost = CostFunction::isotropic(2, 2.0);
  const auto map = build_map(ZooSource{}, cost);
  CHECK_THROWS_AS(run_check(CheckSpec{"check", R"({"tolerence": 1})"}, &cost, &map, 0), ConfigError);
}

TEST_CASE("assignment source produces an optimal coupling") {
  const auto cost = CostFunction::isotropic(2, 2.0);
  AssignmentSource src;
  src.points = 32;
  const auto map = build_map(src, cost);
  CHECK(map.size() == 32);
  const auto out = run_check(CheckSpec{"check", "{}"}, &cost, &map, 0);
  CHECK(out.status == CheckStatus::Pass);
}

TEST_CASE("run check statuses") {
  const auto cost = CostFunction::isotropic(2, 2.0);
  ZooSource zs;
  zs.spec.name = "reflection";
  zs.spec.dimension = 2;
  const auto bad = build_map(zs, cost);
  CHECK(run_check(CheckSpec{"check", "{}"}, &cost, &bad, 0).status == CheckStatus::Fail);
  zs.spec.name = "translation";
  zs.spec.params = {0.5};
  const auto far = build_map(zs, cost);
  CHECK(run_check(CheckSpec{"fluid", R"({"budget": 2000})"}, &cost, &far, 0).status ==
        CheckStatus::Gated);
  const auto g = run_check(CheckSpec{"green-check", R"({"n": 2})"}, nullptr, nullptr, 0);
  CHECK(g.status == CheckStatus::Error);
  const auto j = nlohmann::json::parse(g.report);
  CHECK(j["status"] == "error");
}

TEST_CASE("run writes reports, plots, and a summary") {
  const fs::path dir = fs::temp_directory_path() / "hmono_report_test";
  fs::remove_all(dir);
  auto cfg = parse_config(R"({
    "cost": {"family": "isotropic", "n": 2, "p": 2},
    "map": {"zoo": {"name": "translation", "params": [0.01], "samples": 64}},
    "checks": [{"kind": "check"}, {"kind": "certify", "budget": 2000},
               {"kind": "green-check", "n": 3, "budgets": [8, 16]}]
  })");
  cfg.output_dir = dir;
  const auto res = run(cfg);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(fs::exists(dir / "plots" / "bounds.csv"));
  CHECK(fs::exists(dir / "plots" / "convergence.csv"));
  const auto summary = nlohmann::json::parse(read_text_file(dir / "summary.json"));
  CHECK(summary["passed"] == 3);
  fs::remove_all(dir);
}
