#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "hmono/io.hpp"
#include "hmono/zoo.hpp"
#include "json.hpp"

using namespace hmono;

TEST_CASE("cost JSON round trip") {
  for (const auto& c : {CostFunction::isotropic(3, 2.5), CostFunction::weighted({1.0, 4.0}, 3.0)}) {
    const auto back = cost_from_json(cost_to_json(c));
    CHECK(back.dimension() == c.dimension());
    CHECK(back.degree() == c.degree());
    CHECK(back.family() == c.family());
    CHECK(back.weights() == c.weights());
  }
  CHECK_THROWS_AS(cost_from_json(R"({"family": "isotropic", "n": 2})"), IoError);
  CHECK_THROWS_AS(cost_from_json("{"), IoError);
}

TEST_CASE("point cloud CSV") {
  std::istringstream in("# comment\n1.5, 2\n-3,4e-1\n\n");
  const auto pts = read_point_cloud_csv(in);
  REQUIRE(pts.size() == 2);
  CHECK(pts[1](1) == 0.4);
  std::ostringstream out;
  write_point_cloud_csv(out, pts);
  std::istringstream again(out.str());
  CHECK(read_point_cloud_csv(again) == pts);
}

TEST_CASE("CSV diagnostics name the line") {
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_WITH_AS(read_point_cloud_csv(ragged, "pts.csv"), doctest::Contains("pts.csv:2"),
                       IoError);
  std::istringstream junk("1,x\n");
  CHECK_THROWS_AS(read_point_cloud_csv(junk), IoError);
}

TEST_CASE("map CSV round trip") {
  ZooSpec spec;
  spec.name = "dilation";
  spec.dimension = 2;
  spec.params = {2.0};
  spec.samples = 10;
  const auto map = analytic_zoo(spec);
  const auto path = std::filesystem::temp_directory_path() / "hmono_io_test" / "map.csv";
  std::ostringstream out;
  write_map_csv(out, map);
  write_text_file(path, out.str());
  const auto back = read_map_csv(path);
  REQUIRE(back.size() == map.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    CHECK(back[i].x == map[i].x);
    CHECK(back[i].tx == map[i].tx);
  }
  std::filesystem::remove_all(path.parent_path());
  CHECK_THROWS_AS(read_map_csv(path), IoError);
}

TEST_CASE("assignment JSON") {
  Assignment a{{2, 0, 1}, 1.25};
  const auto b = assignment_from_json(assignment_to_json(a));
  CHECK(b.sigma == a.sigma);
  CHECK(b.cost == a.cost);
}

TEST_CASE("reports carry an anchor and map non-finite values to null") {
  MonotonicityReport r;
  r.mode = "h";
  r.worst_defect = -INFINITY;
  const auto j = nlohmann::json::parse(report_to_json(r));
  CHECK(j.contains("anchor"));
  CHECK(j["worst_defect"].is_null());
}

TEST_CASE("format_number is shortest round trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}
