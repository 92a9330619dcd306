#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hmono/cost.hpp"
#include "hmono/discrete_map.hpp"
#include "hmono/estimates.hpp"
#include "hmono/fluid.hpp"
#include "hmono/interpolation.hpp"
#include "hmono/monotone.hpp"
#include "hmono/ot_solver.hpp"

namespace hmono {

/// File and format problems. The message names the file, line or field.
class IoError : public Error {
 public:
  using Error::Error;
};

/// {"family": "isotropic"|"weighted", "n": int, "p": number, "weights": [...]}.
/// Custom costs cannot be serialized.
std::string cost_to_json(const CostFunction& cost);
CostFunction cost_from_json(const std::string& text);

/// One point per line, comma separated; blank lines and lines starting with
/// '#' are skipped. All rows must have the same width.
PointCloud read_point_cloud_csv(std::istream& in, const std::string& source = "<stream>");
PointCloud read_point_cloud_csv(const std::filesystem::path& path);
/// Inline JSON list of points, e.g. [[0, 1], [2, 3]].
PointCloud point_cloud_from_json(const std::string& text);
void write_point_cloud_csv(std::ostream& out, const PointCloud& points);

/// Map rows hold x then Tx, 2n columns.
DiscreteMap read_map_csv(const std::filesystem::path& path);
void write_map_csv(std::ostream& out, const DiscreteMap& map);

/// {"sigma": [...], "cost": number}.
std::string assignment_to_json(const Assignment& a);
Assignment assignment_from_json(const std::string& text);

std::string report_to_json(const MonotonicityReport& r);
std::string report_to_json(const EstimateReport& r);
std::string report_to_json(const InterpolationResult& r);
std::string report_to_json(const SupCheckResult& r);
std::string report_to_json(const SandwichResult& r);
std::string report_to_json(const DensitySnapshot& s);

/// Cell centre coordinates then the value, one cell per line.
void write_snapshot_csv(std::ostream& out, const DensitySnapshot& s);

/// Shortest round-trip decimal form of x ("nan", "inf", "-inf" for the rest).
std::string format_number(double x);

std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories; throws IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hmono
