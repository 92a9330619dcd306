#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hmono/cost.hpp"
#include "hmono/discrete_map.hpp"
#include "hmono/io.hpp"
#include "hmono/zoo.hpp"

namespace hmono {

/// Malformed configuration; the message names the line or the field.
class ConfigError : public IoError {
 public:
  using IoError::IoError;
};

struct ZooSource {
  ZooSpec spec;
};

struct CsvSource {
  std::filesystem::path path;
};

/// Random assignment instance: N source points in B_1, targets = source +
/// shift + noise * standard normal, matched by solve_exact.
struct AssignmentSource {
  std::size_t points = 64;
  std::uint64_t seed = 0;
  double noise = 0.01;
  std::vector<double> shift;
};

using MapSource = std::variant<std::monostate, ZooSource, CsvSource, AssignmentSource>;

/// One entry of "checks": its kind and the remaining keys as a JSON object.
struct CheckSpec {
  std::string kind;
  std::string params = "{}";
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::optional<CostFunction> cost;
  MapSource map;
  std::vector<CheckSpec> checks;
  std::filesystem::path output_dir = "hmono-out";
};

/// Relative CSV paths resolve against `base_dir`; referenced files must exist.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

DiscreteMap build_map(const MapSource& source, const CostFunction& cost);

enum class CheckStatus { Pass, Fail, Gated, Error };

std::string to_string(CheckStatus s);

struct CheckOutcome {
  std::string kind;
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  std::string report;  ///< JSON document
};

/// Runs one check. Kinds: check, certify, lemma51, interp, fluid, green-check.
/// `map` may be null for green-check. Precondition failures inside the check
/// give status Error; an unknown kind or a bad parameter throws ConfigError.
CheckOutcome run_check(const CheckSpec& spec, const CostFunction* cost, const DiscreteMap* map,
                       std::uint64_t seed);

struct RunResult {
  int exit_code = 0;  ///< 0 all pass, 1 a non-gated check failed, 2 config or I/O error
  std::vector<CheckOutcome> outcomes;
  std::vector<std::filesystem::path> files;
};

/// Runs the checks in order and writes NN-kind.json per check, summary.json
/// and the plot tables under output_dir/plots.
RunResult run(const ExperimentConfig& config);

/// CSV tables derived from check reports: bounds.csv, h_curve.csv, probe.csv,
/// density.csv, sandwich.csv, convergence.csv. Only non-empty tables are
/// written; the written paths are returned.
std::vector<std::filesystem::path> emit_plot_data(const std::vector<std::string>& reports,
                                                  const std::filesystem::path& out_dir);

}  // namespace hmono
