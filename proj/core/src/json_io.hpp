#pragma once

#include "hmono/io.hpp"
#include "json.hpp"

namespace hmono::detail {

using Json = nlohmann::ordered_json;

Json number(double x);
Json vector_json(const Vector& v);
Vector vector_from_json(const Json& j, const std::string& field);
Matrix matrix_from_json(const Json& j, const std::string& field);

Json to_json(const CostFunction& cost);
CostFunction cost_from(const Json& j);
Json to_json(const MonotonicityReport& r);
Json to_json(const EstimateReport& r);
Json to_json(const EstimateConstants& c);
Json to_json(const ProbeResult& r);
Json to_json(const InterpolationResult& r);
Json to_json(const SupCheckResult& r);
Json to_json(const SandwichResult& r);
Json to_json(const DensitySnapshot& s);

std::string dump(const Json& j);

}  // namespace hmono::detail
