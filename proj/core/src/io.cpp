#include "hmono/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace hmono {

namespace detail {

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v(i)));
  return out;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  if (!j.is_array()) throw IoError(field + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw IoError(field + "[" + std::to_string(i) + "]: expected a number");
    }
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw IoError(field + ": expected a list of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const Vector row = vector_from_json(j[r], field + "[" + std::to_string(r) + "]");
    if (r == 0) {
      cols = static_cast<std::size_t>(row.size());
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (static_cast<std::size_t>(row.size()) != cols) {
      throw IoError(field + ": ragged rows");
    }
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json to_json(const CostFunction& cost) {
  if (cost.family() == CostFamily::Custom) throw IoError("custom costs cannot be serialized");
  Json j;
  j["family"] = to_string(cost.family());
  j["n"] = cost.dimension();
  j["p"] = cost.degree();
  if (cost.family() == CostFamily::Weighted) j["weights"] = cost.weights();
  return j;
}

CostFunction cost_from(const Json& j) {
  if (!j.is_object()) throw IoError("cost: expected an object");
  auto field = [&](const char* key) -> const Json& {
    if (!j.contains(key)) throw IoError(std::string("cost.") + key + ": missing");
    return j.at(key);
  };
  const Json& fam = field("family");
  if (!fam.is_string()) throw IoError("cost.family: expected a string");
  const Json& pj = field("p");
  if (!pj.is_number()) throw IoError("cost.p: expected a number");
  const double p = pj.get<double>();
  const std::string family = fam.get<std::string>();
  try {
    if (family == "isotropic") {
      const Json& nj = field("n");
      if (!nj.is_number_integer()) throw IoError("cost.n: expected an integer");
      return CostFunction::isotropic(nj.get<int>(), p);
    }
    if (family == "weighted") {
      const Vector w = vector_from_json(field("weights"), "cost.weights");
      if (j.contains("n") && j["n"].is_number_integer() && j["n"].get<int>() != w.size()) {
        throw IoError("cost.n: does not match the number of weights");
      }
      return CostFunction::weighted(std::vector<double>(w.data(), w.data() + w.size()), p);
    }
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(std::string("cost: ") + e.what());
  }
  throw IoError("cost.family: expected \"isotropic\" or \"weighted\", got \"" + family + "\"");
}

Json to_json(const MonotonicityReport& r) {
  Json j;
  j["anchor"] = "h-monotone-pairwise";
  j["mode"] = r.mode;
  j["pairs_checked"] = r.pairs_checked;
  j["worst_defect"] = number(r.worst_defect);
  j["worst_pair"] = Json::array({r.worst_pair.first, r.worst_pair.second});
  j["tolerance"] = number(r.tolerance);
  j["passed"] = r.passed;
  return j;
}

Json to_json(const EstimateConstants& c) {
  Json j;
  j["n"] = c.n;
  j["p"] = number(c.p);
  j["beta"] = number(c.beta);
  j["m"] = number(c.m);
  j["M"] = number(c.M);
  j["C1"] = number(c.C1);
  j["C2"] = number(c.C2);
  j["K1"] = number(c.K1);
  j["K2"] = number(c.K2);
  j["bar_delta"] = c.bar_delta ? number(*c.bar_delta) : Json(nullptr);
  return j;
}

Json to_json(const EstimateReport& r) {
  Json j;
  j["anchor"] = r.kind == "lemma51" ? "classical-monotone-linfty" : "h-monotone-linfty";
  j["kind"] = r.kind;
  j["center"] = vector_json(r.ball.center);
  j["radius"] = number(r.ball.radius);
  j["seed"] = r.ball.seed;
  j["beta"] = number(r.beta);
  j["delta"] = number(r.delta);
  j["delta0"] = number(r.delta0);
  j["branch"] = to_string(r.branch);
  j["r0"] = number(r.r0);
  j["bound"] = number(r.bound);
  j["empirical_sup"] = number(r.empirical_sup);
  j["passed"] = r.passed;
  j["samples"] = r.samples;
  j["std_error"] = number(r.std_error);
  j["quadrature_clean"] = r.quadrature_clean;
  j["constants_extrapolated"] = r.constants_extrapolated;
  j["monotone_certified"] = r.monotone_certified ? Json(*r.monotone_certified) : Json(nullptr);
  j["cert_tolerance"] = number(r.cert_tolerance);
  return j;
}

Json to_json(const ProbeResult& r) {
  Json j;
  j["anchor"] = "g-lower-bound";
  j["delta0"] = number(r.delta0);
  j["threshold"] = number(r.threshold);
  Json d = Json::array(), q = Json::array();
  for (double x : r.deltas) d.push_back(number(x));
  for (double x : r.ratios) q.push_back(number(x));
  j["deltas"] = std::move(d);
  j["ratios"] = std::move(q);
  return j;
}

Json to_json(const InterpolationResult& r) {
  Json j;
  j["anchor"] = "interpolant-inclusion";
  Json ts = Json::array();
  for (double t : r.t_grid) ts.push_back(number(t));
  j["t_grid"] = std::move(ts);
  j["beta"] = number(r.beta);
  j["beta_bar"] = number(r.beta_bar);
  j["energy"] = number(r.energy);
  j["samples"] = r.samples;
  j["violation_count"] = r.violation_count;
  Json vs = Json::array();
  for (const auto& v : r.violations) {
    Json e;
    e["t"] = number(v.t);
    e["x"] = vector_json(v.x);
    vs.push_back(std::move(e));
  }
  j["violations"] = std::move(vs);
  j["inclusion_holds"] = r.inclusion_holds();
  return j;
}

Json to_json(const SupCheckResult& r) {
  Json j;
  j["anchor"] = "interpolant-density-sup";
  j["status"] = to_string(r.status);
  j["margin"] = number(r.margin);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json e;
    e["t"] = number(row.t);
    e["sup"] = number(row.sup);
    e["bound"] = number(row.bound);
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["message"] = r.message;
  return j;
}

Json to_json(const SandwichResult& r) {
  Json j;
  j["anchor"] = "action-sandwich";
  j["lower"] = number(r.lower);
  j["action"] = number(r.action);
  j["upper"] = number(r.upper);
  j["stderr"] = number(r.std_error);
  j["regime_met"] = r.regime_met;
  j["pass"] = r.passed;
  j["message"] = r.message;
  j["linfty_estimate"] = r.linfty_estimate ? number(*r.linfty_estimate) : Json(nullptr);
  return j;
}

Json to_json(const DensitySnapshot& s) {
  Json j;
  j["anchor"] = "interpolant-density";
  j["t"] = number(s.t);
  j["provenance"] = to_string(s.provenance);
  j["lower"] = vector_json(s.grid.lower);
  j["upper"] = vector_json(s.grid.upper);
  j["cells"] = s.grid.cells;
  Json vals = Json::array();
  for (double v : s.values) vals.push_back(number(v));
  j["values"] = std::move(vals);
  j["failed_cells"] = s.failed_cells;
  j["particles"] = s.particles;
  j["mass_outside"] = number(s.mass_outside);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

using detail::Json;

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string cost_to_json(const CostFunction& cost) { return detail::dump(detail::to_json(cost)); }

CostFunction cost_from_json(const std::string& text) {
  try {
    return detail::cost_from(Json::parse(text));
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("cost JSON: ") + e.what());
  }
}

PointCloud read_point_cloud_csv(std::istream& in, const std::string& source) {
  PointCloud out;
  std::string line;
  std::size_t lineno = 0;
  Eigen::Index width = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      if (b == std::string::npos) {
        throw IoError(source + ":" + std::to_string(lineno) + ": empty field");
      }
      double v = 0.0;
      const char* begin = cell.data() + b;
      const char* end = cell.data() + e + 1;
      const auto res = std::from_chars(begin, end, v);
      if (res.ec != std::errc() || res.ptr != end) {
        throw IoError(source + ":" + std::to_string(lineno) + ": not a number: '" +
                      std::string(begin, end) + "'");
      }
      row.push_back(v);
    }
    const auto n = static_cast<Eigen::Index>(row.size());
    if (width < 0) {
      width = n;
    } else if (n != width) {
      throw IoError(source + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(width) + " columns, found " + std::to_string(n));
    }
    out.push_back(Eigen::Map<const Vector>(row.data(), n));
  }
  return out;
}

PointCloud read_point_cloud_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_point_cloud_csv(in, path.string());
}

PointCloud point_cloud_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("point cloud JSON: ") + e.what());
  }
  if (!j.is_array()) throw IoError("point cloud JSON: expected a list of points");
  PointCloud out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(detail::vector_from_json(j[i], "points[" + std::to_string(i) + "]"));
    if (out.back().size() != out.front().size()) {
      throw IoError("points[" + std::to_string(i) + "]: dimension differs from points[0]");
    }
  }
  return out;
}

void write_point_cloud_csv(std::ostream& out, const PointCloud& points) {
  for (const auto& p : points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_number(p(i));
    out << '\n';
  }
}

DiscreteMap read_map_csv(const std::filesystem::path& path) {
  const PointCloud rows = read_point_cloud_csv(path);
  if (rows.empty()) throw IoError(path.string() + ": no rows");
  if (rows.front().size() % 2 != 0) {
    throw IoError(path.string() + ": map rows need 2n columns (x then Tx)");
  }
  const Eigen::Index n = rows.front().size() / 2;
  std::vector<MapPair> pairs;
  pairs.reserve(rows.size());
  for (const auto& r : rows) pairs.push_back({r.head(n), r.tail(n)});
  return DiscreteMap(path.string(), std::move(pairs));
}

void write_map_csv(std::ostream& out, const DiscreteMap& map) {
  for (const auto& pr : map.pairs()) {
    Vector row(pr.x.size() + pr.tx.size());
    row << pr.x, pr.tx;
    write_point_cloud_csv(out, {row});
  }
}

std::string assignment_to_json(const Assignment& a) {
  Json j;
  j["sigma"] = a.sigma;
  j["cost"] = detail::number(a.cost);
  return detail::dump(j);
}

Assignment assignment_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw IoError(std::string("assignment JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("sigma") || !j["sigma"].is_array()) {
    throw IoError("assignment.sigma: expected a list of indices");
  }
  Assignment a;
  for (std::size_t i = 0; i < j["sigma"].size(); ++i) {
    const Json& s = j["sigma"][i];
    if (!s.is_number_integer()) {
      throw IoError("assignment.sigma[" + std::to_string(i) + "]: expected an integer");
    }
    a.sigma.push_back(s.get<int>());
  }
  if (!j.contains("cost") || !j["cost"].is_number()) throw IoError("assignment.cost: expected a number");
  a.cost = j["cost"].get<double>();
  return a;
}

std::string report_to_json(const MonotonicityReport& r) { return detail::dump(detail::to_json(r)); }
std::string report_to_json(const EstimateReport& r) { return detail::dump(detail::to_json(r)); }
std::string report_to_json(const InterpolationResult& r) { return detail::dump(detail::to_json(r)); }
std::string report_to_json(const SupCheckResult& r) { return detail::dump(detail::to_json(r)); }
std::string report_to_json(const SandwichResult& r) { return detail::dump(detail::to_json(r)); }
std::string report_to_json(const DensitySnapshot& s) { return detail::dump(detail::to_json(s)); }

void write_snapshot_csv(std::ostream& out, const DensitySnapshot& s) {
  for (std::size_t c = 0; c < s.values.size(); ++c) {
    const Vector x = s.grid.cell_center(c);
    for (Eigen::Index i = 0; i < x.size(); ++i) out << format_number(x(i)) << ',';
    out << format_number(s.values[c]) << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace hmono
