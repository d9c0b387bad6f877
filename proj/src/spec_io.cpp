#include "gammaforge/spec_io.hpp"

#include <fstream>

#include "gammaforge/errors.hpp"

namespace gammaforge {

using nlohmann::json;

namespace {

std::string expr_string(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  throw InputError(where + ": expected an expression string");
}

std::vector<std::vector<std::string>> matrix_strings(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw InputError(where + ": expected " + std::to_string(dim) + " rows");
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(dim), std::vector<std::string>(dim, "0"));
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != dim)
      throw InputError(where + ": row " + std::to_string(i) + " needs " + std::to_string(dim) + " entries");
    for (int k = i; k < dim; ++k) rows[i][k] = expr_string(j[i][k], where);
  }
  return rows;
}

std::vector<std::string> vector_strings(const json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of expressions");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(expr_string(e, where));
  return out;
}

json matrix_json(const CoefficientField& f) {
  json rows = json::array();
  for (int i = 0; i < f.dim(); ++i) {
    json row = json::array();
    for (int k = 0; k < f.dim(); ++k) row.push_back(f.entry_source(i, k));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

GeneratorSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw InputError("generator spec must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) throw InputError("generator spec: missing integer \"dim\"");
  const int dim = j["dim"].get<int>();
  if (dim < 1 || dim > 9) throw InputError("generator spec: dim must lie in [1, 9]");
  if (!j.contains("cometric")) throw InputError("generator spec: missing \"cometric\"");
  if (!j.contains("drift")) throw InputError("generator spec: missing \"drift\"");
  auto cometric = CoefficientField::symmetric(dim, matrix_strings(j["cometric"], dim, "cometric"));
  auto drift = CoefficientField::vector(dim, vector_strings(j["drift"], "drift"));
  std::optional<WeightedForm> weighted;
  if (j.contains("weighted_form") && !j["weighted_form"].is_null()) {
    const auto& w = j["weighted_form"];
    if (!w.contains("metric") || !w.contains("log_density"))
      throw InputError("weighted_form needs \"metric\" and \"log_density\"");
    weighted = WeightedForm{CoefficientField::symmetric(dim, matrix_strings(w["metric"], dim, "weighted_form.metric")),
                            CoefficientField::scalar(dim, expr_string(w["log_density"], "weighted_form.log_density"))};
  }
  return GeneratorSpec(dim, std::move(cometric), std::move(drift), j.value("chart", std::string{}), std::move(weighted));
}

json spec_to_json(const GeneratorSpec& spec) {
  json j;
  j["dim"] = spec.dim();
  j["chart"] = spec.chart();
  j["cometric"] = matrix_json(spec.cometric());
  json drift = json::array();
  for (std::size_t i = 0; i < spec.drift().component_count(); ++i) drift.push_back(spec.drift().source(i));
  j["drift"] = drift;
  if (spec.weighted_form()) {
    j["weighted_form"] = {{"metric", matrix_json(spec.weighted_form()->metric)},
                          {"log_density", spec.weighted_form()->log_density.source(0)}};
  } else {
    j["weighted_form"] = nullptr;
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what(), e.byte);
  }
}

GeneratorSpec load_spec(const std::string& path) { return spec_from_json(read_json_file(path)); }

CoefficientField map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("components"))
    throw InputError("map file needs \"dim\" and \"components\"");
  return CoefficientField::map(j["dim"].get<int>(), vector_strings(j["components"], "components"));
}

CoefficientField load_map(const std::string& path) { return map_from_json(read_json_file(path)); }

std::vector<std::vector<double>> points_from_json(const json& j) {
  if (!j.is_array()) throw InputError("points must be a JSON array of coordinate arrays");
  std::vector<std::vector<double>> out;
  for (const auto& p : j) {
    if (!p.is_array()) throw InputError("each point must be an array of numbers");
    out.push_back(p.get<std::vector<double>>());
  }
  return out;
}

}  // namespace gammaforge
