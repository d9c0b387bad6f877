#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gammaforge/generator.hpp"

namespace gammaforge {

/// Generator spec file:
///   { "dim": 2, "chart": "...",
///     "cometric": [["1","0"],["0","1/sin(x1)^2"]],
///     "drift": ["cos(x1)/sin(x1)", "0"],
///     "weighted_form": { "metric": [[...]], "log_density": "..." } | null }
/// Only the upper triangle of "cometric" is read. Expression errors surface
/// as ParseError; structural problems as InputError.
GeneratorSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const GeneratorSpec& spec);
GeneratorSpec load_spec(const std::string& path);

/// Map file: { "dim": 2, "components": ["2*x1 + 1", "2*x2"] }.
CoefficientField map_from_json(const nlohmann::json& j);
CoefficientField load_map(const std::string& path);

/// Points file: [[x1, x2, ...], ...].
std::vector<std::vector<double>> points_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::string& path);

}  // namespace gammaforge
