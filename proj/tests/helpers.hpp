#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gammaforge/generator.hpp"
#include "gammaforge/sampling.hpp"

namespace testing {

using namespace gammaforge;

inline GeneratorSpec make_spec(int dim, const std::vector<std::vector<std::string>>& cometric,
                               const std::vector<std::string>& drift) {
  return GeneratorSpec(dim, CoefficientField::symmetric(dim, cometric), CoefficientField::vector(dim, drift));
}

inline GeneratorSpec weighted_spec(int dim, const std::vector<std::vector<std::string>>& cometric,
                                   const std::vector<std::string>& drift,
                                   const std::vector<std::vector<std::string>>& metric, const std::string& log_rho) {
  return GeneratorSpec(dim, CoefficientField::symmetric(dim, cometric), CoefficientField::vector(dim, drift), "",
                       WeightedForm{CoefficientField::symmetric(dim, metric), CoefficientField::scalar(dim, log_rho)});
}

inline GeneratorSpec flat(int dim) {
  std::vector<std::vector<std::string>> rows(dim, std::vector<std::string>(dim, "0"));
  std::vector<std::string> drift(dim, "0");
  for (int i = 0; i < dim; ++i) rows[i][i] = "1";
  return weighted_spec(dim, rows, drift, rows, "0");
}

inline GeneratorSpec ou1() { return weighted_spec(1, {{"1"}}, {"-x1"}, {{"1"}}, "-x1^2/2"); }

inline GeneratorSpec sphere() {
  return weighted_spec(2, {{"1", "0"}, {"0", "1/sin(x1)^2"}}, {"cos(x1)/sin(x1)", "0"}, {{"1", "0"}, {"0", "sin(x1)^2"}},
                       "0");
}

inline GeneratorSpec halfplane() {
  return weighted_spec(2, {{"x2^2", "0"}, {"0", "x2^2"}}, {"0", "0"}, {{"1/x2^2", "0"}, {"0", "1/x2^2"}}, "0");
}

inline std::uint64_t test_seed() { return seed_from_env(kDefaultSeed); }

}  // namespace testing
