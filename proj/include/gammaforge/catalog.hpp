#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <span>
#include <string>
#include <vector>

#include "gammaforge/curvature.hpp"
#include "gammaforge/generator.hpp"
#include "gammaforge/geometry.hpp"

// Ground-truth weighted manifolds. Truth fields were derived symbolically
// offline (tools/derive_catalog.py) and frozen into src/catalog_truths.inc.
namespace gammaforge {

struct ManifoldTruth {
  std::string name;
  std::string notes;
  GeneratorSpec spec;  // carries the weighted form (metric, log density)
  CoefficientField truth_metric;
  CoefficientField truth_christoffels;  // n^3 components, index (k * n + i) * n + j
  CoefficientField truth_ricci;         // Ricci tensor of g
  CoefficientField truth_hess_log_rho;  // covariant Hessian of log rho
  CoefficientField truth_log_rho;
  std::vector<std::pair<double, double>> sample_box;

  int dim() const { return spec.dim(); }
  Eigen::MatrixXd metric(std::span<const double> x) const { return truth_metric.matrix_value(x); }
  ConnectionPoint christoffels(std::span<const double> x) const;
  Eigen::MatrixXd ricci(std::span<const double> x) const { return truth_ricci.matrix_value(x); }
  /// Ric_g + sign * Hess(log rho).
  Eigen::MatrixXd ricci_mu(std::span<const double> x, oracle::BochnerSign sign) const;
  double log_rho(std::span<const double> x) const { return truth_log_rho.scalar_value(x); }
};

/// Entry by name; InputError for unknown names.
const ManifoldTruth& get_manifold(const std::string& name);
std::vector<std::string> manifold_names();

/// Largest deviation of the spec's co-metric and drift from the ones
/// regenerated out of (truth_metric, truth_log_rho) as
///   G = g^-1,  b^j = d_i G^ij + G^ij d_i (log rho + log det g / 2).
double regeneration_residual(const ManifoldTruth& m, std::span<const double> x);

/// Generator-spec JSON with an extra "truth" block.
nlohmann::json manifold_to_json(const ManifoldTruth& m);

}  // namespace gammaforge
