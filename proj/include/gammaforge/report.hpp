#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "gammaforge/catalog.hpp"
#include "gammaforge/curvature.hpp"
#include "gammaforge/reconstruction.hpp"

namespace gammaforge {

struct GeometryReport {
  MetricPoint metric;
  ChristoffelRecovery connection;
  RicciPoint ricci;
  Eigen::VectorXd drift_Z;
  double koszul_crosscheck = 0.0;  // |intrinsic - classical| Christoffels
  double ricci_crosscheck = 0.0;   // |Gamma_2 Ricci - oracle Ricci|
  double bochner_residual = 0.0;   // max over seeded order-3 jets at the point
  double closedness = 0.0;
  bool declared_density = false;   // oracle used the spec's weighted form
};

/// Full pipeline at one point. The oracle side uses the spec's weighted form
/// when present and the recovered log-density jet otherwise, so a generator
/// whose drift one-form is not closed raises NonSymmetricError here.
GeometryReport reconstruct_point(const GeneratorSpec& spec, const Point& x, oracle::BochnerSign sign,
                                 std::uint64_t seed, int bochner_jets = 8, int probe_order = 3);

/// Largest of the cross-check diagnostics.
double worst_diagnostic(const GeometryReport& r);

nlohmann::json to_json(const GeometryReport& r);

/// Sign decided on the Ornstein-Uhlenbeck catalog entry.
oracle::SignResolution resolve_sign_on_ou(std::uint64_t seed);
nlohmann::json to_json(const oracle::SignResolution& s);

struct VerifyTable {
  std::vector<std::string> tensor;  // row labels
  std::vector<double> deviation;    // max-abs deviation from the catalog truth

  double worst() const;
};

/// Reconstruction of `spec` compared with the closed-form truths of `truth`
/// at the given points: metric, cometric, christoffels, ric_mu, drift_Z and
/// log_rho (differences relative to the first point).
VerifyTable verify_against_catalog(const ManifoldTruth& truth, const GeneratorSpec& spec,
                                   const std::vector<Point>& points, oracle::BochnerSign sign);

nlohmann::json to_json(const VerifyTable& t);

}  // namespace gammaforge
