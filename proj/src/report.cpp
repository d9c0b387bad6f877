#include "gammaforge/report.hpp"

#include <cmath>

#include "gammaforge/errors.hpp"
#include "gammaforge/sampling.hpp"

namespace gammaforge {

namespace {

nlohmann::json matrix_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json vector_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

const char* sign_name(oracle::BochnerSign s) { return s == oracle::BochnerSign::Minus ? "-1" : "+1"; }

}  // namespace

GeometryReport reconstruct_point(const GeneratorSpec& spec, const Point& x, oracle::BochnerSign sign,
                                 std::uint64_t seed, int bochner_jets, int probe_order) {
  GeometryReport r;
  r.metric = recover_metric(spec, x);
  r.connection = recover_christoffels_intrinsic(spec, x);
  r.drift_Z = recover_drift(spec, x);
  r.closedness = drift_closedness(spec, x);
  if (r.closedness > kClosednessTolerance)
    throw NonSymmetricError("non-symmetric generator: no invariant density (closedness residual " +
                                std::to_string(r.closedness) + ")",
                            r.closedness);
  r.ricci = recover_ricci_mu(spec, x, sign);

  const auto g = oracle::metric_jets(spec, x, 2);
  r.koszul_crosscheck = r.connection.christoffels.max_abs_difference(oracle::christoffels_classical(g));
  r.declared_density = spec.weighted_form().has_value();
  const Jet log_rho = r.declared_density ? spec.weighted_form()->log_density.scalar_jet(x, 2)
                                         : recovered_log_density_jet(spec, x);
  const Eigen::MatrixXd ric_g = oracle::ricci_from_riemann(oracle::riemann_tensor(g));
  const Eigen::MatrixXd hess = oracle::covariant_hessian(log_rho, oracle::christoffels_classical(g));
  r.ricci_crosscheck = max_abs(r.ricci.ric_mu - (ric_g + static_cast<int>(sign) * hess));

  Rng rng(seed);
  for (int k = 0; k < bochner_jets; ++k) {
    const Jet f = random_jet(x, probe_order, rng);
    r.bochner_residual = std::max(r.bochner_residual, oracle::bochner_residual(spec, f, sign, log_rho));
  }
  return r;
}

double worst_diagnostic(const GeometryReport& r) {
  return std::max({r.koszul_crosscheck, r.ricci_crosscheck, r.bochner_residual, r.connection.raw_asymmetry});
}

nlohmann::json to_json(const GeometryReport& r) {
  const int n = static_cast<int>(r.metric.point.size());
  nlohmann::json chr = nlohmann::json::array();
  for (int k = 0; k < n; ++k) {
    nlohmann::json block = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < n; ++j) row.push_back(r.connection.christoffels(k, i, j));
      block.push_back(row);
    }
    chr.push_back(block);
  }
  return {{"point", r.metric.point},
          {"cometric", matrix_json(r.metric.cometric)},
          {"metric", matrix_json(r.metric.metric)},
          {"christoffels", chr},
          {"ric_mu", matrix_json(r.ricci.ric_mu)},
          {"drift_Z", vector_json(r.drift_Z)},
          {"diagnostics",
           {{"min_eig", r.metric.min_eigenvalue},
            {"koszul_crosscheck", r.koszul_crosscheck},
            {"bochner_residual", r.bochner_residual},
            {"ricci_crosscheck", r.ricci_crosscheck},
            {"christoffel_raw_asymmetry", r.connection.raw_asymmetry},
            {"condition_number", r.connection.condition_number},
            {"one_form_closedness", r.closedness},
            {"density_source", r.declared_density ? "declared" : "recovered"}}}};
}

oracle::SignResolution resolve_sign_on_ou(std::uint64_t seed) {
  const auto& ou = get_manifold("ou_gaussian2");
  return oracle::resolve_bochner_sign(ou.spec, ou.sample_box, seed);
}

nlohmann::json to_json(const oracle::SignResolution& s) {
  return {{"bochner_sign", sign_name(s.sign)},
          {"convention", s.sign == oracle::BochnerSign::Minus ? "Ric_g - Hess(log rho)" : "Ric_g + Hess(log rho)"},
          {"residual_minus", s.residual_minus},
          {"residual_plus", s.residual_plus}};
}

double VerifyTable::worst() const {
  double m = 0.0;
  for (double d : deviation) m = std::max(m, d);
  return m;
}

VerifyTable verify_against_catalog(const ManifoldTruth& truth, const GeneratorSpec& spec,
                                   const std::vector<Point>& points, oracle::BochnerSign sign) {
  if (spec.dim() != truth.dim()) throw ShapeError("spec dimension differs from the catalog entry");
  if (points.empty()) throw InputError("verify needs at least one point");
  double metric = 0, cometric = 0, chr = 0, ric = 0, drift = 0;
  for (const auto& x : points) {
    const MetricPoint mp = recover_metric(spec, x);
    const Eigen::MatrixXd g = truth.metric(x);
    metric = std::max(metric, max_abs(mp.metric - g));
    cometric = std::max(cometric, max_abs(mp.cometric - g.inverse()));
    chr = std::max(chr, recover_christoffels_intrinsic(spec, x).christoffels.max_abs_difference(truth.christoffels(x)));
    ric = std::max(ric, max_abs(recover_ricci_mu(spec, x, sign).ric_mu - truth.ricci_mu(x, sign)));
    const Jet psi = truth.truth_log_rho.scalar_jet(x, 1);
    Eigen::VectorXd dpsi(truth.dim());
    for (int i = 0; i < truth.dim(); ++i) dpsi(i) = psi.d(i);
    drift = std::max(drift, (recover_drift(spec, x) - g.inverse() * dpsi).cwiseAbs().maxCoeff());
  }
  const DensityReport dr = recover_log_density(spec, points.front(), points);
  double log_rho = 0.0;
  const double base = truth.log_rho(points.front());
  for (std::size_t k = 0; k < points.size(); ++k)
    log_rho = std::max(log_rho, std::abs(dr.log_rho[k] - (truth.log_rho(points[k]) - base)));
  return VerifyTable{{"metric", "cometric", "christoffels", "ric_mu", "drift_Z", "log_rho"},
                     {metric, cometric, chr, ric, drift, log_rho}};
}

nlohmann::json to_json(const VerifyTable& t) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t k = 0; k < t.tensor.size(); ++k) out[t.tensor[k]] = t.deviation[k];
  return out;
}

}  // namespace gammaforge
