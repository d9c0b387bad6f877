#include "gammaforge/catalog.hpp"

#include <algorithm>

#include "gammaforge/errors.hpp"
#include "gammaforge/spec_io.hpp"

namespace gammaforge {

namespace {

struct CatalogRecord {
  const char* name;
  int n;
  const char* chart;
  const char* notes;
  std::vector<std::string> metric;
  std::vector<std::string> cometric;
  std::vector<std::string> drift;
  const char* log_rho;
  std::vector<std::string> christoffels;
  std::vector<std::string> ricci;
  std::vector<std::string> hess_log_rho;
  std::vector<std::pair<double, double>> box;
};

const std::vector<CatalogRecord>& records() {
  static const std::vector<CatalogRecord> all = {
#include "catalog_truths.inc"
  };
  return all;
}

std::vector<std::vector<std::string>> square(const std::vector<std::string>& flat, int n) {
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) rows[i].assign(flat.begin() + i * n, flat.begin() + (i + 1) * n);
  return rows;
}

ManifoldTruth build(const CatalogRecord& r) {
  const int n = r.n;
  WeightedForm wf{CoefficientField::symmetric(n, square(r.metric, n)), CoefficientField::scalar(n, r.log_rho)};
  GeneratorSpec spec(n, CoefficientField::symmetric(n, square(r.cometric, n)), CoefficientField::vector(n, r.drift),
                     r.chart, wf);
  return ManifoldTruth{r.name,
                       r.notes,
                       spec,
                       wf.metric,
                       CoefficientField::map(n, r.christoffels),
                       CoefficientField::symmetric(n, square(r.ricci, n)),
                       CoefficientField::symmetric(n, square(r.hess_log_rho, n)),
                       wf.log_density,
                       r.box};
}

const std::vector<ManifoldTruth>& entries() {
  static const std::vector<ManifoldTruth> all = [] {
    std::vector<ManifoldTruth> out;
    for (const auto& r : records()) out.push_back(build(r));
    return out;
  }();
  return all;
}

}  // namespace

ConnectionPoint ManifoldTruth::christoffels(std::span<const double> x) const {
  const int n = dim();
  ConnectionPoint c(n);
  const Eigen::VectorXd v = truth_christoffels.vector_value(x);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(k, i, j) = v((k * n + i) * n + j);
  return c;
}

Eigen::MatrixXd ManifoldTruth::ricci_mu(std::span<const double> x, oracle::BochnerSign sign) const {
  return ricci(x) + static_cast<int>(sign) * truth_hess_log_rho.matrix_value(x);
}

const ManifoldTruth& get_manifold(const std::string& name) {
  for (const auto& m : entries())
    if (m.name == name) return m;
  std::string known;
  for (const auto& m : entries()) known += (known.empty() ? "" : ", ") + m.name;
  throw InputError("unknown catalog manifold '" + name + "' (known: " + known + ")");
}

std::vector<std::string> manifold_names() {
  std::vector<std::string> out;
  for (const auto& m : entries()) out.push_back(m.name);
  return out;
}

double regeneration_residual(const ManifoldTruth& m, std::span<const double> x) {
  const int n = m.dim();
  const JetMatrix g = m.truth_metric.matrix_jets(x, 1);
  const JetMatrix G = inverse(g);
  const Jet psi = m.truth_log_rho.scalar_jet(x, 1);
  const Eigen::MatrixXd Gv = G.value();
  double worst = max_abs(Gv - m.spec.cometric().matrix_value(x));
  const Eigen::VectorXd b = m.spec.drift().vector_value(x);
  for (int j = 0; j < n; ++j) {
    double bj = 0.0;
    for (int i = 0; i < n; ++i) {
      // d_i log det g = tr(G d_i g)
      double dlogdet = 0.0;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) dlogdet += Gv(a, c) * g(c, a).d(i);
      bj += G(i, j).d(i) + Gv(i, j) * (psi.d(i) + 0.5 * dlogdet);
    }
    worst = std::max(worst, std::abs(bj - b(j)));
  }
  return worst;
}

nlohmann::json manifold_to_json(const ManifoldTruth& m) {
  nlohmann::json j = spec_to_json(m.spec);
  const int n = m.dim();
  auto matrix = [&](const CoefficientField& f) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < n; ++k) row.push_back(f.entry_source(std::min(i, k), std::max(i, k)));
      rows.push_back(row);
    }
    return rows;
  };
  nlohmann::json chr = nlohmann::json::array();
  for (int k = 0; k < n; ++k) {
    nlohmann::json block = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int l = 0; l < n; ++l) row.push_back(m.truth_christoffels.source(static_cast<std::size_t>((k * n + i) * n + l)));
      block.push_back(row);
    }
    chr.push_back(block);
  }
  nlohmann::json box = nlohmann::json::array();
  for (const auto& [lo, hi] : m.sample_box) box.push_back({lo, hi});
  j["name"] = m.name;
  j["truth"] = {{"metric", matrix(m.truth_metric)},
                {"christoffels", chr},
                {"ricci", matrix(m.truth_ricci)},
                {"hess_log_rho", matrix(m.truth_hess_log_rho)},
                {"log_rho", m.truth_log_rho.source(0)},
                {"sample_box", box},
                {"notes", m.notes}};
  return j;
}

}  // namespace gammaforge
