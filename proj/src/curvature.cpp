#include "gammaforge/curvature.hpp"

#include <cmath>
#include <sstream>

#include "gammaforge/errors.hpp"
#include "gammaforge/sampling.hpp"

namespace gammaforge {

double ConnectionPoint::max_abs_difference(const ConnectionPoint& other) const {
  if (other.n_ != n_) throw ShapeError("connection dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

double ConnectionPoint::max_asymmetry() const {
  double m = 0.0;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m = std::max(m, std::abs((*this)(k, i, j) - (*this)(k, j, i)));
  return m;
}

namespace oracle {

MetricFieldJets::MetricFieldJets(JetMatrix g) : metric(std::move(g)), inverse(gammaforge::inverse(metric)) {
  if (metric.rows() != metric.cols()) throw ShapeError("metric jets must be square");
  require_positive_definite(metric.value(), "metric");
}

MetricFieldJets metric_jets(const GeneratorSpec& spec, std::span<const double> x, int order) {
  if (spec.weighted_form()) return MetricFieldJets(spec.weighted_form()->metric.matrix_jets(x, order));
  return MetricFieldJets(inverse(spec.cometric_jets(x, order)));
}

std::vector<Jet> christoffel_jets(const MetricFieldJets& g) {
  if (g.order() < 1) throw ShapeError("Christoffel symbols need metric jets of order >= 1");
  const int n = g.dim();
  const int out_order = g.order() - 1;
  std::vector<JetMatrix> dg;  // dg[l](i, j) = d_l g_ij
  for (int l = 0; l < n; ++l) dg.push_back(g.metric.derivative(l));
  const JetMatrix ginv = g.inverse.truncated(out_order);
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet acc = Jet::constant(0.0, out_order, g.metric.base_point());
        for (int l = 0; l < n; ++l) acc += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        out.push_back(acc * 0.5);
      }
  return out;
}

ConnectionPoint christoffels_classical(const MetricFieldJets& g) {
  const int n = g.dim();
  const auto jets = christoffel_jets(g);
  ConnectionPoint c(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) c(k, i, j) = jets[static_cast<std::size_t>((k * n + i) * n + j)].value();
  return c;
}

RiemannPoint riemann_tensor(const MetricFieldJets& g) {
  if (g.order() < 2) throw ShapeError("Riemann tensor needs metric jets of order >= 2");
  const int n = g.dim();
  const auto chr = christoffel_jets(g);
  auto G = [&](int k, int i, int j) -> const Jet& { return chr[static_cast<std::size_t>((k * n + i) * n + j)]; };
  RiemannPoint r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = G(l, j, k).d(i) - G(l, i, k).d(j);
          for (int m = 0; m < n; ++m) v += G(l, i, m).value() * G(m, j, k).value() - G(l, j, m).value() * G(m, i, k).value();
          r(l, i, j, k) = v;
        }
  return r;
}

Eigen::MatrixXd ricci_from_riemann(const RiemannPoint& r) {
  const int n = r.dim();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) ric(j, k) += r(i, i, j, k);
  return ric;
}

double sectional_curvature(const RiemannPoint& r, const Eigen::MatrixXd& metric) {
  if (r.dim() != 2 || metric.rows() != 2) throw ShapeError("sectional curvature is implemented for dimension 2");
  double num = 0.0;
  for (int l = 0; l < 2; ++l) num += metric(0, l) * r(l, 0, 1, 1);
  return num / metric.determinant();
}

Eigen::MatrixXd covariant_hessian(const Jet& f, const ConnectionPoint& connection) {
  if (f.order() < 2) throw ShapeError("covariant Hessian needs a jet of order >= 2");
  const int n = f.dim();
  if (connection.dim() != n) throw ShapeError("connection dimension differs from jet dimension");
  Eigen::MatrixXd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = f.d(i, j);
      for (int k = 0; k < n; ++k) v -= connection(k, i, j) * f.d(k);
      h(i, j) = v;
    }
  return h;
}

double hilbert_schmidt_sq(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& cometric) {
  return (cometric * hessian * cometric * hessian.transpose()).trace();
}

double weighted_laplacian(const MetricFieldJets& g, const Jet& log_rho, const Jet& f) {
  const auto conn = christoffels_classical(g);
  const Eigen::MatrixXd ginv = g.inverse.value();
  const Eigen::MatrixXd hess = covariant_hessian(f, conn);
  double out = (ginv * hess).trace();
  const int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += ginv(i, j) * log_rho.d(i) * f.d(j);
  return out;
}

namespace {

Jet declared_log_rho(const GeneratorSpec& spec, std::span<const double> x, int order) {
  if (!spec.weighted_form()) throw InputError("spec has no weighted form: log density must be supplied");
  return spec.weighted_form()->log_density.scalar_jet(x, order);
}

Eigen::MatrixXd ricci_mu_with(const MetricFieldJets& g, const Jet& log_rho, BochnerSign sign) {
  const Eigen::MatrixXd ric = ricci_from_riemann(riemann_tensor(g));
  const Eigen::MatrixXd hess = covariant_hessian(log_rho, christoffels_classical(g));
  return ric + static_cast<int>(sign) * hess;
}

}  // namespace

Eigen::MatrixXd ricci_mu(const GeneratorSpec& spec, std::span<const double> x, BochnerSign sign) {
  return ricci_mu_with(metric_jets(spec, x, 2), declared_log_rho(spec, x, 2), sign);
}

double bochner_residual(const GeneratorSpec& spec, const Jet& f, BochnerSign sign) {
  return bochner_residual(spec, f, sign, declared_log_rho(spec, f.base_point(), 2));
}

double bochner_residual(const GeneratorSpec& spec, const Jet& f, BochnerSign sign, const Jet& log_rho) {
  if (f.order() < 3) throw ShapeError("Bochner residual needs a jet of order >= 3");
  if (log_rho.order() < 2) throw ShapeError("Bochner residual needs log-density jets of order >= 2");
  const auto g = metric_jets(spec, f.base_point(), 2);
  const Eigen::MatrixXd ginv = g.inverse.value();
  const int n = spec.dim();
  Eigen::VectorXd df(n);
  for (int i = 0; i < n; ++i) df(i) = f.d(i);
  const Eigen::VectorXd grad = ginv * df;
  const Eigen::MatrixXd hess = covariant_hessian(f, christoffels_classical(g));
  const Eigen::MatrixXd ric = ricci_mu_with(g, log_rho, sign);
  const double lhs = gamma2(spec, f);
  return std::abs(lhs - hilbert_schmidt_sq(hess, ginv) - grad.dot(ric * grad));
}

SignResolution resolve_bochner_sign(const GeneratorSpec& spec, std::span<const std::pair<double, double>> box,
                                    std::uint64_t seed, int probes) {
  Rng rng(seed);
  SignResolution out{BochnerSign::Minus, 0.0, 0.0};
  for (int p = 0; p < probes; ++p) {
    const auto x = random_point(box, rng);
    const Jet f = random_jet(x, 3, rng);
    out.residual_minus = std::max(out.residual_minus, bochner_residual(spec, f, BochnerSign::Minus));
    out.residual_plus = std::max(out.residual_plus, bochner_residual(spec, f, BochnerSign::Plus));
  }
  constexpr double kAccept = 1e-8, kReject = 1e-2;
  if (out.residual_minus <= kAccept && out.residual_plus >= kReject) {
    out.sign = BochnerSign::Minus;
  } else if (out.residual_plus <= kAccept && out.residual_minus >= kReject) {
    out.sign = BochnerSign::Plus;
  } else {
    std::ostringstream msg;
    msg << "Bochner sign is not decided by this spec (residual with -1: " << out.residual_minus
        << ", with +1: " << out.residual_plus << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

}  // namespace oracle
}  // namespace gammaforge
