#include "gammaforge/generator.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "gammaforge/errors.hpp"

namespace gammaforge {

GeneratorSpec::GeneratorSpec(int dim, CoefficientField cometric, CoefficientField drift, std::string chart,
                             std::optional<WeightedForm> weighted_form)
    : dim_(dim),
      cometric_(std::move(cometric)),
      drift_(std::move(drift)),
      chart_(std::move(chart)),
      weighted_form_(std::move(weighted_form)) {
  if (cometric_.shape() != CoefficientField::Shape::SymmetricMatrix || cometric_.dim() != dim)
    throw InputError("co-metric must be a symmetric field of the chart dimension");
  if (drift_.shape() != CoefficientField::Shape::Vector || drift_.dim() != dim ||
      static_cast<int>(drift_.component_count()) != dim)
    throw InputError("drift must be a vector field of the chart dimension");
  if (weighted_form_) {
    if (weighted_form_->metric.shape() != CoefficientField::Shape::SymmetricMatrix || weighted_form_->metric.dim() != dim)
      throw InputError("weighted form metric must be a symmetric field of the chart dimension");
    if (weighted_form_->log_density.shape() != CoefficientField::Shape::Scalar)
      throw InputError("weighted form log density must be a scalar field");
  }
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_positive_definite(const Eigen::MatrixXd& symmetric, const char* what) {
  const double lam = min_eigenvalue(symmetric);
  if (!(lam > kSpdThreshold)) {
    std::ostringstream msg;
    msg << what << " is not positive definite (minimum eigenvalue " << lam << ")";
    throw DegeneracyError(msg.str(), lam);
  }
}

JetMatrix GeneratorSpec::cometric_jets(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != dim_) throw ShapeError("point dimension differs from generator dimension");
  JetMatrix g = cometric_.matrix_jets(x, order);
  require_positive_definite(g.value(), "co-metric");
  return g;
}

std::vector<Jet> GeneratorSpec::drift_jets(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != dim_) throw ShapeError("point dimension differs from generator dimension");
  return drift_.vector_jets(x, order);
}

namespace {

void require_dim(const GeneratorSpec& spec, const Jet& f) {
  if (f.dim() != spec.dim()) throw ShapeError("jet dimension differs from generator dimension");
}

}  // namespace

Jet apply_L(const GeneratorSpec& spec, const Jet& f) {
  require_dim(spec, f);
  if (f.order() < 2) throw ShapeError("apply_L needs a jet of order >= 2");
  const int out_order = f.order() - 2;
  const int n = spec.dim();
  const JetMatrix G = spec.cometric_jets(f.base_point(), out_order);
  const auto b = spec.drift_jets(f.base_point(), out_order);
  Jet out = Jet::constant(0.0, out_order, f.base_point());
  for (int i = 0; i < n; ++i) {
    const Jet di = f.derivative(i);
    out += b[i] * di.truncated(out_order);
    for (int j = 0; j < n; ++j) out += G(i, j) * di.derivative(j);
  }
  return out;
}

Jet gamma(const GeneratorSpec& spec, const Jet& f, const Jet& g) {
  require_dim(spec, f);
  require_dim(spec, g);
  if (f.base_point() != g.base_point()) throw ShapeError("gamma: jets have different base points");
  const int out_order = std::min(f.order(), g.order()) - 1;
  if (out_order < 0) throw ShapeError("gamma needs jets of order >= 1");
  const int n = spec.dim();
  const JetMatrix G = spec.cometric_jets(f.base_point(), out_order);
  std::vector<Jet> df, dg;
  for (int i = 0; i < n; ++i) {
    df.push_back(f.derivative(i).truncated(out_order));
    dg.push_back(g.derivative(i).truncated(out_order));
  }
  Jet out = Jet::constant(0.0, out_order, f.base_point());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out += G(i, j) * df[i] * dg[j];
  return out;
}

Jet gamma_from_generator(const GeneratorSpec& spec, const Jet& f, const Jet& g) {
  const int order = std::min(f.order(), g.order());
  if (order < 2) throw ShapeError("generator form of gamma needs jets of order >= 2");
  const Jet ft = f.truncated(order), gt = g.truncated(order);
  const int out_order = order - 2;
  Jet out = apply_L(spec, ft * gt) - ft.truncated(out_order) * apply_L(spec, gt) -
            gt.truncated(out_order) * apply_L(spec, ft);
  return out * 0.5;
}

double gamma2(const GeneratorSpec& spec, const Jet& f) {
  if (f.order() < 3) throw ShapeError("gamma2 needs a jet of order >= 3");
  const Jet gf = gamma(spec, f, f);            // order K-1 >= 2
  const Jet lgf = apply_L(spec, gf);           // order K-3
  const Jet lf = apply_L(spec, f);             // order K-2 >= 1
  const Jet cross = gamma(spec, f.truncated(lf.order()), lf);  // order K-3
  return 0.5 * lgf.value() - cross.value();
}

double gamma2_polarized(const GeneratorSpec& spec, const Jet& f, const Jet& g) {
  return 0.25 * (gamma2(spec, f + g) - gamma2(spec, f - g));
}

double chain_rule_residual(const GeneratorSpec& spec, const Jet& composed, std::span<const double> phi_grad,
                           std::span<const Jet> components, const Jet& g) {
  if (phi_grad.size() != components.size()) throw ShapeError("chain rule: gradient length differs from component count");
  const double lhs = gamma(spec, composed, g).value();
  double rhs = 0.0;
  for (std::size_t a = 0; a < components.size(); ++a) rhs += phi_grad[a] * gamma(spec, components[a], g).value();
  return std::abs(lhs - rhs);
}

}  // namespace gammaforge
