#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gammaforge/coefficient_field.hpp"
#include "gammaforge/jet_matrix.hpp"

namespace gammaforge {

/// Declared weighted-manifold data (g_ij, log rho) a generator was built from.
struct WeightedForm {
  CoefficientField metric;       // symmetric
  CoefficientField log_density;  // scalar
};

/// Diffusion generator in coefficient form,
///
///   L f = G^ij d_i d_j f + b^i d_i f,
///
/// with symmetric co-metric G and drift b given as expressions. Immutable.
class GeneratorSpec {
 public:
  GeneratorSpec(int dim, CoefficientField cometric, CoefficientField drift, std::string chart = {},
                std::optional<WeightedForm> weighted_form = std::nullopt);

  int dim() const { return dim_; }
  const CoefficientField& cometric() const { return cometric_; }
  const CoefficientField& drift() const { return drift_; }
  const std::string& chart() const { return chart_; }
  const std::optional<WeightedForm>& weighted_form() const { return weighted_form_; }

  /// Jets of G^ij at `x`. Checks that the value part is positive definite
  /// (minimum eigenvalue > 1e-10) and throws DegeneracyError otherwise.
  JetMatrix cometric_jets(std::span<const double> x, int order) const;
  std::vector<Jet> drift_jets(std::span<const double> x, int order) const;

 private:
  int dim_;
  CoefficientField cometric_;
  CoefficientField drift_;
  std::string chart_;
  std::optional<WeightedForm> weighted_form_;
};

inline constexpr double kSpdThreshold = 1e-10;

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const Eigen::MatrixXd& symmetric);
/// Throws DegeneracyError unless min_eigenvalue > kSpdThreshold.
void require_positive_definite(const Eigen::MatrixXd& symmetric, const char* what);

/// L f as a jet of order f.order() - 2.
Jet apply_L(const GeneratorSpec& spec, const Jet& f);

/// Carre du champ by the coordinate contraction G^ij d_i f d_j g; jet of
/// order min(f.order, g.order) - 1.
Jet gamma(const GeneratorSpec& spec, const Jet& f, const Jet& g);

/// Carre du champ through the generator, (L(fg) - f Lg - g Lf) / 2; jet of
/// order min(f.order, g.order) - 2. Cross-check for `gamma`.
Jet gamma_from_generator(const GeneratorSpec& spec, const Jet& f, const Jet& g);

/// Gamma_2(f) = L Gamma(f) / 2 - Gamma(f, Lf) at the base point. Needs f.order >= 3.
double gamma2(const GeneratorSpec& spec, const Jet& f);

/// (Gamma_2(f + g) - Gamma_2(f - g)) / 4.
double gamma2_polarized(const GeneratorSpec& spec, const Jet& f, const Jet& g);

/// |Gamma(Phi o F, g) - sum_a (d_a Phi)(F) Gamma(f_a, g)| at the base point.
/// `composed` is the jet of Phi o F built by jet arithmetic and `phi_grad`
/// holds (d_a Phi)(F(x)).
double chain_rule_residual(const GeneratorSpec& spec, const Jet& composed, std::span<const double> phi_grad,
                           std::span<const Jet> components, const Jet& g);

}  // namespace gammaforge
