#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gammaforge/generator.hpp"
#include "gammaforge/geometry.hpp"
#include "gammaforge/jet_matrix.hpp"

// Classical coordinate differential geometry. Everything here works from
// metric jets and never calls into the Gamma-calculus reconstruction, so it
// can serve as the reference the reconstruction is checked against.
namespace gammaforge::oracle {

/// Jets of g_ij and of its inverse g^ij at one point.
struct MetricFieldJets {
  JetMatrix metric;
  JetMatrix inverse;

  explicit MetricFieldJets(JetMatrix g);
  int dim() const { return metric.rows(); }
  int order() const { return metric.order(); }
};

/// Metric jets of the declared truth: the spec's weighted form when present,
/// otherwise the jet inverse of the spec's co-metric coefficients.
MetricFieldJets metric_jets(const GeneratorSpec& spec, std::span<const double> x, int order);

/// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij). Needs order >= 1.
ConnectionPoint christoffels_classical(const MetricFieldJets& g);

/// Christoffel symbols as jets of order g.order() - 1, indexed [(k * n + i) * n + j].
std::vector<Jet> christoffel_jets(const MetricFieldJets& g);

/// Needs metric jets of order >= 2.
RiemannPoint riemann_tensor(const MetricFieldJets& g);

/// Ric_jk = R^i_ijk.
Eigen::MatrixXd ricci_from_riemann(const RiemannPoint& r);

/// <R(d_1, d_2) d_2, d_1> / det g for a two-dimensional metric.
double sectional_curvature(const RiemannPoint& r, const Eigen::MatrixXd& metric);

/// (nabla^2 f)_ij = d_i d_j f - Gamma^k_ij d_k f. Needs f.order() >= 2.
Eigen::MatrixXd covariant_hessian(const Jet& f, const ConnectionPoint& connection);

/// Hilbert-Schmidt norm squared g^ia g^jb H_ij H_ab.
double hilbert_schmidt_sq(const Eigen::MatrixXd& hessian, const Eigen::MatrixXd& cometric);

/// tr_g(nabla^2 f) + g^ij d_i log rho d_j f.
double weighted_laplacian(const MetricFieldJets& g, const Jet& log_rho, const Jet& f);

/// Sign s in Ric_mu = Ric_g + s * nabla^2 log rho.
enum class BochnerSign : int { Minus = -1, Plus = +1 };

/// Bakry-Emery Ricci tensor Ric_g + s nabla^2 log rho from the declared truth.
Eigen::MatrixXd ricci_mu(const GeneratorSpec& spec, std::span<const double> x, BochnerSign sign);

/// |Gamma_2(f) - ||nabla^2 f||_HS^2 - (Ric_g + s nabla^2 log rho)(grad f, grad f)|.
/// Reads log rho from the spec's weighted form (InputError when absent).
double bochner_residual(const GeneratorSpec& spec, const Jet& f, BochnerSign sign);
/// Same, with log rho supplied as a jet of order >= 2 at f's base point.
double bochner_residual(const GeneratorSpec& spec, const Jet& f, BochnerSign sign, const Jet& log_rho);

struct SignResolution {
  BochnerSign sign;
  double residual_minus;  // max residual over the probes with s = -1
  double residual_plus;   // same with s = +1
};

/// Decides the Bochner sign on a weighted spec with non-trivial density by
/// evaluating both candidates on `probes` seeded random order-3 jets at
/// sample points of `box`. The winner must stay <= 1e-8 and the loser must
/// exceed 1e-2; NumericalError otherwise.
SignResolution resolve_bochner_sign(const GeneratorSpec& spec, std::span<const std::pair<double, double>> box,
                                    std::uint64_t seed, int probes = 100);

}  // namespace gammaforge::oracle
