#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "gammaforge/curvature.hpp"
#include "gammaforge/generator.hpp"
#include "gammaforge/geometry.hpp"

// Recovery of the weighted Riemannian structure from the generator alone.
//
// Every quantity here is obtained through the carre du champ evaluated on
// coordinate probes (and, for curvature, through Gamma_2); the co-metric
// coefficients of the spec are never read directly. The batch functions are
// safe to evaluate concurrently per point; results are deterministic and do
// not depend on evaluation order.
namespace gammaforge {

using Point = std::vector<double>;
using Box = std::vector<std::pair<double, double>>;

struct MetricPoint {
  Point point;
  Eigen::MatrixXd cometric;  // G^ij = Gamma(x^i, x^j)
  Eigen::MatrixXd metric;    // g_ij
  double min_eigenvalue = 0.0;
};

struct ChristoffelRecovery {
  ConnectionPoint christoffels;
  double raw_asymmetry = 0.0;     // max |Gamma^k_ij - Gamma^k_ji| before symmetrization
  double condition_number = 0.0;  // of the co-metric used in the solve
};

struct RicciPoint {
  Eigen::MatrixXd ric_mu;
  oracle::BochnerSign convention_sign = oracle::BochnerSign::Minus;
};

struct DensityReport {
  Point base;
  std::vector<Point> targets;
  std::vector<Eigen::VectorXd> drift_Z;   // Z at each target
  std::vector<double> log_rho;            // log rho(target) - log rho(base)
  double one_form_closedness = 0.0;       // max |d_i Z_j - d_j Z_i| over sampled path points
  double path_independence_residual = 0.0;
};

struct ConjugacyReport {
  std::vector<Point> samples;
  std::vector<double> gamma_residuals;
  std::vector<double> metric_pullback_residuals;
  double measure_ratio_variation = 0.0;

  double max_gamma_residual() const;
  double max_metric_residual() const;
};

/// Closedness above this rejects the generator as non-symmetric.
inline constexpr double kClosednessTolerance = 1e-6;

/// G^ij(x) = Gamma(x^i, x^j)(x).
Eigen::MatrixXd recover_cometric(const GeneratorSpec& spec, std::span<const double> x);

/// Jets of Gamma(x^i, x^j) of the given order.
JetMatrix recover_cometric_jets(const GeneratorSpec& spec, std::span<const double> x, int order);

/// g = G^-1 by Cholesky factorization. DegeneracyError when min eigenvalue <= 1e-10.
MetricPoint recover_metric(const GeneratorSpec& spec, std::span<const double> x);

/// Levi-Civita connection from the intrinsic Koszul identity
///   <nabla_{grad a} grad b, grad c> = 1/2 (Gamma(a, Gamma(b, c)) + Gamma(c, Gamma(a, b)) - Gamma(b, Gamma(a, c)))
/// on coordinate triples, which gives G^ip G^jq Gamma^m_pq and is solved for Gamma^m
/// with the Cholesky factor of G.
ChristoffelRecovery recover_christoffels_intrinsic(const GeneratorSpec& spec, std::span<const double> x);

/// Intrinsic Christoffel symbols as jets of `order`, indexed [(k * n + i) * n + j].
std::vector<Jet> recover_christoffel_jets(const GeneratorSpec& spec, std::span<const double> x, int order);

/// Bakry-Emery Ricci tensor from Gamma_2 on probes f_i with grad f_i = d_i and
/// vanishing covariant Hessian at x (coordinate Hessian set to Gamma^k_ab df_k).
RicciPoint recover_ricci_mu(const GeneratorSpec& spec, std::span<const double> x,
                            oracle::BochnerSign convention = oracle::BochnerSign::Minus);

/// Z^j = L x^j - Delta_g x^j = b^j + G^ik Gamma^j_ik.
Eigen::VectorXd recover_drift(const GeneratorSpec& spec, std::span<const double> x);

/// Jets of the lowered drift one-form Z_j = g_jk Z^k of the given order.
std::vector<Jet> recover_drift_form_jets(const GeneratorSpec& spec, std::span<const double> x, int order);

/// max |d_i Z_j - d_j Z_i| at x.
double drift_closedness(const GeneratorSpec& spec, std::span<const double> x);

/// Jet of log rho at x with value 0 (the additive constant is free),
/// first derivatives Z_j and second derivatives d_i Z_j (symmetrized).
Jet recovered_log_density_jet(const GeneratorSpec& spec, std::span<const double> x);

/// log rho(target) - log rho(base) by Gauss-Legendre integration of Z along
/// the straight chart segment (16 nodes on each of 8 sub-segments), with an
/// axis-parallel path as a path-independence check. NonSymmetricError when
/// closedness exceeds kClosednessTolerance.
DensityReport recover_log_density(const GeneratorSpec& spec, std::span<const double> base,
                                  const std::vector<Point>& targets);

/// Grid-graph approximation of the intrinsic distance: shortest path on a
/// (resolution + 1)^n lattice over `box` (8-neighbour in 2D, 2-neighbour in 1D)
/// with edge length sqrt(dx^T g(midpoint) dx). Endpoints are snapped to the
/// nearest lattice node; the straight snap segments are added to the length.
double intrinsic_distance(const GeneratorSpec& spec, const Box& box, int resolution, std::span<const double> x,
                          std::span<const double> y);

/// Generator-level diffusion-equivalence check of phi: A -> B.
ConjugacyReport check_conjugacy(const GeneratorSpec& spec_a, const GeneratorSpec& spec_b, const CoefficientField& phi,
                                const std::vector<Point>& samples);

}  // namespace gammaforge
