#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "gammaforge/coefficient_field.hpp"

// Grid realization of the heat semigroup on a periodic box, plus the
// noisy-label entropy experiments built on top of it.
namespace gammaforge {

using GridField = Eigen::VectorXd;

/// Periodic grid on [origin, origin + length) per axis; vertex v has
/// multi-index (v % shape[0], v / shape[0]) in 2D.
struct PeriodicGrid {
  int dim = 0;
  std::vector<int> shape;
  std::vector<double> origin;
  std::vector<double> length;
  std::vector<double> spacing;

  /// Throws InputError unless dim in {1, 2}, shape >= 16 and lengths > 0.
  static PeriodicGrid make(std::vector<int> shape, std::vector<double> length, std::vector<double> origin = {});

  int size() const;
  std::vector<double> coordinates(int v) const;
  /// Vertex one step along `axis` (step = +1 or -1), wrapping around.
  int neighbor(int v, int axis, int step) const;
  /// Field with f(x) at every vertex.
  template <class F>
  GridField sample(F&& f) const {
    GridField out(size());
    for (int v = 0; v < size(); ++v) out(v) = f(coordinates(v));
    return out;
  }
};

/// Symmetric divergence-form discretization
///   (L h)_v = (1 / mu_v) sum_e w_e (h_u - h_v).
/// Immutable after assembly.
class DiscreteGenerator {
 public:
  DiscreteGenerator(PeriodicGrid grid, Eigen::SparseMatrix<double> stiffness, GridField mu);

  const PeriodicGrid& grid() const { return grid_; }
  /// K with K_uv = -w_uv and K_vv = sum of incident weights; L = -M^-1 K.
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const GridField& mu() const { return mu_; }
  double total_mass() const { return mu_.sum(); }

  GridField apply(const GridField& u) const;
  /// <f, g>_mu
  double inner(const GridField& f, const GridField& g) const;
  /// Largest dt for which a Crank-Nicolson step keeps all matrix entries
  /// non-negative (discrete maximum principle).
  double monotone_step_bound() const;

 private:
  PeriodicGrid grid_;
  Eigen::SparseMatrix<double> stiffness_;
  GridField mu_;
};

/// Edge weight for (v, v + h e_i): (rho sqrt(det g) g^ii)(midpoint) * cell / h_i^2,
/// vertex weight mu_v = (rho sqrt(det g))(v) * cell, where cell is the product of spacings.
/// UnsupportedError for a non-diagonal metric; DegeneracyError for a non-positive diagonal.
DiscreteGenerator build_discrete_generator(const CoefficientField& metric, const CoefficientField& log_rho,
                                           const PeriodicGrid& grid);

/// Crank-Nicolson stepper with a cached factorization of M + dt/2 K.
/// The requested dt is split into equal substeps no larger than the
/// monotone bound.
class HeatStepper {
 public:
  HeatStepper(const DiscreteGenerator& gen, double dt);

  double dt() const { return dt_; }
  double substep() const { return sub_dt_; }
  /// Advance by `duration`, split into ceil(duration / dt) equal steps of
  /// at most dt. Each distinct step length is factorized once and cached.
  GridField advance(const GridField& u, double duration);

 private:
  struct Factor {
    double dt;
    Eigen::SparseMatrix<double> rhs;
    std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> solver;
  };
  const Factor& factor_for(double dt);

  const DiscreteGenerator* gen_;
  double dt_;
  double sub_dt_;
  std::vector<Factor> cache_;
};

/// P_t u by Crank-Nicolson with step dt (see HeatStepper).
GridField step_heat(const DiscreteGenerator& gen, const GridField& u, double t, double dt);

/// Gamma_disc(f, g) = (L(fg) - f Lg - g Lf) / 2.
GridField carre_du_champ(const DiscreteGenerator& gen, const GridField& f, const GridField& g);

struct GammaLimitTable {
  std::vector<double> t;
  std::vector<double> sup_error;  // || Q_t - Gamma_disc ||_inf
  std::vector<double> ratio;      // sup_error[k - 1] / sup_error[k], one fewer entry than t
  GridField limit;                // 2 Q_{t_last} - Q_{t_prev}
  GridField formula;              // Gamma_disc(f, g)
  double limit_error = 0.0;       // || limit - formula ||_inf
  bool non_monotone = false;      // errors failed to decrease: t too large
};

/// Q_t = (P_t(fg) - P_t f P_t g) / (2t) over a list of at least three
/// times halving at each step, with a Richardson limit from the last pair.
/// Each P_t uses `steps_per_t` Crank-Nicolson steps (further split by the monotone bound).
GammaLimitTable gamma_via_semigroup_limit(const DiscreteGenerator& gen, const GridField& f, const GridField& g,
                                          const std::vector<double>& t_list, int steps_per_t = 32);

struct LabelExperiment {
  std::vector<char> in_set;  // 1 for vertices of E
  std::vector<double> times;

  /// Throws InputError unless 0 < mu(E) < mu(total) and times are positive and increasing.
  void validate(const DiscreteGenerator& gen) const;
  GridField indicator() const;
};

/// Binary entropy in nats with 0 log 0 = 0.
double binary_entropy(double p);

/// mu(E) / mu(total): the posterior the chain relaxes to.
double equilibrium_posterior(const DiscreteGenerator& gen, const LabelExperiment& exp);

/// -sum_v p_v [u log u + (1 - u) log(1 - u)] with p = mu / mu(total).
double conditional_entropy(const DiscreteGenerator& gen, const GridField& posterior);

struct DissipationCheck {
  double t = 0.0;
  double fd_derivative = 0.0;   // central difference of H with step t / 50
  double gamma_integral = 0.0;  // sum_v p_v Gamma_disc(u) / (u (1 - u)), always >= 0
  double residual = 0.0;        // |fd - sign * integral| / |integral|, absolute below 1e-10
  int sign = 0;                 // sign of the measured derivative
};

/// The identity measured at one time. DomainError ("t too small") when the
/// posterior is within 1e-12 of 0 or 1 somewhere.
DissipationCheck dissipation_check(const DiscreteGenerator& gen, const GridField& posterior_minus,
                                   const GridField& posterior, const GridField& posterior_plus, double t,
                                   double delta);

DissipationCheck dissipation_residual(const DiscreteGenerator& gen, const LabelExperiment& exp, double t, double dt);

struct LabelRow {
  double t = 0.0;
  double H = 0.0;
  double I = 0.0;
  bool has_dissipation = false;  // false when t is too small for the identity
  DissipationCheck dissipation;
};

/// H(t) and I(t) = h(mu(E)) - H(t) at every requested time, with the
/// dissipation identity checked at each time where it is defined.
std::vector<LabelRow> run_label_experiment(const DiscreteGenerator& gen, const LabelExperiment& exp, double dt,
                                           bool with_dissipation = true);

std::vector<std::pair<double, double>> conditional_entropy_curve(const DiscreteGenerator& gen,
                                                                 const LabelExperiment& exp, double dt);
std::vector<std::pair<double, double>> mutual_information_curve(const DiscreteGenerator& gen,
                                                                const LabelExperiment& exp, double dt);

}  // namespace gammaforge
