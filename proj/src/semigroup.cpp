#include "gammaforge/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gammaforge/errors.hpp"
#include "gammaforge/generator.hpp"

namespace gammaforge {

PeriodicGrid PeriodicGrid::make(std::vector<int> shape, std::vector<double> length, std::vector<double> origin) {
  PeriodicGrid g;
  g.dim = static_cast<int>(shape.size());
  if (g.dim != 1 && g.dim != 2) throw InputError("periodic grids are 1D or 2D");
  if (length.size() != shape.size()) throw InputError("grid needs one box length per axis");
  if (origin.empty()) origin.assign(shape.size(), 0.0);
  if (origin.size() != shape.size()) throw InputError("grid needs one origin per axis");
  for (int i = 0; i < g.dim; ++i) {
    if (shape[i] < 16) throw InputError("grid shape must be at least 16 per axis");
    if (!(length[i] > 0.0) || !std::isfinite(length[i])) throw InputError("grid box lengths must be positive");
    g.spacing.push_back(length[i] / shape[i]);
  }
  g.shape = std::move(shape);
  g.length = std::move(length);
  g.origin = std::move(origin);
  return g;
}

int PeriodicGrid::size() const {
  int n = 1;
  for (int s : shape) n *= s;
  return n;
}

std::vector<double> PeriodicGrid::coordinates(int v) const {
  std::vector<double> x(static_cast<std::size_t>(dim));
  x[0] = origin[0] + (v % shape[0]) * spacing[0];
  if (dim == 2) x[1] = origin[1] + (v / shape[0]) * spacing[1];
  return x;
}

int PeriodicGrid::neighbor(int v, int axis, int step) const {
  int i = v % shape[0];
  int j = dim == 2 ? v / shape[0] : 0;
  if (axis == 0) i = (i + step + shape[0]) % shape[0];
  else j = (j + step + shape[1]) % shape[1];
  return i + j * shape[0];
}

DiscreteGenerator::DiscreteGenerator(PeriodicGrid grid, Eigen::SparseMatrix<double> stiffness, GridField mu)
    : grid_(std::move(grid)), stiffness_(std::move(stiffness)), mu_(std::move(mu)) {
  if (stiffness_.rows() != grid_.size() || stiffness_.cols() != grid_.size() || mu_.size() != grid_.size())
    throw ShapeError("discrete generator sizes do not match the grid");
  if ((mu_.array() <= 0.0).any()) throw DomainError("vertex measure must be positive");
}

GridField DiscreteGenerator::apply(const GridField& u) const {
  return -(stiffness_ * u).cwiseQuotient(mu_);
}

double DiscreteGenerator::inner(const GridField& f, const GridField& g) const {
  return (f.cwiseProduct(g)).dot(mu_);
}

double DiscreteGenerator::monotone_step_bound() const {
  double bound = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mu_.size(); ++v) {
    const double kvv = stiffness_.coeff(v, v);
    if (kvv > 0.0) bound = std::min(bound, 2.0 * mu_(v) / kvv);
  }
  return bound;
}

DiscreteGenerator build_discrete_generator(const CoefficientField& metric, const CoefficientField& log_rho,
                                           const PeriodicGrid& grid) {
  const int n = grid.dim;
  if (metric.dim() != n || metric.shape() != CoefficientField::Shape::SymmetricMatrix)
    throw ShapeError("grid metric must be a symmetric field of the grid dimension");
  if (log_rho.dim() != n || log_rho.shape() != CoefficientField::Shape::Scalar)
    throw ShapeError("log density must be a scalar field of the grid dimension");
  double cell = 1.0;
  for (double h : grid.spacing) cell *= h;

  auto density = [&](const std::vector<double>& x, int axis) {
    const Eigen::MatrixXd g = metric.matrix_value(x);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (i != j && std::abs(g(i, j)) > 1e-14)
          throw UnsupportedError("grid assembly supports diagonal metrics only");
      if (!(g(i, i) > kSpdThreshold))
        throw DegeneracyError("metric is not positive definite on the grid", g(i, i));
    }
    const double vol = std::exp(log_rho.scalar_value(x)) * std::sqrt(g.diagonal().prod());
    return axis < 0 ? vol : vol / g(axis, axis);
  };

  const int size = grid.size();
  GridField mu(size);
  std::vector<Eigen::Triplet<double>> entries;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
  for (int v = 0; v < size; ++v) {
    const auto x = grid.coordinates(v);
    mu(v) = density(x, -1) * cell;
    for (int axis = 0; axis < n; ++axis) {
      auto mid = x;
      mid[axis] += 0.5 * grid.spacing[axis];
      const double h = grid.spacing[axis];
      const double w = density(mid, axis) * cell / (h * h);
      const int u = grid.neighbor(v, axis, +1);
      entries.emplace_back(v, u, -w);
      entries.emplace_back(u, v, -w);
      diag(v) += w;
      diag(u) += w;
    }
  }
  for (int v = 0; v < size; ++v) entries.emplace_back(v, v, diag(v));
  Eigen::SparseMatrix<double> K(size, size);
  K.setFromTriplets(entries.begin(), entries.end());
  return DiscreteGenerator(grid, std::move(K), std::move(mu));
}

HeatStepper::HeatStepper(const DiscreteGenerator& gen, double dt) : gen_(&gen), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InputError("time step must be positive");
  sub_dt_ = std::min(dt, gen.monotone_step_bound());
}

const HeatStepper::Factor& HeatStepper::factor_for(double dt) {
  for (const auto& f : cache_)
    if (std::abs(f.dt - dt) <= 1e-14 * dt) return f;
  const int size = gen_->grid().size();
  Eigen::SparseMatrix<double> M(size, size);
  M.reserve(Eigen::VectorXi::Constant(size, 1));
  for (int v = 0; v < size; ++v) M.insert(v, v) = gen_->mu()(v);
  const Eigen::SparseMatrix<double> lhs = M + (0.5 * dt) * gen_->stiffness();
  Factor f{dt, M - (0.5 * dt) * gen_->stiffness(), std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>()};
  f.solver->compute(lhs);
  if (f.solver->info() != Eigen::Success) throw NumericalError("Crank-Nicolson factorization failed");
  cache_.push_back(std::move(f));
  return cache_.back();
}

GridField HeatStepper::advance(const GridField& u, double duration) {
  if (u.size() != gen_->grid().size()) throw ShapeError("field size differs from grid size");
  if (duration < 0.0) throw InputError("duration must be non-negative");
  if (duration == 0.0) return u;
  const int steps = static_cast<int>(std::ceil(duration / sub_dt_ * (1.0 - 1e-12)));
  const double step = duration / std::max(steps, 1);
  const Factor& f = factor_for(step);
  GridField x = u;
  for (int s = 0; s < std::max(steps, 1); ++s) {
    x = f.solver->solve(f.rhs * x);
    if (f.solver->info() != Eigen::Success) throw NumericalError("Crank-Nicolson solve failed");
  }
  return x;
}

GridField step_heat(const DiscreteGenerator& gen, const GridField& u, double t, double dt) {
  HeatStepper stepper(gen, dt);
  return stepper.advance(u, t);
}

GridField carre_du_champ(const DiscreteGenerator& gen, const GridField& f, const GridField& g) {
  const GridField fg = f.cwiseProduct(g);
  return 0.5 * (gen.apply(fg) - f.cwiseProduct(gen.apply(g)) - g.cwiseProduct(gen.apply(f)));
}

GammaLimitTable gamma_via_semigroup_limit(const DiscreteGenerator& gen, const GridField& f, const GridField& g,
                                          const std::vector<double>& t_list, int steps_per_t) {
  if (t_list.size() < 3) throw InputError("the semigroup limit needs at least three times");
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    if (!(t_list[k] > 0.0)) throw InputError("times must be positive");
    if (k > 0 && std::abs(t_list[k - 1] / t_list[k] - 2.0) > 1e-9)
      throw InputError("times must halve at each step");
  }
  if (steps_per_t < 1) throw InputError("steps per time must be positive");
  GammaLimitTable out;
  out.formula = carre_du_champ(gen, f, g);
  const GridField fg = f.cwiseProduct(g);
  const double scale = std::max(1.0, fg.cwiseAbs().maxCoeff());
  std::vector<GridField> quotients;
  for (double t : t_list) {
    HeatStepper stepper(gen, t / steps_per_t);
    const GridField q = (stepper.advance(fg, t) - stepper.advance(f, t).cwiseProduct(stepper.advance(g, t))) / (2.0 * t);
    out.t.push_back(t);
    out.sup_error.push_back((q - out.formula).cwiseAbs().maxCoeff());
    quotients.push_back(q);
  }
  for (std::size_t k = 1; k < out.sup_error.size(); ++k) {
    const double prev = out.sup_error[k - 1], cur = out.sup_error[k];
    out.ratio.push_back(cur > 0.0 ? prev / cur : (prev > 0.0 ? std::numeric_limits<double>::infinity() : 1.0));
    // errors at rounding level carry no convergence information
    const double noise = 64 * std::numeric_limits<double>::epsilon() * scale / (2.0 * t_list[k]);
    if (cur > prev && cur > noise) out.non_monotone = true;
  }
  const std::size_t last = quotients.size() - 1;
  out.limit = 2.0 * quotients[last] - quotients[last - 1];
  out.limit_error = (out.limit - out.formula).cwiseAbs().maxCoeff();
  return out;
}

void LabelExperiment::validate(const DiscreteGenerator& gen) const {
  if (static_cast<int>(in_set.size()) != gen.grid().size()) throw ShapeError("label set size differs from grid size");
  double inside = 0.0;
  for (int v = 0; v < gen.grid().size(); ++v)
    if (in_set[v]) inside += gen.mu()(v);
  if (!(inside > 0.0) || !(inside < gen.total_mass())) throw InputError("label set must have 0 < mu(E) < mu(total)");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0)) throw InputError("experiment times must be positive");
    if (k > 0 && !(times[k] > times[k - 1])) throw InputError("experiment times must increase");
  }
}

GridField LabelExperiment::indicator() const {
  GridField u(static_cast<Eigen::Index>(in_set.size()));
  for (std::size_t v = 0; v < in_set.size(); ++v) u(static_cast<Eigen::Index>(v)) = in_set[v] ? 1.0 : 0.0;
  return u;
}

double binary_entropy(double p) {
  double h = 0.0;
  if (p > 0.0) h -= p * std::log(p);
  if (p < 1.0) h -= (1.0 - p) * std::log1p(-p);
  return h;
}

double equilibrium_posterior(const DiscreteGenerator& gen, const LabelExperiment& exp) {
  return gen.mu().dot(exp.indicator()) / gen.total_mass();
}

double conditional_entropy(const DiscreteGenerator& gen, const GridField& posterior) {
  double h = 0.0;
  for (int v = 0; v < posterior.size(); ++v) h += gen.mu()(v) * binary_entropy(std::clamp(posterior(v), 0.0, 1.0));
  return h / gen.total_mass();
}

DissipationCheck dissipation_check(const DiscreteGenerator& gen, const GridField& posterior_minus,
                                   const GridField& posterior, const GridField& posterior_plus, double t,
                                   double delta) {
  constexpr double kEdge = 1e-12;
  for (int v = 0; v < posterior.size(); ++v) {
    const double u = posterior(v);
    if (!(u > kEdge && u < 1.0 - kEdge)) {
      std::ostringstream msg;
      msg << "t too small: posterior within 1e-12 of {0,1} at t = " << t;
      throw DomainError(msg.str());
    }
  }
  DissipationCheck out;
  out.t = t;
  out.fd_derivative =
      (conditional_entropy(gen, posterior_plus) - conditional_entropy(gen, posterior_minus)) / (2.0 * delta);
  const GridField gam = carre_du_champ(gen, posterior, posterior);
  double integral = 0.0;
  for (int v = 0; v < posterior.size(); ++v)
    integral += gen.mu()(v) * gam(v) / (posterior(v) * (1.0 - posterior(v)));
  out.gamma_integral = integral / gen.total_mass();
  out.sign = out.fd_derivative >= 0.0 ? 1 : -1;
  const double diff = std::abs(out.fd_derivative - out.sign * out.gamma_integral);
  constexpr double kFloor = 1e-10;
  out.residual = std::abs(out.gamma_integral) > kFloor ? diff / std::abs(out.gamma_integral) : diff;
  return out;
}

namespace {

constexpr double kDerivativeStep = 1.0 / 50.0;

struct Evolution {
  HeatStepper stepper;
  GridField u0;
  GridField state;
  double time = 0.0;

  GridField at(double t) {
    if (t < time) {
      state = u0;
      time = 0.0;
    }
    state = stepper.advance(state, t - time);
    time = t;
    return state;
  }
};

}  // namespace

DissipationCheck dissipation_residual(const DiscreteGenerator& gen, const LabelExperiment& exp, double t, double dt) {
  LabelExperiment single = exp;
  single.times = {t};
  single.validate(gen);
  Evolution ev{HeatStepper(gen, dt), exp.indicator(), exp.indicator()};
  const double delta = t * kDerivativeStep;
  const GridField minus = ev.at(t - delta);
  const GridField mid = ev.at(t);
  const GridField plus = ev.at(t + delta);
  return dissipation_check(gen, minus, mid, plus, t, delta);
}

std::vector<LabelRow> run_label_experiment(const DiscreteGenerator& gen, const LabelExperiment& exp, double dt,
                                           bool with_dissipation) {
  exp.validate(gen);
  const double prior = binary_entropy(equilibrium_posterior(gen, exp));
  Evolution ev{HeatStepper(gen, dt), exp.indicator(), exp.indicator()};
  std::vector<LabelRow> rows;
  for (double t : exp.times) {
    LabelRow row;
    row.t = t;
    if (with_dissipation) {
      const double delta = t * kDerivativeStep;
      const GridField minus = ev.at(t - delta);
      const GridField mid = ev.at(t);
      HeatStepper ahead(gen, dt);
      const GridField plus = ahead.advance(mid, delta);
      try {
        row.dissipation = dissipation_check(gen, minus, mid, plus, t, delta);
        row.has_dissipation = true;
      } catch (const DomainError&) {
        row.has_dissipation = false;
      }
      row.H = conditional_entropy(gen, mid);
    } else {
      row.H = conditional_entropy(gen, ev.at(t));
    }
    row.I = prior - row.H;
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<double, double>> conditional_entropy_curve(const DiscreteGenerator& gen,
                                                                 const LabelExperiment& exp, double dt) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : run_label_experiment(gen, exp, dt, false)) out.emplace_back(r.t, r.H);
  return out;
}

std::vector<std::pair<double, double>> mutual_information_curve(const DiscreteGenerator& gen,
                                                                const LabelExperiment& exp, double dt) {
  std::vector<std::pair<double, double>> out;
  for (const auto& r : run_label_experiment(gen, exp, dt, false)) out.emplace_back(r.t, r.I);
  return out;
}

}  // namespace gammaforge
