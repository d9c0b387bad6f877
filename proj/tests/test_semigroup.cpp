#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gammaforge/catalog.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/semigroup.hpp"
#include "helpers.hpp"

using namespace gammaforge;
using doctest::Approx;

namespace {

const double kTwoPi = 2 * std::numbers::pi;

DiscreteGenerator circle(int n, const char* log_rho = "0") {
  return build_discrete_generator(CoefficientField::symmetric(1, {{"1"}}), CoefficientField::scalar(1, log_rho),
                                  PeriodicGrid::make({n}, {kTwoPi}));
}

DiscreteGenerator torus(int n) {
  const auto& m = get_manifold("torus_conformal");
  return build_discrete_generator(m.spec.weighted_form()->metric, m.spec.weighted_form()->log_density,
                                  PeriodicGrid::make({n, n}, {kTwoPi, kTwoPi}));
}

LabelExperiment half_circle(const DiscreteGenerator& gen, std::vector<double> times) {
  LabelExperiment exp;
  exp.times = std::move(times);
  for (int v = 0; v < gen.grid().size(); ++v) exp.in_set.push_back(gen.grid().coordinates(v)[0] < std::numbers::pi);
  return exp;
}

GridField sample1(const DiscreteGenerator& gen, double (*f)(double)) {
  return gen.grid().sample([&](const std::vector<double>& x) { return f(x[0]); });
}

}  // namespace

TEST_CASE("grid construction") {
  const auto g = PeriodicGrid::make({16, 32}, {1.0, 2.0}, {-1.0, 0.0});
  CHECK(g.size() == 512);
  CHECK(g.coordinates(17)[0] == Approx(-1.0 + 1.0 / 16));
  CHECK(g.coordinates(17)[1] == Approx(1.0 / 16));
  CHECK(g.neighbor(15, 0, 1) == 0);
  CHECK(g.neighbor(0, 1, -1) == 31 * 16);
  CHECK_THROWS_AS(PeriodicGrid::make({8}, {1.0}), InputError);
  CHECK_THROWS_AS(PeriodicGrid::make({16}, {0.0}), InputError);
  CHECK_THROWS_AS(PeriodicGrid::make({16, 16, 16}, {1.0, 1.0, 1.0}), InputError);
}

TEST_CASE("1D flat circle weights") {
  const auto gen = circle(64);
  const double h = kTwoPi / 64;
  const auto& K = gen.stiffness();
  CHECK(K.coeff(0, 1) == Approx(-1.0 / h).epsilon(1e-14));
  CHECK(K.coeff(0, 63) == Approx(-1.0 / h).epsilon(1e-14));
  CHECK(K.coeff(0, 0) == Approx(2.0 / h).epsilon(1e-14));
  for (int v = 0; v < 64; ++v) CHECK(gen.mu()(v) == Approx(h).epsilon(1e-14));

  const GridField x = gen.grid().sample([](const std::vector<double>& p) { return std::sin(p[0]); });
  const GridField lx = gen.apply(x);
  CHECK(lx(5) == Approx((x(6) - 2 * x(5) + x(4)) / (h * h)).epsilon(1e-12));
}

TEST_CASE("constant density scales weights but not L") {
  const auto a = circle(64), b = circle(64, "log(2)");
  CHECK(b.stiffness().coeff(3, 4) == Approx(2 * a.stiffness().coeff(3, 4)).epsilon(1e-14));
  CHECK(b.mu()(3) == Approx(2 * a.mu()(3)).epsilon(1e-14));
  const GridField u = sample1(a, [](double x) { return std::cos(3 * x) + x; });
  CHECK(max_abs(a.apply(u) - b.apply(u)) <= 1e-10);
}

TEST_CASE("non-diagonal or degenerate metrics are rejected") {
  const auto grid = PeriodicGrid::make({16, 16}, {1.0, 1.0});
  CHECK_THROWS_AS(build_discrete_generator(CoefficientField::symmetric(2, {{"1", "0.1"}, {"0.1", "1"}}),
                                           CoefficientField::scalar(2, "0"), grid),
                  UnsupportedError);
  CHECK_THROWS_AS(build_discrete_generator(CoefficientField::symmetric(2, {{"1", "0"}, {"0", "0"}}),
                                           CoefficientField::scalar(2, "0"), grid),
                  DegeneracyError);
}

TEST_CASE("discrete symmetry, conservativity and summation by parts") {
  const auto gen = torus(32);
  const auto& K = gen.stiffness();
  const Eigen::SparseMatrix<double> Kt = K.transpose();
  CHECK((K - Kt).norm() == 0.0);
  const GridField one = GridField::Ones(gen.grid().size());
  CHECK(gen.apply(one).cwiseAbs().maxCoeff() <= 1e-13);

  Rng rng(testing::test_seed());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridField f(gen.grid().size()), g(gen.grid().size());
  for (int v = 0; v < gen.grid().size(); ++v) {
    f(v) = u(rng);
    g(v) = u(rng);
  }
  // <f, L g> = <L f, g>
  const double lg = gen.inner(f, gen.apply(g)), lf = gen.inner(gen.apply(f), g);
  CHECK(std::abs(lg - lf) <= 1e-12 * std::max(1.0, std::abs(lg)));
  const double gamma_total = gen.inner(carre_du_champ(gen, f, g), one);
  CHECK(std::abs(gamma_total + lg) <= 1e-12 * std::max(1.0, std::abs(lg)));
}

TEST_CASE("heat flow examples") {
  const auto gen = circle(256);
  const GridField c = GridField::Constant(256, 0.7);
  CHECK(max_abs(step_heat(gen, c, 0.3, 1e-3) - c) <= 1e-14);

  const GridField s = sample1(gen, [](double x) { return std::sin(x); });
  const GridField out = step_heat(gen, s, 0.1, 1e-3);
  CHECK(max_abs(out - std::exp(-0.1) * s) <= 1e-4);

  const auto exp = half_circle(gen, {0.5});
  const GridField ind = exp.indicator();
  const GridField p = step_heat(gen, ind, 0.5, 1e-3);
  CHECK(p.minCoeff() > 0.0);
  CHECK(p.maxCoeff() < 1.0);
  CHECK(std::abs(gen.inner(p, GridField::Ones(256)) - gen.inner(ind, GridField::Ones(256))) <=
        1e-12 * gen.total_mass());
}

TEST_CASE("heat flow on the torus keeps mass and the maximum principle") {
  const auto gen = torus(32);
  Rng rng(testing::test_seed() + 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridField f(gen.grid().size());
  for (int v = 0; v < gen.grid().size(); ++v) f(v) = u(rng);
  HeatStepper stepper(gen, 1e-2);
  CHECK(stepper.substep() <= gen.monotone_step_bound());
  GridField cur = f;
  for (int k = 0; k < 5; ++k) {
    const GridField next = stepper.advance(cur, 0.02);
    const double m0 = gen.inner(cur, GridField::Ones(cur.size())), m1 = gen.inner(next, GridField::Ones(cur.size()));
    CHECK(std::abs(m1 - m0) <= 1e-12 * std::abs(m0));
    CHECK(next.maxCoeff() <= cur.maxCoeff() + 1e-12);
    CHECK(next.minCoeff() >= cur.minCoeff() - 1e-12);
    cur = next;
  }
}

TEST_CASE("discrete carre du champ approximates the continuum one") {
  const auto gen = circle(512);
  const GridField s = sample1(gen, [](double x) { return std::sin(x); });
  const GridField c2 = sample1(gen, [](double x) { return std::cos(x) * std::cos(x); });
  CHECK(max_abs(carre_du_champ(gen, s, s) - c2) <= 5e-3);
}

TEST_CASE("gamma via the semigroup limit") {
  const auto gen = circle(256);
  const std::vector<double> times{0.02, 0.01, 0.005, 0.0025};
  const GridField c = GridField::Constant(256, 1.3);
  const auto flat = gamma_via_semigroup_limit(gen, c, c, times);
  CHECK(flat.limit.cwiseAbs().maxCoeff() <= 1e-10);
  for (double e : flat.sup_error) CHECK(e <= 1e-10);

  const GridField s = sample1(gen, [](double x) { return std::sin(x); });
  const auto table = gamma_via_semigroup_limit(gen, s, s, times);
  const GridField c2 = sample1(gen, [](double x) { return std::cos(x) * std::cos(x); });
  CHECK(max_abs(table.limit - c2) <= 1e-2);
  CHECK(table.ratio.size() == 3);
  for (double r : table.ratio) {
    CHECK(r >= 1.7);
    CHECK(r <= 2.3);
  }
  CHECK_FALSE(table.non_monotone);
  CHECK(table.sup_error.front() == Approx(2 * times.front()).epsilon(0.1));

  CHECK_THROWS_AS(gamma_via_semigroup_limit(gen, s, s, {0.02, 0.01}), InputError);
  CHECK_THROWS_AS(gamma_via_semigroup_limit(gen, s, s, {0.02, 0.01, 0.004}), InputError);
}

TEST_CASE("entropy helpers") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == Approx(std::log(2.0)));
  const auto gen = circle(64);
  const auto exp = half_circle(gen, {0.1});
  CHECK(equilibrium_posterior(gen, exp) == Approx(0.5));
  CHECK(conditional_entropy(gen, exp.indicator()) == 0.0);
  CHECK(conditional_entropy(gen, GridField::Constant(64, 0.5)) == Approx(std::log(2.0)));
}

TEST_CASE("label experiment validation") {
  const auto gen = circle(64);
  LabelExperiment empty;
  empty.in_set.assign(64, 0);
  empty.times = {0.1};
  CHECK_THROWS_AS(empty.validate(gen), InputError);
  auto exp = half_circle(gen, {0.2, 0.1});
  CHECK_THROWS_AS(exp.validate(gen), InputError);
  exp.times = {0.0, 0.1};
  CHECK_THROWS_AS(exp.validate(gen), InputError);
}

TEST_CASE("conditional entropy and mutual information curves") {
  const auto gen = circle(128);
  const auto exp = half_circle(gen, {1e-4, 1e-3, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 40.0});
  const auto H = conditional_entropy_curve(gen, exp, 1e-3);
  const auto I = mutual_information_curve(gen, exp, 1e-3);
  REQUIRE(H.size() == exp.times.size());
  CHECK(H.front().second < 0.1);
  CHECK(H.back().second == Approx(std::log(2.0)).epsilon(1e-6));
  CHECK(I.front().second == Approx(std::log(2.0)).epsilon(0.2));
  CHECK(std::abs(I.back().second) <= 1e-6);
  for (std::size_t k = 1; k < H.size(); ++k) {
    CHECK(H[k].second >= H[k - 1].second - 1e-10);
    CHECK(I[k].second <= I[k - 1].second + 1e-10);
    CHECK(H[k].second >= 0.0);
    CHECK(H[k].second <= std::log(2.0) + 1e-12);
  }
}

TEST_CASE("dissipation identity") {
  const auto gen = circle(512);
  const auto exp = half_circle(gen, {0.05});
  const auto fine = dissipation_residual(gen, exp, 0.05, 1e-3);
  CHECK(fine.residual <= 1e-2);
  CHECK(fine.sign == 1);
  CHECK(fine.gamma_integral > 0.0);

  const auto coarse_gen = circle(256);
  const auto coarse = dissipation_residual(coarse_gen, half_circle(coarse_gen, {0.05}), 0.05, 2e-3);
  CHECK(coarse.residual >= 2 * fine.residual);

  const auto late = dissipation_residual(gen, exp, 60.0, 1e-1);
  CHECK(std::abs(late.fd_derivative) <= 1e-10);
  CHECK(late.residual <= 1e-2);

  CHECK_THROWS_AS(dissipation_residual(gen, exp, 1e-7, 1e-8), DomainError);
}
