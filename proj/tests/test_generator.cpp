#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gammaforge/catalog.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/expr.hpp"
#include "helpers.hpp"

using namespace gammaforge;
using doctest::Approx;

namespace {

Jet fn(const char* src, int dim, std::vector<double> x, int order) { return eval_jet(*parse_expr(src, dim), x, order); }

}  // namespace

TEST_CASE("apply_L examples") {
  CHECK(apply_L(testing::flat(1), fn("x1^2", 1, {0.0}, 2)).value() == 2.0);
  CHECK(apply_L(testing::ou1(), fn("x1", 1, {1.5}, 2)).value() == -1.5);
  const double theta = std::numbers::pi / 3;
  CHECK(apply_L(testing::sphere(), fn("cos(x1)", 2, {theta, 0.4}, 2)).value() == Approx(-1.0).epsilon(1e-14));
  CHECK(apply_L(testing::sphere(), fn("cos(x1)", 2, {theta, 0.4}, 4)).order() == 2);
  CHECK_THROWS_AS(apply_L(testing::flat(1), fn("x1", 1, {0.0}, 1)), ShapeError);
}

TEST_CASE("gamma examples") {
  const Jet x = Jet::coordinate(0, 2, {0.0});
  CHECK(gamma(testing::flat(1), x, x).value() == 1.0);
  Rng rng(testing::test_seed());
  const std::vector<double> at{0.3, 1.7};
  const Jet f = random_jet(at, 3, rng);
  CHECK(gamma(testing::halfplane(), f, Jet::constant(2.5, 3, at)).value() == 0.0);
  const Jet x1 = Jet::coordinate(0, 2, {0.0, 2.0});
  CHECK(gamma(testing::halfplane(), x1, x1).value() == 4.0);
  CHECK(gamma(testing::halfplane(), x1, x1).order() == 1);
}

TEST_CASE("degenerate co-metric is rejected") {
  const GeneratorSpec bad = testing::make_spec(2, {{"1", "0"}, {"0", "x2^2"}}, {"0", "0"});
  const Jet x = Jet::coordinate(0, 2, {0.0, 0.0});
  try {
    gamma(bad, x, x);
    FAIL("expected DegeneracyError");
  } catch (const DegeneracyError& e) {
    CHECK(e.min_eigenvalue() <= 1e-10);
  }
  const GeneratorSpec indefinite = testing::make_spec(2, {{"1", "2"}, {"2", "1"}}, {"0", "0"});
  CHECK_THROWS_AS(apply_L(indefinite, fn("x1^2", 2, {0.0, 0.0}, 2)), DegeneracyError);
}

TEST_CASE("gamma2 examples") {
  const double v[] = {1.0, 0.0};
  CHECK(gamma2(testing::flat(2), affine_probe(std::vector<double>{0.3, 0.1}, v, 3)) == 0.0);
  for (double x : {-1.0, 0.0, 0.4, 2.0}) {
    const double one[] = {1.0};
    CHECK(gamma2(testing::ou1(), affine_probe(std::vector<double>{x}, one, 3)) == Approx(1.0).epsilon(1e-14));
  }
  CHECK(gamma2(testing::flat(1), fn("x1^2", 1, {0.0}, 3)) == Approx(4.0));
  CHECK_THROWS_AS(gamma2(testing::flat(1), fn("x1^2", 1, {0.0}, 2)), ShapeError);
}

TEST_CASE("gamma2 polarization examples") {
  Rng rng(testing::test_seed() + 1);
  const std::vector<double> at{1.0, 0.5};
  const Jet f = random_jet(at, 3, rng);
  CHECK(gamma2_polarized(testing::sphere(), f, f) == Approx(gamma2(testing::sphere(), f)).epsilon(1e-12));
  CHECK(gamma2_polarized(testing::sphere(), f, Jet(2, 3, at)) == Approx(0.0));
  const double v[] = {1.0, 0.0}, w[] = {0.0, 1.0};
  const std::vector<double> o{0.0, 0.0};
  CHECK(gamma2_polarized(testing::flat(2), affine_probe(o, v, 3), affine_probe(o, w, 3)) == 0.0);
}

TEST_CASE("chain rule examples") {
  const Jet x = Jet::coordinate(0, 2, {0.4});
  const double one[] = {1.0};
  const Jet comps1[] = {x};
  CHECK(chain_rule_residual(testing::flat(1), x, one, comps1, x) == 0.0);

  const std::vector<double> at{1.0, 2.0};
  const Jet u = Jet::coordinate(0, 2, at), v = Jet::coordinate(1, 2, at);
  const double grad[] = {v.value(), u.value()};
  const Jet comps[] = {u, v};
  CHECK(chain_rule_residual(testing::flat(2), u * v, grad, comps, u) <= 1e-12);

  const std::vector<double> hp{0.0, 1.0};
  const Jet y = Jet::coordinate(0, 2, hp);
  const double cg[] = {std::cos(y.value())};
  const Jet c3[] = {y};
  CHECK(chain_rule_residual(testing::halfplane(), sin(y), cg, c3, y) <= 1e-12);
}

TEST_CASE("calculus laws on random jets over the catalog") {
  Rng rng(testing::test_seed() + 2);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (const auto& name : manifold_names()) {
    CAPTURE(name);
    const auto& m = get_manifold(name);
    double sym = 0, bil = 0, leib = 0, prop = 0, neg = 0;
    for (int k = 0; k < 40; ++k) {
      const auto x = sample_points(m.sample_box, 1, rng, 0.02).front();
      const Jet f = random_jet(x, 3, rng), g = random_jet(x, 3, rng), h = random_jet(x, 3, rng);
      const double a = coef(rng), b = coef(rng);
      const auto& s = m.spec;
      sym = std::max(sym, std::abs(gamma(s, f, g).value() - gamma(s, g, f).value()));
      sym = std::max(sym, std::abs(gamma_from_generator(s, f, g).value() - gamma_from_generator(s, g, f).value()));
      bil = std::max(bil, std::abs(gamma(s, a * f + b * h, g).value() - a * gamma(s, f, g).value() -
                                   b * gamma(s, h, g).value()));
      leib = std::max(leib, std::abs(gamma(s, f * g, h).value() - f.value() * gamma(s, g, h).value() -
                                     g.value() * gamma(s, f, h).value()));
      prop = std::max(prop, std::abs(gamma(s, f, g).value() - gamma_from_generator(s, f, g).value()));
      neg = std::min(neg, gamma(s, f, f).value());
      const double p2 = gamma2_polarized(s, f, g), p2r = gamma2_polarized(s, g, f);
      CHECK(std::abs(p2 - p2r) <= 1e-10 * std::max(1.0, std::abs(p2)));
      const double lin = gamma2_polarized(s, a * f + h, g) - a * p2 - gamma2_polarized(s, h, g);
      CHECK(std::abs(lin) <= 1e-10 * std::max(1.0, std::abs(p2)) * 10);
    }
    CHECK(sym <= 1e-11);
    CHECK(bil <= 1e-11);
    CHECK(leib <= 1e-11);
    CHECK(prop <= 1e-10);
    CHECK(neg >= -1e-12);
  }
}
