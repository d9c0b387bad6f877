#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gammaforge/catalog.hpp"
#include "gammaforge/curvature.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/expr.hpp"
#include "helpers.hpp"

using namespace gammaforge;
using namespace gammaforge::oracle;
using doctest::Approx;

namespace {

const double kTheta = std::numbers::pi / 3;

}  // namespace

TEST_CASE("classical Christoffels") {
  const auto flat = christoffels_classical(metric_jets(testing::flat(3), std::vector<double>{0.1, 0.2, 0.3}, 1));
  CHECK(flat.max_abs_difference(ConnectionPoint(3)) == 0.0);

  const auto s = christoffels_classical(metric_jets(testing::sphere(), std::vector<double>{kTheta, 0.5}, 1));
  CHECK(s(0, 1, 1) == Approx(-std::sqrt(3.0) / 4).epsilon(1e-14));
  CHECK(s(1, 0, 1) == Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(s(1, 1, 0) == Approx(1 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(s(0, 0, 0) == 0.0);

  const auto h = christoffels_classical(metric_jets(testing::halfplane(), std::vector<double>{0.0, 2.0}, 1));
  CHECK(h(0, 0, 1) == Approx(-0.5));
  CHECK(h(1, 0, 0) == Approx(0.5));
  CHECK(h(1, 1, 1) == Approx(-0.5));
  CHECK(h(0, 0, 0) == 0.0);
}

TEST_CASE("metric jets use the declared metric when present") {
  const GeneratorSpec no_form = testing::make_spec(2, {{"x2^2", "0"}, {"0", "x2^2"}}, {"0", "0"});
  const auto a = christoffels_classical(metric_jets(no_form, std::vector<double>{0.0, 2.0}, 1));
  const auto b = christoffels_classical(metric_jets(testing::halfplane(), std::vector<double>{0.0, 2.0}, 1));
  CHECK(a.max_abs_difference(b) <= 1e-15);
}

TEST_CASE("Riemann, Ricci and sectional curvature") {
  const auto flat = riemann_tensor(metric_jets(testing::flat(2), std::vector<double>{0.0, 0.0}, 2));
  CHECK(max_abs(ricci_from_riemann(flat)) == 0.0);

  Rng rng(testing::test_seed());
  const std::pair<double, double> sbox[] = {{0.3, 2.8}, {-3.0, 3.0}};
  const std::pair<double, double> hbox[] = {{-2.0, 2.0}, {0.5, 4.0}};
  for (int k = 0; k < 20; ++k) {
    const auto xs = random_point(sbox, rng);
    const auto gs = metric_jets(testing::sphere(), xs, 2);
    CHECK(sectional_curvature(riemann_tensor(gs), gs.metric.value()) == Approx(1.0).epsilon(1e-10));
    const auto xh = random_point(hbox, rng);
    const auto gh = metric_jets(testing::halfplane(), xh, 2);
    CHECK(sectional_curvature(riemann_tensor(gh), gh.metric.value()) == Approx(-1.0).epsilon(1e-10));
  }

  const auto gs = metric_jets(testing::sphere(), std::vector<double>{kTheta, 0.0}, 2);
  const Eigen::MatrixXd rs = ricci_from_riemann(riemann_tensor(gs));
  CHECK(rs(0, 0) == Approx(1.0));
  CHECK(rs(1, 1) == Approx(0.75));
  CHECK(std::abs(rs(0, 1)) < 1e-14);

  const auto gh = metric_jets(testing::halfplane(), std::vector<double>{0.0, 2.0}, 2);
  const Eigen::MatrixXd rh = ricci_from_riemann(riemann_tensor(gh));
  CHECK(rh(0, 0) == Approx(-0.25));
  CHECK(rh(1, 1) == Approx(-0.25));
}

TEST_CASE("Riemann symmetries and metric compatibility over the catalog") {
  Rng rng(testing::test_seed() + 1);
  for (const auto& name : manifold_names()) {
    CAPTURE(name);
    const auto& m = get_manifold(name);
    const int n = m.dim();
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = sample_points(m.sample_box, 1, rng).front();
      const auto g = metric_jets(m.spec, x, 2);
      const auto r = riemann_tensor(g);
      double anti = 0, bianchi = 0;
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              anti = std::max(anti, std::abs(r(l, i, j, k) + r(l, j, i, k)));
              bianchi = std::max(bianchi, std::abs(r(l, i, j, k) + r(l, j, k, i) + r(l, k, i, j)));
            }
      CHECK(anti <= 1e-9);
      CHECK(bianchi <= 1e-9);
      const auto c = christoffels_classical(g);
      double compat = 0;
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double v = g.metric(i, j).d(k);
            for (int mm = 0; mm < n; ++mm) v -= c(mm, k, i) * g.metric.value()(mm, j) + c(mm, k, j) * g.metric.value()(i, mm);
            compat = std::max(compat, std::abs(v));
          }
      CHECK(compat <= 1e-9);
      CHECK(max_abs(ricci_from_riemann(r) - m.ricci(x)) <= 1e-9);
      CHECK(c.max_abs_difference(m.christoffels(x)) <= 1e-10);
    }
  }
}

TEST_CASE("covariant Hessian examples") {
  const double v[] = {2.0, -1.0};
  const auto flat = christoffels_classical(metric_jets(testing::flat(2), std::vector<double>{0.0, 0.0}, 1));
  CHECK(max_abs(covariant_hessian(affine_probe(std::vector<double>{0.0, 0.0}, v, 2), flat)) == 0.0);
  const auto line = christoffels_classical(metric_jets(testing::flat(1), std::vector<double>{0.3}, 1));
  CHECK(covariant_hessian(eval_jet(*parse_expr("x1^2", 1), std::vector<double>{0.3}, 2), line)(0, 0) == 2.0);

  const std::vector<double> at{kTheta, 0.2};
  const auto conn = christoffels_classical(metric_jets(testing::sphere(), at, 1));
  const Eigen::MatrixXd h = covariant_hessian(eval_jet(*parse_expr("cos(x1)", 2), at, 2), conn);
  CHECK(h(0, 0) == Approx(-0.5));
  CHECK(h(1, 1) == Approx(-0.375));
  CHECK(std::abs(h(0, 1)) < 1e-15);
}

TEST_CASE("weighted Laplacian examples") {
  const std::vector<double> o{0.0};
  CHECK(weighted_laplacian(metric_jets(testing::flat(1), o, 1), Jet(1, 2, o),
                           eval_jet(*parse_expr("x1^2", 1), o, 2)) == 2.0);
  const std::vector<double> x{1.5};
  CHECK(weighted_laplacian(metric_jets(testing::ou1(), x, 1), eval_jet(*parse_expr("-x1^2/2", 1), x, 2),
                           Jet::coordinate(0, 2, x)) == Approx(-1.5));
  const std::vector<double> s{kTheta, 1.0};
  CHECK(weighted_laplacian(metric_jets(testing::sphere(), s, 1), Jet(2, 2, s),
                           eval_jet(*parse_expr("cos(x1)", 2), s, 2)) == Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("weighted Laplacian reproduces apply_L for Laplace-Beltrami drift") {
  Rng rng(testing::test_seed() + 2);
  for (const char* name : {"sphere2_spherical", "sphere2_stereographic", "hyperbolic_halfplane", "euclidean3"}) {
    const auto& m = get_manifold(name);
    for (int k = 0; k < 20; ++k) {
      const auto x = sample_points(m.sample_box, 1, rng).front();
      const Jet f = random_jet(x, 2, rng);
      const double lhs = weighted_laplacian(metric_jets(m.spec, x, 1), Jet(m.dim(), 2, x), f);
      CHECK(std::abs(lhs - apply_L(m.spec, f).value()) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("Bochner residual examples") {
  Rng rng(testing::test_seed() + 3);
  const std::vector<double> at{0.2, -0.7};
  const Jet f = random_jet(at, 3, rng);
  CHECK(bochner_residual(testing::flat(2), f, BochnerSign::Minus) <= 1e-10);
  CHECK(bochner_residual(testing::flat(2), f, BochnerSign::Plus) <= 1e-10);

  const double one[] = {1.0};
  const Jet p = affine_probe(std::vector<double>{0.8}, one, 3);
  CHECK(bochner_residual(testing::ou1(), p, BochnerSign::Minus) <= 1e-10);
  CHECK(bochner_residual(testing::ou1(), p, BochnerSign::Plus) == Approx(2.0).epsilon(1e-12));

  for (int k = 0; k < 20; ++k) {
    const std::pair<double, double> box[] = {{0.3, 2.8}, {-3.0, 3.0}};
    const auto x = random_point(box, rng);
    CHECK(bochner_residual(testing::sphere(), random_jet(x, 3, rng), BochnerSign::Minus) <= 1e-8);
  }
  CHECK_THROWS_AS(bochner_residual(testing::make_spec(1, {{"1"}}, {"0"}), p, BochnerSign::Minus), InputError);
}

TEST_CASE("Bochner identity holds over the catalog with the resolved sign") {
  const auto& ou = get_manifold("ou_gaussian2");
  const SignResolution res = resolve_bochner_sign(ou.spec, ou.sample_box, testing::test_seed());
  CHECK(res.sign == BochnerSign::Minus);
  CHECK(res.residual_minus <= 1e-8);
  CHECK(res.residual_plus >= 1e-2);
  Rng rng(testing::test_seed() + 4);
  for (const auto& name : manifold_names()) {
    CAPTURE(name);
    const auto& m = get_manifold(name);
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
      const auto x = sample_points(m.sample_box, 1, rng).front();
      worst = std::max(worst, bochner_residual(m.spec, random_jet(x, 3, rng), res.sign));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("sign resolution refuses an undecided spec") {
  const auto& flat = get_manifold("euclidean2");
  CHECK_THROWS_AS(resolve_bochner_sign(flat.spec, flat.sample_box, 1), NumericalError);
}
