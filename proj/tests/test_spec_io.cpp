#include <doctest.h>

#include "gammaforge/catalog.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/spec_io.hpp"
#include "helpers.hpp"

using namespace gammaforge;
using nlohmann::json;

TEST_CASE("spec JSON round trip") {
  Rng rng(testing::test_seed());
  for (const auto& name : manifold_names()) {
    CAPTURE(name);
    const auto& m = get_manifold(name);
    const GeneratorSpec again = spec_from_json(json::parse(spec_to_json(m.spec).dump()));
    CHECK(again.dim() == m.dim());
    CHECK(again.chart() == m.spec.chart());
    for (const auto& x : sample_points(m.sample_box, 5, rng)) {
      CHECK(max_abs(again.cometric().matrix_value(x) - m.spec.cometric().matrix_value(x)) == 0.0);
      CHECK(max_abs(again.drift().vector_value(x) - m.spec.drift().vector_value(x)) == 0.0);
    }
  }
}

TEST_CASE("spec parsing reads the upper triangle and accepts numbers") {
  const auto j = json::parse(R"({"dim": 2, "cometric": [[1, "x1"], ["garbage(", 2]], "drift": [0, "x2"]})");
  const GeneratorSpec s = spec_from_json(j);
  const double x[] = {3.0, 4.0};
  const Eigen::MatrixXd G = s.cometric().matrix_value(x);
  CHECK(G(1, 0) == 3.0);
  CHECK(G(1, 1) == 2.0);
  CHECK_FALSE(s.weighted_form().has_value());
}

TEST_CASE("spec parsing errors") {
  CHECK_THROWS_AS(spec_from_json(json::parse(R"([1, 2])")), InputError);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"cometric": [["1"]], "drift": ["0"]})")), InputError);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"dim": 2, "cometric": [["1"]], "drift": ["0", "0"]})")), InputError);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"dim": 1, "cometric": [["1 +"]], "drift": ["0"]})")), ParseError);
  CHECK_THROWS_AS(spec_from_json(json::parse(R"({"dim": 1, "cometric": [["1"]], "drift": ["0"],
                                                 "weighted_form": {"metric": [["1"]]}})")),
                  InputError);
  CHECK_THROWS_AS(load_spec("/nonexistent/spec.json"), InputError);
}

TEST_CASE("maps and points") {
  const auto phi = map_from_json(json::parse(R"({"dim": 2, "components": ["2*x1 + 1", "2*x2"]})"));
  CHECK(phi.component_count() == 2);
  const auto pts = points_from_json(json::parse("[[0, 1], [2.5, 3]]"));
  REQUIRE(pts.size() == 2);
  CHECK(pts[1][0] == 2.5);
  CHECK_THROWS_AS(points_from_json(json::parse("{}")), InputError);
  CHECK_THROWS_AS(map_from_json(json::parse(R"({"dim": 2})")), InputError);
}
