// gammaforge command-line front end.
//
//   gammaforge reconstruct --spec s.json --points pts.json
//   gammaforge verify --catalog sphere2_spherical --points 50
//   gammaforge semigroup --catalog torus_conformal --grid 64 --csv series.csv
//   gammaforge isometry --spec a.json --spec-b b.json --map phi.json --points 20 --box -1:1,1:3
//   gammaforge catalog [--catalog name]
//
// Exit codes: 0 ok, 1 usage or input error, 2 parse error, 3 degenerate,
// singular or non-symmetric generator, 4 tolerance breach.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gammaforge/catalog.hpp"
#include "gammaforge/errors.hpp"
#include "gammaforge/report.hpp"
#include "gammaforge/sampling.hpp"
#include "gammaforge/semigroup.hpp"
#include "gammaforge/spec_io.hpp"

using namespace gammaforge;
using nlohmann::json;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitParse = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitTolerance = 4;

struct RunConfig {
  std::string spec, spec_b, map, points, catalog, box, times, out, csv, set;
  std::string gamma_times = "0.02,0.01,0.005,0.0025";
  std::string probe = "sin(x1)";
  std::string bochner_sign = "auto";
  int grid = 256;
  int jet_order = 3;
  double tol = 0.0;
  double dt = 1e-3;
  double dissipation_t = 0.05;
  bool refine = false;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("bad number '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

// "lo:hi,lo:hi"
Box parse_box(const std::string& s) {
  Box box;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':', 1);
    if (colon == std::string::npos) throw InputError("box sides are written lo:hi, got '" + item + "'");
    const auto lohi = parse_list(item.substr(0, colon) + "," + item.substr(colon + 1));
    if (!(lohi[0] < lohi[1])) throw InputError("box side '" + item + "' needs lo < hi");
    box.emplace_back(lohi[0], lohi[1]);
  }
  return box;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

oracle::SignResolution bochner_sign(const RunConfig& c, std::uint64_t seed) {
  if (c.bochner_sign == "auto") return resolve_sign_on_ou(seed);
  if (c.bochner_sign == "-1") return {oracle::BochnerSign::Minus, 0.0, 0.0};
  if (c.bochner_sign == "+1" || c.bochner_sign == "1") return {oracle::BochnerSign::Plus, 0.0, 0.0};
  throw InputError("--bochner-sign must be auto, +1 or -1");
}

json sign_json(const RunConfig& c, const oracle::SignResolution& s) {
  json j = to_json(s);
  j["source"] = c.bochner_sign == "auto" ? "resolved on ou_gaussian2" : "given";
  if (c.bochner_sign != "auto") {
    j.erase("residual_minus");
    j.erase("residual_plus");
  }
  return j;
}

GeneratorSpec spec_or_catalog(const RunConfig& c, const char* what) {
  if (!c.spec.empty()) return load_spec(c.spec);
  if (!c.catalog.empty()) return get_manifold(c.catalog).spec;
  throw InputError(std::string(what) + " needs --spec or --catalog");
}

Box box_for(const RunConfig& c, int dim) {
  Box box;
  if (!c.box.empty()) box = parse_box(c.box);
  else if (!c.catalog.empty()) box = get_manifold(c.catalog).sample_box;
  else throw InputError("random points need --box or --catalog");
  if (static_cast<int>(box.size()) != dim) throw InputError("--box dimension differs from the spec dimension");
  return box;
}

std::optional<int> as_count(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
  return std::stoi(s);
}

std::vector<Point> points_for(const RunConfig& c, int dim, std::uint64_t seed, int fallback) {
  std::vector<Point> pts;
  const auto count = c.points.empty() ? std::optional<int>(fallback) : as_count(c.points);
  if (count) {
    Rng rng(seed);
    pts = sample_points(box_for(c, dim), *count, rng, 0.05);
  } else {
    pts = points_from_json(read_json_file(c.points));
  }
  if (pts.empty()) throw InputError("no points to evaluate");
  for (const auto& p : pts)
    if (static_cast<int>(p.size()) != dim) throw InputError("point dimension differs from the spec dimension");
  return pts;
}

int cmd_reconstruct(const RunConfig& c, std::uint64_t seed) {
  const double tol = c.tol > 0 ? c.tol : 1e-8;
  const GeneratorSpec spec = spec_or_catalog(c, "reconstruct");
  const auto pts = points_for(c, spec.dim(), seed, 10);
  const auto sign = bochner_sign(c, seed);
  json reports = json::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto r = reconstruct_point(spec, pts[k], sign.sign, seed + k, 8, std::max(3, c.jet_order));
    worst = std::max(worst, worst_diagnostic(r));
    reports.push_back(to_json(r));
  }
  const bool ok = worst <= tol;
  json out = {{"metadata",
               {{"command", "reconstruct"},
                {"chart", spec.chart()},
                {"jet_order", c.jet_order},
                {"seed", seed},
                {"tolerance", tol},
                {"bochner", sign_json(c, sign)}}},
              {"reports", reports},
              {"worst_diagnostic", worst},
              {"within_tolerance", ok}};
  emit(c.out, dump(out));
  return ok ? 0 : kExitTolerance;
}

int cmd_verify(const RunConfig& c, std::uint64_t seed) {
  if (c.catalog.empty()) throw InputError("verify needs --catalog");
  const double tol = c.tol > 0 ? c.tol : 1e-7;
  const ManifoldTruth& truth = get_manifold(c.catalog);
  const GeneratorSpec spec = c.spec.empty() ? truth.spec : load_spec(c.spec);
  const auto pts = points_for(c, truth.dim(), seed, 50);
  const auto sign = bochner_sign(c, seed);
  const VerifyTable table = verify_against_catalog(truth, spec, pts, sign.sign);
  const bool ok = table.worst() <= tol;
  json out = {{"metadata",
               {{"command", "verify"},
                {"catalog", truth.name},
                {"spec", c.spec.empty() ? "catalog" : c.spec},
                {"points", pts.size()},
                {"seed", seed},
                {"tolerance", tol},
                {"bochner", sign_json(c, sign)}}},
              {"max_abs_deviation", to_json(table)},
              {"within_tolerance", ok}};
  emit(c.out, dump(out));
  return ok ? 0 : kExitTolerance;
}

LabelExperiment label_set(const RunConfig& c, const DiscreteGenerator& gen, const std::vector<double>& times) {
  LabelExperiment exp;
  exp.times = times;
  const PeriodicGrid& grid = gen.grid();
  Box e;
  if (!c.set.empty()) {
    e = parse_box(c.set);
    if (static_cast<int>(e.size()) != grid.dim) throw InputError("--set dimension differs from the grid dimension");
  } else {
    // first half of the first axis
    for (int i = 0; i < grid.dim; ++i) e.emplace_back(grid.origin[i], grid.origin[i] + grid.length[i]);
    e[0].second = grid.origin[0] + 0.5 * grid.length[0];
  }
  exp.in_set.resize(static_cast<std::size_t>(grid.size()));
  for (int v = 0; v < grid.size(); ++v) {
    const auto x = grid.coordinates(v);
    bool inside = true;
    for (int i = 0; i < grid.dim; ++i) inside = inside && x[i] >= e[i].first && x[i] < e[i].second;
    exp.in_set[v] = inside ? 1 : 0;
  }
  return exp;
}

std::vector<double> default_times() {
  std::vector<double> t;
  for (int k = 0; k < 40; ++k) t.push_back(1e-3 * std::pow(2000.0, k / 39.0));
  return t;
}

std::vector<double> column(const std::vector<LabelRow>& rows, double LabelRow::*field) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.*field);
  return out;
}

int cmd_semigroup(const RunConfig& c, std::uint64_t) {
  const GeneratorSpec spec = spec_or_catalog(c, "semigroup");
  if (!spec.weighted_form()) throw InputError("semigroup needs a spec with a weighted_form (metric, log_density)");
  const int dim = spec.dim();
  if (dim != 1 && dim != 2) throw UnsupportedError("semigroup grids are 1D or 2D");
  Box box;
  if (!c.box.empty() || !c.catalog.empty()) box = box_for(c, dim);
  else box.assign(static_cast<std::size_t>(dim), {0.0, 2.0 * M_PI});
  auto make_grid = [&](int n) {
    std::vector<double> length, origin;
    for (const auto& [lo, hi] : box) {
      origin.push_back(lo);
      length.push_back(hi - lo);
    }
    return PeriodicGrid::make(std::vector<int>(static_cast<std::size_t>(dim), n), length, origin);
  };
  const auto& wf = *spec.weighted_form();
  const DiscreteGenerator gen = build_discrete_generator(wf.metric, wf.log_density, make_grid(c.grid));

  // Gamma via the semigroup limit for the probe f = g.
  const auto probe = parse_expr(c.probe, dim);
  const GridField f = gen.grid().sample([&](const std::vector<double>& x) { return evaluate(*probe, x); });
  const auto table = gamma_via_semigroup_limit(gen, f, f, parse_list(c.gamma_times));

  // Label experiment.
  const auto times = c.times.empty() ? default_times() : parse_list(c.times);
  const LabelExperiment exp = label_set(c, gen, times);
  const auto rows = run_label_experiment(gen, exp, c.dt);
  double mi_increase = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) mi_increase = std::max(mi_increase, rows[k].I - rows[k - 1].I);

  std::ostringstream csv;
  csv << "t,H,I,residual\n";
  for (const auto& r : rows)
    csv << format_double(r.t) << ',' << format_double(r.H) << ',' << format_double(r.I) << ','
        << (r.has_dissipation ? format_double(r.dissipation.residual) : "nan") << '\n';
  if (!c.csv.empty()) emit(c.csv, csv.str());

  const auto diss = dissipation_residual(gen, exp, c.dissipation_t, c.dt);
  json refinement = json::array();
  refinement.push_back({{"grid", c.grid}, {"dt", c.dt}, {"residual", diss.residual}});
  if (c.refine) {
    const DiscreteGenerator fine = build_discrete_generator(wf.metric, wf.log_density, make_grid(2 * c.grid));
    const auto d2 = dissipation_residual(fine, label_set(c, fine, times), c.dissipation_t, c.dt / 2);
    refinement.push_back({{"grid", 2 * c.grid}, {"dt", c.dt / 2}, {"residual", d2.residual}});
  }

  const double tol = c.tol > 0 ? c.tol : 1e-2;
  const bool ok = !table.non_monotone && mi_increase <= 1e-10 && diss.residual <= tol;
  json out = {{"metadata",
               {{"command", "semigroup"},
                {"grid", gen.grid().shape},
                {"box", box},
                {"dt", c.dt},
                {"monotone_step_bound", gen.monotone_step_bound()},
                {"dissipation_sign", diss.sign},
                {"dissipation_convention", diss.sign > 0 ? "dH/dt = +int Gamma(u)/(u(1-u)) dmu"
                                                         : "dH/dt = -int Gamma(u)/(u(1-u)) dmu"},
                {"tolerance", tol}}},
              {"gamma_limit",
               {{"probe", c.probe},
                {"t", table.t},
                {"sup_error", table.sup_error},
                {"ratio", table.ratio},
                {"limit_sup_error", table.limit_error},
                {"non_monotone", table.non_monotone}}},
              {"label",
               {{"mu_E", equilibrium_posterior(gen, exp)},
                {"H_equilibrium", binary_entropy(equilibrium_posterior(gen, exp))},
                {"max_mi_increase", mi_increase},
                {"t", column(rows, &LabelRow::t)},
                {"H", column(rows, &LabelRow::H)},
                {"I", column(rows, &LabelRow::I)}}},
              {"dissipation",
               {{"t", diss.t},
                {"fd_derivative", diss.fd_derivative},
                {"gamma_integral", diss.gamma_integral},
                {"residual", diss.residual},
                {"refinement", refinement}}},
              {"within_tolerance", ok}};
  emit(c.out, dump(out));
  return ok ? 0 : kExitTolerance;
}

int cmd_isometry(const RunConfig& c, std::uint64_t seed) {
  if (c.spec.empty() || c.spec_b.empty() || c.map.empty())
    throw InputError("isometry needs --spec, --spec-b and --map");
  const double tol = c.tol > 0 ? c.tol : 1e-9;
  const GeneratorSpec a = load_spec(c.spec);
  const GeneratorSpec b = load_spec(c.spec_b);
  const CoefficientField phi = load_map(c.map);
  const auto pts = points_for(c, a.dim(), seed, 20);
  const ConjugacyReport r = check_conjugacy(a, b, phi, pts);
  const bool iso = r.max_gamma_residual() <= tol && r.max_metric_residual() <= tol && r.measure_ratio_variation <= tol;
  json out = {{"metadata", {{"command", "isometry"}, {"seed", seed}, {"tolerance", tol}}},
              {"samples", r.samples},
              {"gamma_residuals", r.gamma_residuals},
              {"metric_pullback_residuals", r.metric_pullback_residuals},
              {"max_gamma_residual", r.max_gamma_residual()},
              {"max_metric_residual", r.max_metric_residual()},
              {"measure_ratio_variation", r.measure_ratio_variation},
              {"verdict", iso ? "isometry" : "non-isometry"}};
  emit(c.out, dump(out));
  return iso ? 0 : kExitTolerance;
}

int cmd_catalog(const RunConfig& c) {
  if (c.catalog.empty()) {
    std::string text;
    for (const auto& n : manifold_names()) text += n + "\n";
    emit(c.out, text);
  } else {
    emit(c.out, dump(manifold_to_json(get_manifold(c.catalog))));
  }
  return 0;
}

void apply_config_file(CLI::App& app, RunConfig& c, const std::string& path) {
  const json j = read_json_file(path);
  if (!j.is_object()) throw InputError("config file must hold a JSON object");
  auto given = [&](const char* flag) { return app.get_option(flag)->count() > 0; };
  auto str = [&](const char* key, const char* flag, std::string& dst) {
    if (j.contains(key) && !given(flag)) dst = j.at(key).is_string() ? j.at(key).get<std::string>() : j.at(key).dump();
  };
  auto num = [&](const char* key, const char* flag, auto& dst) {
    if (j.contains(key) && !given(flag)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
  };
  try {
    str("spec", "--spec", c.spec);
    str("spec_b", "--spec-b", c.spec_b);
    str("map", "--map", c.map);
    str("points", "--points", c.points);
    str("catalog", "--catalog", c.catalog);
    str("box", "--box", c.box);
    str("times", "--times", c.times);
    str("out", "--out", c.out);
    str("csv", "--csv", c.csv);
    str("set", "--set", c.set);
    str("gamma_times", "--gamma-times", c.gamma_times);
    str("probe", "--probe", c.probe);
    str("bochner_sign", "--bochner-sign", c.bochner_sign);
    num("grid", "--grid", c.grid);
    num("jet_order", "--jet-order", c.jet_order);
    num("tol", "--tol", c.tol);
    num("dt", "--dt", c.dt);
    num("dissipation_t", "--dissipation-t", c.dissipation_t);
    if (j.contains("refine") && !given("--refine")) c.refine = j.at("refine").get<bool>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruct weighted Riemannian structure from a diffusion generator"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  std::string config;
  app.add_option("--spec", c.spec, "generator spec JSON");
  app.add_option("--spec-b", c.spec_b, "second generator spec (isometry)");
  app.add_option("--map", c.map, "map JSON from the chart of --spec to the chart of --spec-b");
  app.add_option("--points", c.points, "points JSON file, or a count of seeded random points");
  app.add_option("--catalog", c.catalog, "catalog manifold name");
  app.add_option("--grid", c.grid, "grid points per axis");
  app.add_option("--box", c.box, "axis box lo:hi,lo:hi");
  app.add_option("--times", c.times, "comma-separated times for the label experiment");
  app.add_option("--jet-order", c.jet_order, "order of random probe jets (2..4)");
  app.add_option("--tol", c.tol, "tolerance (command default when omitted)");
  app.add_option("--bochner-sign", c.bochner_sign, "auto, +1 or -1");
  app.add_option("--out", c.out, "output path (stdout when omitted)");
  app.add_option("--csv", c.csv, "CSV time series path (semigroup)");
  app.add_option("--set", c.set, "label set box lo:hi,lo:hi (semigroup)");
  app.add_option("--gamma-times", c.gamma_times, "halving times for the Gamma limit");
  app.add_option("--probe", c.probe, "probe expression for the Gamma limit");
  app.add_option("--dt", c.dt, "Crank-Nicolson time step");
  app.add_option("--dissipation-t", c.dissipation_t, "time of the dissipation check");
  app.add_flag("--refine", c.refine, "repeat the dissipation check with 2N and dt/2");
  app.add_option("--config", config, "JSON config file; flags win over it");
  auto* reconstruct = app.add_subcommand("reconstruct", "geometry report per point");
  auto* verify = app.add_subcommand("verify", "compare a reconstruction with a catalog entry");
  auto* semigroup = app.add_subcommand("semigroup", "grid heat-flow experiments");
  auto* isometry = app.add_subcommand("isometry", "diffusion-equivalence check of a map");
  auto* catalog = app.add_subcommand("catalog", "list catalog entries or print one as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (!config.empty()) apply_config_file(app, c, config);
    if (!(c.tol >= 0.0)) throw InputError("--tol must be positive");
    if (app.get_option("--tol")->count() > 0 && !(c.tol > 0.0)) throw InputError("--tol must be positive");
    if (c.jet_order < 2 || c.jet_order > 4) throw InputError("--jet-order must lie in [2, 4]");
    const std::uint64_t seed = seed_from_env();
    if (*reconstruct) return cmd_reconstruct(c, seed);
    if (*verify) return cmd_verify(c, seed);
    if (*semigroup) return cmd_semigroup(c, seed);
    if (*isometry) return cmd_isometry(c, seed);
    if (*catalog) return cmd_catalog(c);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DegeneracyError& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const SingularityError& e) {
    std::cerr << "singular: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const NonSymmetricError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
