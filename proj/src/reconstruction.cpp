#include "gammaforge/reconstruction.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include "gammaforge/errors.hpp"

namespace gammaforge {

double ConjugacyReport::max_gamma_residual() const {
  double m = 0.0;
  for (double r : gamma_residuals) m = std::max(m, r);
  return m;
}

double ConjugacyReport::max_metric_residual() const {
  double m = 0.0;
  for (double r : metric_pullback_residuals) m = std::max(m, r);
  return m;
}

namespace {

Point to_point(std::span<const double> x) { return {x.begin(), x.end()}; }

std::vector<Jet> coordinate_probes(std::span<const double> x, int order) {
  std::vector<Jet> out;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) out.push_back(Jet::coordinate(i, order, to_point(x)));
  return out;
}

void require_dim(const GeneratorSpec& spec, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.dim()) throw ShapeError("point dimension differs from generator dimension");
}

// A^{ijm} = G^ip G^jq Gamma^m_pq as jets, indexed [(m * n + i) * n + j].
std::vector<Jet> koszul_contractions(const GeneratorSpec& spec, std::span<const double> x, int order) {
  const int n = spec.dim();
  const JetMatrix G = recover_cometric_jets(spec, x, order + 1);
  const auto probes = coordinate_probes(x, order + 1);
  // T[a](i, j) = Gamma(x^a, Gamma(x^i, x^j))
  std::vector<std::vector<Jet>> T(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T[a].push_back(gamma(spec, probes[a], G(i, j)));
  auto t = [&](int a, int i, int j) -> const Jet& { return T[a][static_cast<std::size_t>(i * n + j)]; };
  std::vector<Jet> A;
  A.reserve(static_cast<std::size_t>(n * n * n));
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // <nabla_{grad x^i} grad x^j, grad x^m> minus the known term Gamma(x^i, G^jm)
        A.push_back((t(m, i, j) - t(i, j, m) - t(j, i, m)) * 0.5);
      }
  return A;
}

}  // namespace

JetMatrix recover_cometric_jets(const GeneratorSpec& spec, std::span<const double> x, int order) {
  require_dim(spec, x);
  const int n = spec.dim();
  const auto probes = coordinate_probes(x, order + 1);
  JetMatrix G(n, n, Jet(n, order, to_point(x)));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) G(i, j) = G(j, i) = gamma(spec, probes[i], probes[j]);
  return G;
}

Eigen::MatrixXd recover_cometric(const GeneratorSpec& spec, std::span<const double> x) {
  return recover_cometric_jets(spec, x, 0).value();
}

MetricPoint recover_metric(const GeneratorSpec& spec, std::span<const double> x) {
  MetricPoint out;
  out.point = to_point(x);
  out.cometric = recover_cometric(spec, x);
  out.min_eigenvalue = min_eigenvalue(out.cometric);
  require_positive_definite(out.cometric, "recovered co-metric");
  Eigen::LLT<Eigen::MatrixXd> llt(out.cometric);
  if (llt.info() != Eigen::Success) throw DegeneracyError("Cholesky factorization of the co-metric failed", out.min_eigenvalue);
  out.metric = llt.solve(Eigen::MatrixXd::Identity(spec.dim(), spec.dim()));
  out.metric = 0.5 * (out.metric + out.metric.transpose());
  return out;
}

ChristoffelRecovery recover_christoffels_intrinsic(const GeneratorSpec& spec, std::span<const double> x) {
  require_dim(spec, x);
  const int n = spec.dim();
  const Eigen::MatrixXd G = recover_cometric(spec, x);
  require_positive_definite(G, "recovered co-metric");
  const auto A = koszul_contractions(spec, x, 0);
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G, Eigen::EigenvaluesOnly);
  ChristoffelRecovery out{ConnectionPoint(n), 0.0, es.eigenvalues().maxCoeff() / es.eigenvalues().minCoeff()};
  for (int m = 0; m < n; ++m) {
    Eigen::MatrixXd Am(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Am(i, j) = A[static_cast<std::size_t>((m * n + i) * n + j)].value();
    // Gamma^m = G^-1 A^m G^-1
    const Eigen::MatrixXd left = llt.solve(Am);
    const Eigen::MatrixXd raw = llt.solve(left.transpose()).transpose();
    out.raw_asymmetry = std::max(out.raw_asymmetry, max_abs(raw - raw.transpose()));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.christoffels(m, i, j) = 0.5 * (raw(i, j) + raw(j, i));
  }
  return out;
}

std::vector<Jet> recover_christoffel_jets(const GeneratorSpec& spec, std::span<const double> x, int order) {
  require_dim(spec, x);
  const int n = spec.dim();
  const JetMatrix g = inverse(recover_cometric_jets(spec, x, order));
  const auto A = koszul_contractions(spec, x, order);
  std::vector<Jet> out;
  out.reserve(A.size());
  for (int m = 0; m < n; ++m)
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        Jet acc = Jet::constant(0.0, order, to_point(x));
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) acc += g(p, i) * A[static_cast<std::size_t>((m * n + i) * n + j)] * g(j, q);
        out.push_back(std::move(acc));
      }
  return out;
}

RicciPoint recover_ricci_mu(const GeneratorSpec& spec, std::span<const double> x, oracle::BochnerSign convention) {
  const int n = spec.dim();
  const MetricPoint mp = recover_metric(spec, x);
  const ConnectionPoint conn = recover_christoffels_intrinsic(spec, x).christoffels;
  std::vector<Jet> probes;
  std::vector<int> alpha(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // covector g_i. so that grad f = d_i
    const Eigen::VectorXd c = mp.metric.row(i).transpose();
    Jet f = affine_probe(x, std::span<const double>(c.data(), static_cast<std::size_t>(n)), 3);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double h = 0.0;
        for (int k = 0; k < n; ++k) h += conn(k, a, b) * c(k);
        std::fill(alpha.begin(), alpha.end(), 0);
        ++alpha[a];
        ++alpha[b];
        f.at(alpha) = h;
      }
    probes.push_back(std::move(f));
  }
  RicciPoint out{Eigen::MatrixXd(n, n), convention};
  for (int i = 0; i < n; ++i) {
    out.ric_mu(i, i) = gamma2(spec, probes[i]);
    for (int j = i + 1; j < n; ++j) out.ric_mu(i, j) = out.ric_mu(j, i) = gamma2_polarized(spec, probes[i], probes[j]);
  }
  return out;
}

Eigen::VectorXd recover_drift(const GeneratorSpec& spec, std::span<const double> x) {
  require_dim(spec, x);
  const int n = spec.dim();
  const Eigen::MatrixXd G = recover_cometric(spec, x);
  const ConnectionPoint conn = recover_christoffels_intrinsic(spec, x).christoffels;
  const auto probes = coordinate_probes(x, 2);
  Eigen::VectorXd z(n);
  for (int j = 0; j < n; ++j) {
    // Delta_g x^j = g^ik (d_i d_k x^j - Gamma^l_ik d_l x^j) = -g^ik Gamma^j_ik
    double laplace_beltrami = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) laplace_beltrami -= G(i, k) * conn(j, i, k);
    z(j) = apply_L(spec, probes[j]).value() - laplace_beltrami;
  }
  return z;
}

std::vector<Jet> recover_drift_form_jets(const GeneratorSpec& spec, std::span<const double> x, int order) {
  require_dim(spec, x);
  const int n = spec.dim();
  const JetMatrix G = recover_cometric_jets(spec, x, order);
  const JetMatrix g = inverse(G);
  const auto chr = recover_christoffel_jets(spec, x, order);
  const auto probes = coordinate_probes(x, order + 2);
  std::vector<Jet> z;
  for (int j = 0; j < n; ++j) {
    Jet zj = apply_L(spec, probes[j]);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) zj += G(i, k) * chr[static_cast<std::size_t>((j * n + i) * n + k)];
    z.push_back(std::move(zj));
  }
  std::vector<Jet> flat;
  for (int j = 0; j < n; ++j) {
    Jet acc = Jet::constant(0.0, order, to_point(x));
    for (int k = 0; k < n; ++k) acc += g(j, k) * z[k];
    flat.push_back(std::move(acc));
  }
  return flat;
}

double drift_closedness(const GeneratorSpec& spec, std::span<const double> x) {
  const int n = spec.dim();
  if (n == 1) return 0.0;
  const auto z = recover_drift_form_jets(spec, x, 1);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) worst = std::max(worst, std::abs(z[j].d(i) - z[i].d(j)));
  return worst;
}

Jet recovered_log_density_jet(const GeneratorSpec& spec, std::span<const double> x) {
  const int n = spec.dim();
  const auto z = recover_drift_form_jets(spec, x, 1);
  Jet psi(n, 2, to_point(x));
  std::vector<int> alpha(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    psi.derivs()[1 + i] = z[i].value();
    for (int j = i; j < n; ++j) {
      std::fill(alpha.begin(), alpha.end(), 0);
      ++alpha[i];
      ++alpha[j];
      psi.at(alpha) = 0.5 * (z[j].d(i) + z[i].d(j));
    }
  }
  return psi;
}

namespace {

constexpr int kSegments = 8;
using Quadrature = boost::math::quadrature::gauss<double, 16>;

Eigen::VectorXd lowered_drift(const GeneratorSpec& spec, std::span<const double> x) {
  const int n = spec.dim();
  const Eigen::MatrixXd G = recover_cometric(spec, x);
  require_positive_definite(G, "recovered co-metric");
  const ConnectionPoint conn = recover_christoffels_intrinsic(spec, x).christoffels;
  const auto probes = coordinate_probes(x, 2);
  Eigen::VectorXd z(n);
  for (int j = 0; j < n; ++j) {
    z(j) = apply_L(spec, probes[j]).value();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) z(j) += G(i, k) * conn(j, i, k);
  }
  return G.llt().solve(z);
}

// Integral of Z along the straight segment a -> b.
double line_integral(const GeneratorSpec& spec, const Point& a, const Point& b) {
  const int n = static_cast<int>(a.size());
  Eigen::VectorXd delta(n);
  for (int i = 0; i < n; ++i) delta(i) = b[i] - a[i];
  if (delta.norm() == 0.0) return 0.0;
  const auto& nodes = Quadrature::abscissa();
  const auto& weights = Quadrature::weights();
  double total = 0.0;
  Point x(static_cast<std::size_t>(n));
  const double h = 1.0 / kSegments;
  auto eval = [&](double s) {
    for (int i = 0; i < n; ++i) x[i] = a[i] + s * delta(i);
    return lowered_drift(spec, x).dot(delta);
  };
  for (int seg = 0; seg < kSegments; ++seg) {
    const double mid = (seg + 0.5) * h;
    // boost stores the non-negative half of the symmetric rule
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double off = 0.5 * h * nodes[k];
      total += 0.5 * h * weights[k] * (eval(mid + off) + eval(mid - off));
    }
  }
  return total;
}

}  // namespace

DensityReport recover_log_density(const GeneratorSpec& spec, std::span<const double> base,
                                  const std::vector<Point>& targets) {
  require_dim(spec, base);
  const int n = spec.dim();
  DensityReport out;
  out.base = to_point(base);
  out.targets = targets;
  for (const auto& t : targets) {
    require_dim(spec, t);
    Point x(static_cast<std::size_t>(n));
    for (int seg = 0; seg <= kSegments; ++seg) {
      const double s = static_cast<double>(seg) / kSegments;
      for (int i = 0; i < n; ++i) x[i] = base[i] + s * (t[i] - base[i]);
      const double c = drift_closedness(spec, x);
      out.one_form_closedness = std::max(out.one_form_closedness, c);
      if (c > kClosednessTolerance) {
        std::ostringstream msg;
        msg << "non-symmetric generator: no invariant density (closedness residual " << c << ")";
        throw NonSymmetricError(msg.str(), c);
      }
    }
    const double straight = line_integral(spec, out.base, t);
    // Axis-parallel path: move along x1, then x2, ...
    double stepped = 0.0;
    Point from = out.base;
    for (int axis = 0; axis < n; ++axis) {
      Point to = from;
      to[axis] = t[axis];
      stepped += line_integral(spec, from, to);
      from = to;
    }
    out.path_independence_residual = std::max(out.path_independence_residual, std::abs(straight - stepped));
    out.log_rho.push_back(straight);
    out.drift_Z.push_back(recover_drift(spec, t));
  }
  return out;
}

double intrinsic_distance(const GeneratorSpec& spec, const Box& box, int resolution, std::span<const double> x,
                          std::span<const double> y) {
  const int n = spec.dim();
  if (n != 1 && n != 2) throw UnsupportedError("intrinsic distance is implemented for dimension 1 and 2");
  if (static_cast<int>(box.size()) != n) throw ShapeError("box dimension differs from generator dimension");
  require_dim(spec, x);
  require_dim(spec, y);
  if (resolution < 1) throw InputError("resolution must be positive");
  for (int i = 0; i < n; ++i) {
    if (!(box[i].first < box[i].second)) throw InputError("box sides must satisfy lo < hi");
    if (x[i] < box[i].first || x[i] > box[i].second || y[i] < box[i].first || y[i] > box[i].second)
      throw InputError("distance endpoints must lie inside the box");
  }
  const int side = resolution + 1;
  std::vector<double> h(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) h[i] = (box[i].second - box[i].first) / resolution;
  const int nodes = (n == 1) ? side : side * side;
  auto coords = [&](int v) {
    Point p(static_cast<std::size_t>(n));
    p[0] = box[0].first + (v % side) * h[0];
    if (n == 2) p[1] = box[1].first + (v / side) * h[1];
    return p;
  };
  auto length = [&](const Point& a, const Point& b) {
    Point mid(static_cast<std::size_t>(n));
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) {
      mid[i] = 0.5 * (a[i] + b[i]);
      d(i) = b[i] - a[i];
    }
    if (d.norm() == 0.0) return 0.0;
    return std::sqrt(d.dot(recover_metric(spec, mid).metric * d));
  };
  auto snap = [&](std::span<const double> p) {
    int v = 0, stride = 1;
    for (int i = 0; i < n; ++i) {
      const int k = static_cast<int>(std::lround((p[i] - box[i].first) / h[i]));
      v += std::clamp(k, 0, resolution) * stride;
      stride *= side;
    }
    return v;
  };
  const int source = snap(x), target = snap(y);

  std::vector<double> dist(static_cast<std::size_t>(nodes), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    if (v == target) break;
    const int vi = v % side, vj = (n == 2) ? v / side : 0;
    for (int dj = (n == 2 ? -1 : 0); dj <= (n == 2 ? 1 : 0); ++dj)
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int ui = vi + di, uj = vj + dj;
        if (ui < 0 || ui >= side || uj < 0 || uj >= side) continue;
        const int u = ui + uj * side;
        const double nd = d + length(coords(v), coords(u));
        if (nd < dist[u]) {
          dist[u] = nd;
          queue.emplace(nd, u);
        }
      }
  }
  return dist[target] + length(to_point(x), coords(source)) + length(coords(target), to_point(y));
}

ConjugacyReport check_conjugacy(const GeneratorSpec& spec_a, const GeneratorSpec& spec_b, const CoefficientField& phi,
                                const std::vector<Point>& samples) {
  const int n = spec_a.dim();
  if (spec_b.dim() != n || phi.dim() != n || static_cast<int>(phi.component_count()) != n)
    throw ShapeError("conjugacy map must send the chart of A to the chart of B in the same dimension");
  if (samples.empty()) throw InputError("conjugacy check needs at least one sample");
  ConjugacyReport out;
  out.samples = samples;
  std::vector<Point> images;
  for (const auto& s : samples) {
    std::vector<Jet> comps;
    for (std::size_t a = 0; a < phi.component_count(); ++a) comps.push_back(eval_jet(phi.component(a), s, 2));
    Point y(static_cast<std::size_t>(n));
    Eigen::MatrixXd J(n, n);
    for (int a = 0; a < n; ++a) {
      y[a] = comps[a].value();
      for (int i = 0; i < n; ++i) J(a, i) = comps[a].d(i);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > 1e-12)) throw SingularityError("conjugacy map Jacobian is singular at a sample", smin);
    images.push_back(y);

    const Eigen::MatrixXd Gb = recover_cometric(spec_b, y);
    double gres = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) gres = std::max(gres, std::abs(gamma(spec_a, comps[a], comps[b]).value() - Gb(a, b)));
    out.gamma_residuals.push_back(gres);

    const Eigen::MatrixXd ga = recover_metric(spec_a, s).metric;
    const Eigen::MatrixXd gb = recover_metric(spec_b, y).metric;
    out.metric_pullback_residuals.push_back(max_abs(ga - J.transpose() * gb * J));
  }
  const auto da = recover_log_density(spec_a, samples.front(), samples);
  const auto db = recover_log_density(spec_b, images.front(), images);
  double lo = 0.0, hi = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const double r = da.log_rho[k] - db.log_rho[k];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  out.measure_ratio_variation = hi - lo;
  return out;
}

}  // namespace gammaforge
