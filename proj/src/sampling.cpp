#include "gammaforge/sampling.hpp"

#include <cstdlib>
#include <string>

namespace gammaforge {

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("GAMMAFORGE_SEED");
  if (!s || !*s) return fallback;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    return used == std::string(s).size() ? v : fallback;
  } catch (const std::exception&) {
    return fallback;
  }
}

Jet random_jet(std::span<const double> base_point, int order, Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Jet j(static_cast<int>(base_point.size()), order, std::vector<double>(base_point.begin(), base_point.end()));
  for (double& v : j.derivs()) v = u(rng);
  return j;
}

std::vector<double> random_point(std::span<const std::pair<double, double>> box, Rng& rng) {
  std::vector<double> p;
  p.reserve(box.size());
  for (const auto& [lo, hi] : box) p.push_back(std::uniform_real_distribution<double>(lo, hi)(rng));
  return p;
}

std::vector<std::vector<double>> sample_points(std::span<const std::pair<double, double>> box, int count, Rng& rng,
                                               double margin) {
  std::vector<std::pair<double, double>> inner;
  for (const auto& [lo, hi] : box) inner.emplace_back(lo + margin * (hi - lo), hi - margin * (hi - lo));
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_point(inner, rng));
  return out;
}

}  // namespace gammaforge
