#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "gammaforge/jet.hpp"

namespace gammaforge {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20240611;

/// Seed from GAMMAFORGE_SEED when set and numeric, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback = kDefaultSeed);

/// Jet with every derivative drawn uniformly from [-scale, scale].
Jet random_jet(std::span<const double> base_point, int order, Rng& rng, double scale = 1.0);

/// Uniform point in an axis-aligned box given as (lo, hi) per axis.
std::vector<double> random_point(std::span<const std::pair<double, double>> box, Rng& rng);

/// `count` uniform points in the box shrunk by `margin` (fraction of each side) on every face.
std::vector<std::vector<double>> sample_points(std::span<const std::pair<double, double>> box, int count, Rng& rng,
                                               double margin = 0.0);

}  // namespace gammaforge
