#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "posthoc/bounds.hpp"
#include "posthoc/calibration.hpp"
#include "posthoc/family.hpp"

namespace posthoc::testing {

using Rng = std::mt19937_64;

// Laminar family of up to K intervals over a random relabelling of 1..m, so
// regions are generally not contiguous in index order.
std::vector<Region> random_forest_regions(Rng& rng, Index m, std::size_t K);
// Strictly nested chain R_1 > R_2 > ... of up to K regions.
std::vector<Region> random_nested_regions(Rng& rng, Index m, std::size_t K);
// Up to K pairwise disjoint regions, not necessarily covering 1..m.
std::vector<Region> random_disjoint_regions(Rng& rng, Index m, std::size_t K);
// Arbitrary distinct non-empty subsets.
std::vector<Region> random_regions(Rng& rng, Index m, std::size_t K);

// Each zeta uniform on {0, ..., |R_k|}.
ReferenceFamily with_random_zetas(Rng& rng, Index m, const std::vector<Region>& regions);

Selection random_selection(Rng& rng, Index m, double inclusion = 0.5);
PValueVector uniform_pvalues(Rng& rng, Index m);
// Mixture of exact zeros, exact ones, ties and uniforms.
std::vector<double> awkward_pvalues(Rng& rng, std::size_t s);

}  // namespace posthoc::testing
