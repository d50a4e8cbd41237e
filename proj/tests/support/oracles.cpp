#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace posthoc::oracle {
namespace {

std::uint32_t mask_of(std::span<const Index> indices) {
  std::uint32_t mask = 0;
  for (Index i : indices) mask |= std::uint32_t{1} << (i - 1);
  return mask;
}

bool subset(const Region& a, const Region& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool disjoint(const Region& a, const Region& b) {
  for (Index i : a) {
    if (b.contains(i)) return false;
  }
  return true;
}

template <typename Objective>
Count grid_minimum(const std::vector<double>& p, double step, Objective objective) {
  const auto s = static_cast<Count>(p.size());
  std::vector<double> ts;
  for (double t = 0.0; t < 1.0; t += step) ts.push_back(t);
  for (double x : p) {
    if (x < 1.0) ts.push_back(x);
  }
  Count best = s;
  for (double t : ts) {
    const auto above = static_cast<Count>(std::count_if(p.begin(), p.end(), [&](double x) { return x > t; }));
    const double value = objective(t, static_cast<double>(above));
    best = std::min(best, static_cast<Count>(std::floor(value * (1.0 + 1e-12))));
  }
  return best;
}

}  // namespace

Count optimal_bound(const ReferenceFamily& family, const Selection& s) {
  const Index m = family.m();
  if (m > 20) throw std::invalid_argument("oracle limited to m <= 20");
  std::vector<std::uint32_t> regions;
  for (std::size_t k = 0; k < family.size(); ++k) regions.push_back(mask_of(family.region(k).indices()));
  const std::uint32_t selected = mask_of(s.indices());
  Count best = 0;
  for (std::uint32_t a = 0; a < (std::uint32_t{1} << m); ++a) {
    bool feasible = true;
    for (std::size_t k = 0; k < regions.size() && feasible; ++k) {
      feasible = std::popcount(a & regions[k]) <= family.zeta(k);
    }
    if (feasible) best = std::max<Count>(best, std::popcount(a & selected));
  }
  return best;
}

Count interpolation_bound(const ReferenceFamily& family, const Selection& s, std::size_t q) {
  const std::size_t K = family.size();
  if (K > 20) throw std::invalid_argument("oracle limited to K <= 20");
  const std::uint32_t selected = mask_of(s.indices());
  auto best = static_cast<Count>(s.size());
  for (std::uint32_t subset_mask = 1; subset_mask < (std::uint32_t{1} << K); ++subset_mask) {
    if (static_cast<std::size_t>(std::popcount(subset_mask)) > q) continue;
    Count total = 0;
    std::uint32_t covered = 0;
    for (std::size_t k = 0; k < K; ++k) {
      if (!(subset_mask >> k & 1U)) continue;
      const std::uint32_t r = mask_of(family.region(k).indices());
      total += std::min<Count>(family.zeta(k), std::popcount(selected & r));
      covered |= r;
    }
    total += std::popcount(selected & ~covered);
    best = std::min(best, total);
  }
  return best;
}

std::vector<int> depths(const ReferenceFamily& family) {
  std::vector<int> out(family.size(), 1);
  for (std::size_t k = 0; k < family.size(); ++k) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (j != k && subset(family.region(k), family.region(j))) ++out[k];
    }
  }
  return out;
}

std::size_t max_disjoint(const ReferenceFamily& family) {
  const std::size_t K = family.size();
  if (K > 20) throw std::invalid_argument("oracle limited to K <= 20");
  std::size_t best = 0;
  for (std::uint32_t subset_mask = 1; subset_mask < (std::uint32_t{1} << K); ++subset_mask) {
    bool ok = true;
    for (std::size_t a = 0; a < K && ok; ++a) {
      for (std::size_t b = a + 1; b < K && ok; ++b) {
        if ((subset_mask >> a & 1U) && (subset_mask >> b & 1U)) {
          ok = disjoint(family.region(a), family.region(b));
        }
      }
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(std::popcount(subset_mask)));
  }
  return best;
}

std::set<std::vector<Index>> signature_classes(const ReferenceFamily& family) {
  std::vector<std::pair<std::vector<std::size_t>, Index>> keyed;
  for (Index i = 1; i <= family.m(); ++i) {
    std::vector<std::size_t> signature;
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (family.region(k).contains(i)) signature.push_back(k);
    }
    keyed.emplace_back(std::move(signature), i);
  }
  std::sort(keyed.begin(), keyed.end());
  std::set<std::vector<Index>> out;
  std::vector<Index> current;
  for (std::size_t n = 0; n < keyed.size(); ++n) {
    if (n > 0 && keyed[n].first != keyed[n - 1].first) {
      out.insert(current);
      current.clear();
    }
    current.push_back(keyed[n].second);
  }
  if (!current.empty()) out.insert(current);
  return out;
}

Count dkw_zeta_grid(const std::vector<double>& p, double C, double step) {
  return grid_minimum(p, step, [&](double t, double above) {
    const double a = 1.0 - t;
    const double root = C / (2.0 * a) + std::sqrt(C * C / (4.0 * a * a) + above / a);
    return root * root;
  });
}

Count gw_zeta_grid(const std::vector<double>& p, double C, double step) {
  const double root_s = std::sqrt(static_cast<double>(p.size()));
  return grid_minimum(p, step, [&](double t, double above) { return (above + root_s * C) / (1.0 - t); });
}

Count simes(const std::vector<double>& p, const Selection& s, double alpha) {
  const auto m = static_cast<double>(p.size());
  auto best = static_cast<Count>(s.size());
  for (std::size_t k = 1; k <= p.size(); ++k) {
    Count above = 0;
    for (Index i : s.indices()) above += p[static_cast<std::size_t>(i - 1)] > alpha * static_cast<double>(k) / m ? 1 : 0;
    best = std::min(best, above + static_cast<Count>(k) - 1);
  }
  return std::max<Count>(best, 0);
}

}  // namespace posthoc::oracle
