#include "posthoc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "posthoc/error.hpp"

namespace posthoc {
namespace {

// Guards floor() against an exactly-integral value landing a few ulps low.
Count floor_guarded(double x) {
  return static_cast<Count>(std::floor(x * (1.0 + 1e-12)));
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

void check_selection(const PValueVector& pvalues, const Selection& s) {
  if (!s.empty() && s.indices().back() > pvalues.m()) {
    throw Error(ErrorCode::InvalidArgument, "selection index exceeds m");
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

}  // namespace

PValueVector::PValueVector(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double p = values_[i];
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "p-value " + std::to_string(i + 1) + " outside [0, 1]");
    }
  }
}

std::vector<double> PValueVector::restrict_to(const Region& region) const {
  if (region.back() > m()) throw Error(ErrorCode::InvalidArgument, "region exceeds m");
  std::vector<double> out;
  out.reserve(region.size());
  for (Index i : region) out.push_back((*this)[i]);
  return out;
}

Count NullMask::null_count(std::span<const Index> indices) const {
  Count n = 0;
  for (Index i : indices) n += is_null(i) ? 1 : 0;
  return n;
}

Count NullMask::null_count(const Region& region) const { return null_count(region.indices()); }

Count NullMask::non_null_total() const {
  return static_cast<Count>(std::count(is_null_.begin(), is_null_.end(), false));
}

void CalibrationConfig::validate() const {
  check_alpha(alpha);
  if (K == 0) throw Error(ErrorCode::InvalidArgument, "K must be >= 1");
  if (!(alpha / static_cast<double>(K) < 0.5)) {
    throw Error(ErrorCode::AlphaTooLarge, "alpha / K = " +
                                              std::to_string(alpha / static_cast<double>(K)) +
                                              " is not below 1/2");
  }
}

double CalibrationConfig::constant() const {
  return std::sqrt(0.5 * std::log(static_cast<double>(K) / alpha));
}

Count dkw_zeta(std::span<const double> region_pvalues, double C) {
  const auto sorted = sorted_copy(region_pvalues);
  const Count s = static_cast<Count>(sorted.size());
  Count best = s;
  // Between consecutive order statistics the count is fixed and the
  // objective increases with t, so only t = p_(l) needs checking.
  for (Count l = 0; l <= s; ++l) {
    const double t = l == 0 ? 0.0 : sorted[static_cast<std::size_t>(l - 1)];
    if (t >= 1.0) break;
    const double a = 1.0 - t;
    const double root = C / (2.0 * a) + std::sqrt(C * C / (4.0 * a * a) + static_cast<double>(s - l) / a);
    best = std::min(best, floor_guarded(root * root));
  }
  return best;
}

Count gw_zeta(std::span<const double> region_pvalues, double C) {
  const auto sorted = sorted_copy(region_pvalues);
  const Count s = static_cast<Count>(sorted.size());
  const double slack = std::sqrt(static_cast<double>(s)) * C;
  Count best = s;
  for (Count l = 0; l <= s; ++l) {
    const double t = l == 0 ? 0.0 : sorted[static_cast<std::size_t>(l - 1)];
    if (t >= 1.0) break;
    const auto above = static_cast<Count>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    best = std::min(best, floor_guarded((static_cast<double>(above) + slack) / (1.0 - t)));
  }
  return best;
}

Count local_zeta(ZetaMethod method, std::span<const double> region_pvalues, double C) {
  return method == ZetaMethod::Dkw ? dkw_zeta(region_pvalues, C) : gw_zeta(region_pvalues, C);
}

std::vector<Count> calibrate_zetas(std::span<const Region> regions, const PValueVector& pvalues,
                                   const CalibrationConfig& config) {
  config.validate();
  if (config.K != regions.size()) {
    throw Error(ErrorCode::InvalidArgument, "K = " + std::to_string(config.K) + " but " +
                                                std::to_string(regions.size()) + " regions given");
  }
  const double C = config.constant();
  std::vector<Count> zetas(regions.size());
  for (std::size_t k = 0; k < regions.size(); ++k) {
    zetas[k] = local_zeta(config.method, pvalues.restrict_to(regions[k]), C);
  }
  return zetas;
}

ReferenceFamily calibrate_family(std::span<const Region> regions, const PValueVector& pvalues,
                                 const CalibrationConfig& config) {
  if (pvalues.size() == 0) throw Error(ErrorCode::InvalidArgument, "no p-values");
  const auto zetas = calibrate_zetas(regions, pvalues, config);
  std::vector<Member> members;
  members.reserve(regions.size());
  for (std::size_t k = 0; k < regions.size(); ++k) members.push_back(Member{regions[k], zetas[k]});
  return ReferenceFamily(pvalues.m(), std::move(members));
}

Count simes_bound(const PValueVector& pvalues, const Selection& s, double alpha) {
  check_alpha(alpha);
  check_selection(pvalues, s);
  const Count size = static_cast<Count>(s.size());
  std::vector<double> selected;
  selected.reserve(s.size());
  for (Index i : s.indices()) selected.push_back(pvalues[i]);
  std::sort(selected.begin(), selected.end());

  const auto m = static_cast<Count>(pvalues.size());
  Count best = size;
  for (Count k = 1; k <= m && k - 1 < best; ++k) {
    const double threshold = alpha * static_cast<double>(k) / static_cast<double>(m);
    const auto at_or_below = static_cast<Count>(
        std::upper_bound(selected.begin(), selected.end(), threshold) - selected.begin());
    best = std::min(best, size - at_or_below + k - 1);
  }
  return std::clamp<Count>(best, 0, size);
}

Count bonferroni_bound(const PValueVector& pvalues, const Selection& s, double alpha) {
  check_alpha(alpha);
  check_selection(pvalues, s);
  const double threshold = alpha / static_cast<double>(pvalues.size());
  Count n = 0;
  for (Index i : s.indices()) n += pvalues[i] > threshold ? 1 : 0;
  return n;
}

Count hybrid_bound(const PValueVector& pvalues, std::span<const Region> tree_regions,
                   const Selection& s, double alpha, double gamma) {
  check_alpha(alpha);
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "gamma must lie in [0, 1]");
  }
  check_selection(pvalues, s);
  const Count trivial = static_cast<Count>(s.size());
  const Count simes = gamma < 1.0 ? simes_bound(pvalues, s, (1.0 - gamma) * alpha) : trivial;
  Count tree = trivial;
  if (gamma > 0.0) {
    const CalibrationConfig config{gamma * alpha, tree_regions.size(), ZetaMethod::Dkw};
    tree = v_star_forest(calibrate_family(tree_regions, pvalues, config), s);
  }
  return std::min(simes, tree);
}

}  // namespace posthoc
