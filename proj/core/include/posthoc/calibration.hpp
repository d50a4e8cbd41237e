#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "posthoc/bounds.hpp"
#include "posthoc/family.hpp"

namespace posthoc {

/// m p-values, each in [0, 1]; hypothesis i is at position i - 1.
class PValueVector {
 public:
  explicit PValueVector(std::vector<double> values);

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  Index m() const noexcept { return static_cast<Index>(values_.size()); }
  double operator[](Index i) const { return values_[static_cast<std::size_t>(i - 1)]; }

  /// The p-values of the hypotheses in `region`, in index order.
  std::vector<double> restrict_to(const Region& region) const;

 private:
  std::vector<double> values_;
};

/// Which hypotheses are true nulls; only known in simulations.
class NullMask {
 public:
  explicit NullMask(std::vector<bool> is_null) : is_null_(std::move(is_null)) {}

  std::size_t size() const noexcept { return is_null_.size(); }
  bool is_null(Index i) const { return is_null_[static_cast<std::size_t>(i - 1)]; }
  Count null_count(const Region& region) const;
  Count null_count(std::span<const Index> indices) const;
  Count non_null_total() const;

 private:
  std::vector<bool> is_null_;
};

enum class ZetaMethod { Dkw, Gw };

struct CalibrationConfig {
  double alpha = 0.05;
  std::size_t K = 1;
  ZetaMethod method = ZetaMethod::Dkw;

  /// Throws InvalidArgument for alpha outside (0, 1) or K == 0, and
  /// AlphaTooLarge unless alpha / K < 1/2.
  void validate() const;
  /// sqrt(log(K / alpha) / 2).
  double constant() const;
};

/// s ^ min over order statistics t = p_(l) < 1 (with p_(0) = 0) of
/// floor((C / (2(1-t)) + sqrt(C^2 / (4(1-t)^2) + (s-l)/(1-t)))^2).
Count dkw_zeta(std::span<const double> region_pvalues, double C);

/// s ^ min over the same t of floor((N_t + sqrt(s) C) / (1-t)), N_t = #{p > t}.
Count gw_zeta(std::span<const double> region_pvalues, double C);

Count local_zeta(ZetaMethod method, std::span<const double> region_pvalues, double C);

/// Local bounds for each region; config.K must equal regions.size().
std::vector<Count> calibrate_zetas(std::span<const Region> regions, const PValueVector& pvalues,
                                   const CalibrationConfig& config);

/// The regions with their calibrated local bounds. The regions must not
/// depend on the p-values for the joint error guarantee to hold.
ReferenceFamily calibrate_family(std::span<const Region> regions, const PValueVector& pvalues,
                                 const CalibrationConfig& config);

/// min_{1<=k<=m} sum_{i in S} 1{p_i > alpha k / m} + k - 1, within [0, |S|].
Count simes_bound(const PValueVector& pvalues, const Selection& s, double alpha);

/// sum_{i in S} 1{p_i > alpha / m}.
Count bonferroni_bound(const PValueVector& pvalues, const Selection& s, double alpha);

/// min(Simes at level (1 - gamma) alpha, forest bound of `tree_regions`
/// calibrated at level gamma alpha). At gamma = 0 (resp. 1) the tree (resp.
/// Simes) side is the trivial bound |S|.
Count hybrid_bound(const PValueVector& pvalues, std::span<const Region> tree_regions,
                   const Selection& s, double alpha, double gamma);

}  // namespace posthoc
