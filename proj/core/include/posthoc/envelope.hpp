#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "posthoc/bounds.hpp"
#include "posthoc/calibration.hpp"
#include "posthoc/family.hpp"

namespace posthoc {

struct EnvelopePoint {
  Index k = 0;
  Count value = 0;
};

/// (k, V(S_k)) for k = 1..m, where S_k holds the k smallest p-values.
struct Envelope {
  std::vector<EnvelopePoint> points;

  std::size_t size() const noexcept { return points.size(); }
  Count value(Index k) const { return points.at(static_cast<std::size_t>(k - 1)).value; }
  /// k - V(S_k)
  Count true_discoveries(Index k) const { return k - value(k); }
};

/// Hypotheses sorted by increasing p-value, ties broken by index.
std::vector<Index> topk_order(const PValueVector& pvalues);

/// Evaluates a bound on every top-k selection of one p-value ordering.
class BoundEvaluator {
 public:
  virtual ~BoundEvaluator() = default;

  virtual bool needs_mask() const { return false; }
  /// values[k - 1] = V({order[0], ..., order[k - 1]}).
  virtual std::vector<Count> evaluate_topk(std::span<const Index> order,
                                           const NullMask* mask) const = 0;
};

/// |S_k n H_0|, the quantity every bound is meant to cover.
class OracleEvaluator final : public BoundEvaluator {
 public:
  bool needs_mask() const override { return true; }
  std::vector<Count> evaluate_topk(std::span<const Index> order,
                                   const NullMask* mask) const override;
};

/// Simes bound on nested top-k sets in O(log m) per k. `order` must sort the
/// same p-values ascending.
class SimesEvaluator final : public BoundEvaluator {
 public:
  SimesEvaluator(const PValueVector& pvalues, double alpha);

  std::vector<Count> evaluate_topk(std::span<const Index> order,
                                   const NullMask* mask) const override;

 private:
  PValueVector pvalues_;
  double alpha_;
};

/// Optimal forest bound, by the level sweep on per-atom counts.
class ForestEvaluator final : public BoundEvaluator {
 public:
  explicit ForestEvaluator(const ReferenceFamily& calibrated);
  /// Reuses a completed structure across calibrations. `zetas` covers the
  /// members of the original family (or of the completed one); members added
  /// by completion get zeta = |P_i|.
  ForestEvaluator(std::shared_ptr<const CompletedFamily> structure, std::span<const Count> zetas);

  std::vector<Count> evaluate_topk(std::span<const Index> order,
                                   const NullMask* mask) const override;

 private:
  std::shared_ptr<const CompletedFamily> completed_;
  std::vector<Count> zetas_;
};

/// Pointwise minimum of two evaluators.
class MinEvaluator final : public BoundEvaluator {
 public:
  MinEvaluator(const BoundEvaluator& first, const BoundEvaluator& second)
      : first_(&first), second_(&second) {}

  bool needs_mask() const override { return first_->needs_mask() || second_->needs_mask(); }
  std::vector<Count> evaluate_topk(std::span<const Index> order,
                                   const NullMask* mask) const override;

 private:
  const BoundEvaluator* first_;
  const BoundEvaluator* second_;
};

/// Any selection bound, re-evaluated from scratch on each S_k.
class SelectionEvaluator final : public BoundEvaluator {
 public:
  explicit SelectionEvaluator(std::function<Count(const Selection&)> bound)
      : bound_(std::move(bound)) {}

  std::vector<Count> evaluate_topk(std::span<const Index> order,
                                   const NullMask* mask) const override;

 private:
  std::function<Count(const Selection&)> bound_;
};

/// Throws MaskRequiredForOracle when the evaluator needs a mask and none is given.
Envelope envelope(const PValueVector& pvalues, const BoundEvaluator& bound,
                  const NullMask* mask = nullptr);

}  // namespace posthoc
