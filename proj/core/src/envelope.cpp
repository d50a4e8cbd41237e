#include "posthoc/envelope.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "posthoc/error.hpp"

namespace posthoc {

std::vector<Index> topk_order(const PValueVector& pvalues) {
  std::vector<Index> order(pvalues.size());
  std::iota(order.begin(), order.end(), Index{1});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return pvalues[a] < pvalues[b]; });
  return order;
}

std::vector<Count> OracleEvaluator::evaluate_topk(std::span<const Index> order,
                                                  const NullMask* mask) const {
  if (mask == nullptr) throw Error(ErrorCode::MaskRequiredForOracle, "oracle needs a null mask");
  if (mask->size() < order.size()) throw Error(ErrorCode::InvalidArgument, "mask too short");
  std::vector<Count> out(order.size());
  Count nulls = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    nulls += mask->is_null(order[k]) ? 1 : 0;
    out[k] = nulls;
  }
  return out;
}

SimesEvaluator::SimesEvaluator(const PValueVector& pvalues, double alpha)
    : pvalues_(pvalues), alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
  }
}

std::vector<Count> SimesEvaluator::evaluate_topk(std::span<const Index> order,
                                                 const NullMask*) const {
  const PValueVector& p = pvalues_;
  const auto m = static_cast<Count>(p.size());
  if (order.size() != p.size()) throw Error(ErrorCode::InvalidArgument, "order size mismatch");
  std::vector<double> sorted(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) sorted[k] = p[order[k]];
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw Error(ErrorCode::InvalidArgument, "order does not sort the p-values");
  }

  // S_k holds the k smallest p-values, so |{i in S_k : p_i <= t}| = min(k, N(t))
  // with N(t) the overall count. For the threshold alpha j / m write N_j;
  // then V(S_k) = min_j (k - min(k, N_j) + j - 1). Terms with N_j >= k give
  // j - 1, minimised at the first such j (N_j is non-decreasing); the others
  // give k + (j - 1 - N_j), handled by a prefix minimum.
  std::vector<Count> reached(static_cast<std::size_t>(m) + 1, 0);  // N_j, 1-based j
  std::size_t cursor = 0;
  for (Count j = 1; j <= m; ++j) {
    const double threshold = alpha_ * static_cast<double>(j) / static_cast<double>(m);
    while (cursor < sorted.size() && sorted[cursor] <= threshold) ++cursor;
    reached[static_cast<std::size_t>(j)] = static_cast<Count>(cursor);
  }
  std::vector<Count> prefix_min(static_cast<std::size_t>(m) + 1,
                                std::numeric_limits<Count>::max());
  for (Count j = 1; j <= m; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    prefix_min[ju] = std::min(prefix_min[ju - 1], j - 1 - reached[ju]);
  }

  std::vector<Count> out(order.size());
  for (Count k = 1; k <= m; ++k) {
    Count best = k;
    const auto first = std::lower_bound(reached.begin() + 1, reached.end(), k);
    const Count j_star = first == reached.end() ? m + 1 : static_cast<Count>(first - reached.begin());
    if (j_star <= m) best = std::min(best, j_star - 1);
    if (j_star > 1) best = std::min(best, k + prefix_min[static_cast<std::size_t>(j_star - 1)]);
    out[static_cast<std::size_t>(k - 1)] = std::clamp<Count>(best, 0, k);
  }
  return out;
}

ForestEvaluator::ForestEvaluator(const ReferenceFamily& calibrated)
    : completed_(std::make_shared<const CompletedFamily>(complete_family(calibrated))),
      zetas_(completed_->family.zetas()) {}

ForestEvaluator::ForestEvaluator(std::shared_ptr<const CompletedFamily> structure,
                                 std::span<const Count> zetas)
    : completed_(std::move(structure)) {
  const ReferenceFamily& family = completed_->family;
  if (zetas.size() > family.size()) {
    throw Error(ErrorCode::InvalidArgument, "more zetas than members");
  }
  zetas_.assign(zetas.begin(), zetas.end());
  for (std::size_t k = 0; k < zetas_.size(); ++k) {
    if (zetas_[k] < 0) throw Error(ErrorCode::InvalidArgument, "negative zeta");
    zetas_[k] = std::min<Count>(zetas_[k], static_cast<Count>(family.region(k).size()));
  }
  for (std::size_t k = zetas_.size(); k < family.size(); ++k) {
    zetas_.push_back(static_cast<Count>(family.region(k).size()));
  }
}

std::vector<Count> ForestEvaluator::evaluate_topk(std::span<const Index> order,
                                                  const NullMask*) const {
  const ForestIndex& index = completed_->index;
  std::vector<Count> counts(index.atoms.size(), 0);
  std::vector<Count> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Index i = order[k];
    if (i < 1 || i > index.m) throw Error(ErrorCode::InvalidArgument, "order index outside 1..m");
    ++counts[index.atom_of[static_cast<std::size_t>(i - 1)]];
    out[k] = v_star_from_atom_counts(index, zetas_, counts);
  }
  return out;
}

std::vector<Count> MinEvaluator::evaluate_topk(std::span<const Index> order,
                                               const NullMask* mask) const {
  auto out = first_->evaluate_topk(order, mask);
  const auto other = second_->evaluate_topk(order, mask);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::min(out[k], other[k]);
  return out;
}

std::vector<Count> SelectionEvaluator::evaluate_topk(std::span<const Index> order,
                                                     const NullMask*) const {
  std::vector<Count> out(order.size());
  std::vector<Index> members;
  members.reserve(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    members.insert(std::upper_bound(members.begin(), members.end(), order[k]), order[k]);
    out[k] = bound_(Selection(members));
  }
  return out;
}

Envelope envelope(const PValueVector& pvalues, const BoundEvaluator& bound, const NullMask* mask) {
  if (bound.needs_mask() && mask == nullptr) {
    throw Error(ErrorCode::MaskRequiredForOracle, "oracle envelope needs a null mask");
  }
  const auto order = topk_order(pvalues);
  const auto values = bound.evaluate_topk(order, mask);
  Envelope out;
  out.points.reserve(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    out.points.push_back(EnvelopePoint{static_cast<Index>(k + 1), values[k]});
  }
  return out;
}

}  // namespace posthoc
