#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "posthoc/family.hpp"

namespace posthoc {

/// A possibly empty, sorted, duplicate-free set of hypothesis indices.
class Selection {
 public:
  Selection() = default;
  explicit Selection(std::vector<Index> indices);

  static Selection all(Index m);

  std::span<const Index> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

 private:
  std::vector<Index> indices_;
};

// Largest family for which the general (non-forest) interpolation bound is
// computed by enumerating subsets of members.
inline constexpr std::size_t kEnumerationCap = 20;
// Largest m for the exhaustive optimal-bound oracle.
inline constexpr Index kBruteForceMaxM = 20;

/// |S| ^ min_k (zeta_k + |S \ R_k|). Any family, forest or not.
Count v_bar(const ReferenceFamily& family, const Selection& s);

/// Minimum over Q with |Q| <= q of sum_{k in Q} zeta_k ^ |S n R_k| + |S \ U_Q R_k|.
///
/// Forest families use an exact tree knapsack over disjoint members; other
/// families enumerate subsets and throw FamilyTooLargeForEnumeration beyond
/// kEnumerationCap members.
Count v_tilde_q(const ReferenceFamily& family, const Selection& s, std::size_t q);

/// The same minimum by explicit enumeration of every Q, whatever the family.
Count v_tilde_q_enumerate(const ReferenceFamily& family, const Selection& s, std::size_t q,
                          std::size_t cap = kEnumerationCap);

/// v_tilde_q with q = K; on forests this is the optimal bound.
Count v_tilde(const ReferenceFamily& family, const Selection& s);

/// Optimal bound on a forest family by the bottom-up level sweep.
///
/// `index` must come from build_index(family). When the family is not
/// complete it is completed first, which leaves the bound unchanged.
/// Throws NotAForest (from indexing) or MissingZeta.
Count v_star_forest(const ReferenceFamily& family, const ForestIndex& index,
                    const Selection& s);
Count v_star_forest(const ReferenceFamily& family, const Selection& s);

/// Level sweep on a completed index given per-member zetas and the per-atom
/// counts of the selection. This is the O(H m) core used for envelopes.
Count v_star_from_atom_counts(const ForestIndex& completed, std::span<const Count> zetas,
                              std::span<const Count> atom_counts);

/// max |S n A| over all A with |R_k n A| <= zeta_k for every k, by
/// exhaustive search. Throws ProblemTooLarge when m > kBruteForceMaxM.
Count v_star_bruteforce(const ReferenceFamily& family, const Selection& s);

/// |S| - bound.
Count true_discoveries(Count bound, const Selection& s);

}  // namespace posthoc
