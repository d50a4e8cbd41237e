#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace posthoc {

// 1-based hypothesis index in {1, ..., m}.
using Index = std::int32_t;
// Cardinalities and local bounds.
using Count = std::int64_t;

// Sorts `indices` ascending; throws InvalidArgument on duplicates or on
// values outside [1, m] (m <= 0 disables the upper check).
std::vector<Index> normalize_indices(std::vector<Index> indices, Index m = 0);

struct CompletedFamily;

/// A non-empty, sorted, duplicate-free set of hypothesis indices.
class Region {
 public:
  explicit Region(std::vector<Index> indices);

  /// The contiguous block {first, ..., last}.
  static Region range(Index first, Index last);

  std::span<const Index> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  Index front() const noexcept { return indices_.front(); }
  Index back() const noexcept { return indices_.back(); }
  bool contains(Index i) const noexcept;

  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::vector<Index> indices_;
};

struct Member {
  Region region;
  std::optional<Count> zeta;
};

/// Reference regions R_k over {1..m} with their local bounds zeta_k.
///
/// Construction rejects out-of-range indices and duplicate regions. Negative
/// zetas are rejected; zetas larger than |R_k| are clamped to |R_k|. A zeta may be absent
/// (an uncalibrated family), in which case bound computations refuse it.
class ReferenceFamily {
 public:
  ReferenceFamily(Index m, std::vector<Member> members);

  Index m() const noexcept { return m_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::span<const Member> members() const noexcept { return members_; }
  const Member& operator[](std::size_t k) const { return members_[k]; }
  const Region& region(std::size_t k) const { return members_[k].region; }

  /// Throws MissingZeta when member k has no local bound.
  Count zeta(std::size_t k) const;
  bool has_all_zetas() const noexcept;
  std::vector<Count> zetas() const;

  /// True once produced by complete_family().
  bool completed() const noexcept { return completed_; }

  /// Same regions, new local bounds (clamped like at construction).
  ReferenceFamily with_zetas(std::span<const Count> zetas) const;

 private:
  friend CompletedFamily complete_family(const ReferenceFamily& family);

  Index m_;
  std::vector<Member> members_;
  bool completed_ = false;
};

struct ForestReport {
  bool is_forest = true;
  // First offending pair (k, k') with k < k', 0-based, lexicographic scan.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

ForestReport validate_forest(const ReferenceFamily& family);

/// Inclusive range of atom positions (0-based).
struct AtomInterval {
  std::size_t first = 0;
  std::size_t last = 0;

  bool is_atom() const noexcept { return first == last; }
  bool contains(const AtomInterval& other) const noexcept {
    return first <= other.first && other.last <= last;
  }
};

/// Atom/interval representation of a forest family.
///
/// Every member is a union of consecutive atoms, so all per-member set
/// arithmetic reduces to sums over an atom range. Member indices refer to the
/// family the index was built from.
struct ForestIndex {
  Index m = 0;
  std::vector<Region> atoms;
  std::vector<std::size_t> atom_of;  // hypothesis i (at i - 1) -> atom position
  std::vector<AtomInterval> interval_of;
  std::vector<int> depth_of;  // 1 + number of strict supersets
  std::vector<std::optional<std::size_t>> parent_of;
  std::vector<std::vector<std::size_t>> children_of;
  std::vector<std::size_t> roots;
  std::size_t leaf_count = 0;  // members containing no other member
  int max_depth = 0;
  bool all_atoms = false;      // every atom is itself a member
  std::vector<std::vector<std::size_t>> levels;  // levels[h - 1] == K^h

  std::size_t member_count() const noexcept { return interval_of.size(); }

  /// Per-atom counts of a selection, as consumed by the bound routines.
  std::vector<Count> atom_counts(std::span<const Index> selection) const;
};

/// Atoms P_1..P_N by a level sweep over depths: each current atom is split
/// into its depth-h members plus the leftover piece. Pieces of one split are
/// emitted in order of their smallest index. Throws NotAForest.
std::vector<Region> compute_atoms(const ReferenceFamily& family);

/// Throws NotAForest.
ForestIndex build_index(const ReferenceFamily& family);

struct CompletedFamily {
  ReferenceFamily family;
  ForestIndex index;
};

/// Appends every atom that is not already a member, with zeta = |P_i|.
/// Throws NotAForest.
CompletedFamily complete_family(const ReferenceFamily& family);

struct LevelSet {
  int h = 0;
  std::vector<std::size_t> members;
};

/// K^h = {k : depth(k) == h, or member k is an atom with depth(k) <= h}.
/// Throws HNotInRange unless 1 <= h <= index.max_depth.
LevelSet level_set(const ForestIndex& index, int h);

}  // namespace posthoc
