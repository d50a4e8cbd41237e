#include "posthoc/family.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "posthoc/error.hpp"

namespace posthoc {
namespace {

enum class Relation { Disjoint, FirstInSecond, SecondInFirst, Overlap };

std::size_t intersection_size(std::span<const Index> a, std::span<const Index> b) {
  std::size_t n = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

// Regions of a family are pairwise distinct, so "nested" is always strict.
Relation relate(const Region& a, const Region& b) {
  if (a.back() < b.front() || b.back() < a.front()) return Relation::Disjoint;
  const std::size_t common = intersection_size(a.indices(), b.indices());
  if (common == 0) return Relation::Disjoint;
  if (common == a.size()) return Relation::FirstInSecond;
  if (common == b.size()) return Relation::SecondInFirst;
  return Relation::Overlap;
}

std::string describe_pair(std::size_t k, std::size_t kp) {
  return "members " + std::to_string(k + 1) + " and " + std::to_string(kp + 1) +
         " are neither disjoint nor nested";
}

// supersets[k] lists every k' with R_k strictly inside R_k'.
std::vector<std::vector<std::size_t>> strict_supersets(const ReferenceFamily& family) {
  const std::size_t n = family.size();
  std::vector<std::vector<std::size_t>> supersets(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t kp = k + 1; kp < n; ++kp) {
      switch (relate(family.region(k), family.region(kp))) {
        case Relation::Disjoint: break;
        case Relation::FirstInSecond: supersets[k].push_back(kp); break;
        case Relation::SecondInFirst: supersets[kp].push_back(k); break;
        case Relation::Overlap: throw Error(ErrorCode::NotAForest, describe_pair(k, kp));
      }
    }
  }
  return supersets;
}

std::vector<int> depths_from(const std::vector<std::vector<std::size_t>>& supersets) {
  std::vector<int> depth(supersets.size());
  for (std::size_t k = 0; k < supersets.size(); ++k) {
    depth[k] = 1 + static_cast<int>(supersets[k].size());
  }
  return depth;
}

}  // namespace

std::vector<Index> normalize_indices(std::vector<Index> indices, Index m) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw Error(ErrorCode::InvalidArgument, "duplicate hypothesis index");
  }
  if (!indices.empty()) {
    if (indices.front() < 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "hypothesis index " + std::to_string(indices.front()) + " < 1");
    }
    if (m > 0 && indices.back() > m) {
      throw Error(ErrorCode::InvalidArgument, "hypothesis index " +
                                                  std::to_string(indices.back()) +
                                                  " exceeds m = " + std::to_string(m));
    }
  }
  return indices;
}

Region::Region(std::vector<Index> indices) : indices_(normalize_indices(std::move(indices))) {
  if (indices_.empty()) throw Error(ErrorCode::InvalidArgument, "empty region");
}

Region Region::range(Index first, Index last) {
  if (first < 1 || last < first) {
    throw Error(ErrorCode::InvalidArgument, "invalid range");
  }
  std::vector<Index> v(static_cast<std::size_t>(last - first + 1));
  std::iota(v.begin(), v.end(), first);
  return Region(std::move(v));
}

bool Region::contains(Index i) const noexcept {
  return std::binary_search(indices_.begin(), indices_.end(), i);
}

ReferenceFamily::ReferenceFamily(Index m, std::vector<Member> members)
    : m_(m), members_(std::move(members)) {
  if (m_ < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  for (auto& member : members_) {
    if (member.region.back() > m_) {
      throw Error(ErrorCode::InvalidArgument, "region index " +
                                                  std::to_string(member.region.back()) +
                                                  " exceeds m = " + std::to_string(m_));
    }
    if (member.zeta) {
      if (*member.zeta < 0) throw Error(ErrorCode::InvalidArgument, "negative zeta");
      member.zeta = std::min<Count>(*member.zeta, static_cast<Count>(member.region.size()));
    }
  }
  std::vector<std::size_t> order(members_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(members_[a].region.begin(), members_[a].region.end(),
                                        members_[b].region.begin(), members_[b].region.end());
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (members_[order[i - 1]].region == members_[order[i]].region) {
      throw Error(ErrorCode::InvalidArgument,
                  "members " + std::to_string(std::min(order[i - 1], order[i]) + 1) + " and " +
                      std::to_string(std::max(order[i - 1], order[i]) + 1) +
                      " have identical regions");
    }
  }
}

Count ReferenceFamily::zeta(std::size_t k) const {
  const auto& z = members_.at(k).zeta;
  if (!z) throw Error(ErrorCode::MissingZeta, "member " + std::to_string(k + 1) + " has no zeta");
  return *z;
}

bool ReferenceFamily::has_all_zetas() const noexcept {
  return std::all_of(members_.begin(), members_.end(),
                     [](const Member& mb) { return mb.zeta.has_value(); });
}

std::vector<Count> ReferenceFamily::zetas() const {
  std::vector<Count> out(members_.size());
  for (std::size_t k = 0; k < members_.size(); ++k) out[k] = zeta(k);
  return out;
}

ReferenceFamily ReferenceFamily::with_zetas(std::span<const Count> zetas) const {
  if (zetas.size() != members_.size()) {
    throw Error(ErrorCode::InvalidArgument, "zeta count does not match member count");
  }
  ReferenceFamily out = *this;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (zetas[k] < 0) throw Error(ErrorCode::InvalidArgument, "negative zeta");
    out.members_[k].zeta =
        std::min<Count>(zetas[k], static_cast<Count>(members_[k].region.size()));
  }
  return out;
}

ForestReport validate_forest(const ReferenceFamily& family) {
  const std::size_t n = family.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t kp = k + 1; kp < n; ++kp) {
      if (relate(family.region(k), family.region(kp)) == Relation::Overlap) {
        return ForestReport{false, std::make_pair(k, kp)};
      }
    }
  }
  return ForestReport{};
}

namespace {

std::vector<Region> atoms_from_depths(const ReferenceFamily& family,
                                      const std::vector<int>& depth) {
  const Index m = family.m();
  const int max_depth = depth.empty() ? 0 : *std::max_element(depth.begin(), depth.end());

  std::vector<std::vector<Index>> blocks(1);
  blocks[0].resize(static_cast<std::size_t>(m));
  std::iota(blocks[0].begin(), blocks[0].end(), Index{1});

  std::vector<std::size_t> block_of(static_cast<std::size_t>(m));
  std::vector<char> taken(static_cast<std::size_t>(m));
  for (int h = 1; h <= max_depth; ++h) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (Index i : blocks[b]) block_of[static_cast<std::size_t>(i - 1)] = b;
    }
    // Depth-h members are pairwise disjoint and each sits inside exactly one
    // block of the previous level (the block of its depth h-1 parent).
    std::vector<std::vector<std::size_t>> succ(blocks.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
      if (depth[k] == h) {
        succ[block_of[static_cast<std::size_t>(family.region(k).front() - 1)]].push_back(k);
      }
    }
    std::vector<std::vector<Index>> next;
    next.reserve(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (succ[b].empty()) {
        next.push_back(std::move(blocks[b]));
        continue;
      }
      std::vector<std::vector<Index>> pieces;
      for (std::size_t k : succ[b]) {
        const auto idx = family.region(k).indices();
        for (Index i : idx) taken[static_cast<std::size_t>(i - 1)] = 1;
        pieces.emplace_back(idx.begin(), idx.end());
      }
      std::vector<Index> leftover;
      for (Index i : blocks[b]) {
        if (!taken[static_cast<std::size_t>(i - 1)]) leftover.push_back(i);
      }
      for (const auto& piece : pieces) {
        for (Index i : piece) taken[static_cast<std::size_t>(i - 1)] = 0;
      }
      if (!leftover.empty()) pieces.push_back(std::move(leftover));
      std::sort(pieces.begin(), pieces.end(),
                [](const auto& a, const auto& c) { return a.front() < c.front(); });
      for (auto& piece : pieces) next.push_back(std::move(piece));
    }
    blocks = std::move(next);
  }

  std::vector<Region> atoms;
  atoms.reserve(blocks.size());
  for (auto& block : blocks) atoms.emplace_back(std::move(block));
  return atoms;
}

}  // namespace

std::vector<Region> compute_atoms(const ReferenceFamily& family) {
  return atoms_from_depths(family, depths_from(strict_supersets(family)));
}

ForestIndex build_index(const ReferenceFamily& family) {
  const auto supersets = strict_supersets(family);
  const std::size_t n = family.size();

  ForestIndex index;
  index.m = family.m();
  index.depth_of = depths_from(supersets);
  index.atoms = atoms_from_depths(family, index.depth_of);

  index.atom_of.resize(static_cast<std::size_t>(family.m()));
  for (std::size_t a = 0; a < index.atoms.size(); ++a) {
    for (Index i : index.atoms[a]) index.atom_of[static_cast<std::size_t>(i - 1)] = a;
  }

  index.interval_of.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Region& r = family.region(k);
    AtomInterval iv{index.atom_of[static_cast<std::size_t>(r.front() - 1)], 0};
    iv.last = iv.first;
    for (Index i : r) {
      const std::size_t a = index.atom_of[static_cast<std::size_t>(i - 1)];
      iv.first = std::min(iv.first, a);
      iv.last = std::max(iv.last, a);
    }
    std::size_t covered = 0;
    for (std::size_t a = iv.first; a <= iv.last; ++a) covered += index.atoms[a].size();
    if (covered != r.size()) {
      throw Error(ErrorCode::NotAForest,
                  "member " + std::to_string(k + 1) + " is not a union of consecutive atoms");
    }
    index.interval_of[k] = iv;
  }

  index.parent_of.assign(n, std::nullopt);
  index.children_of.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    // The immediate superset is the deepest one.
    for (std::size_t kp : supersets[k]) {
      if (!index.parent_of[k] || index.depth_of[kp] > index.depth_of[*index.parent_of[k]]) {
        index.parent_of[k] = kp;
      }
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (index.parent_of[k]) {
      index.children_of[*index.parent_of[k]].push_back(k);
    } else {
      index.roots.push_back(k);
    }
  }
  index.leaf_count = static_cast<std::size_t>(
      std::count_if(index.children_of.begin(), index.children_of.end(),
                    [](const auto& c) { return c.empty(); }));
  index.max_depth =
      n == 0 ? 0 : *std::max_element(index.depth_of.begin(), index.depth_of.end());

  std::vector<char> atom_is_member(index.atoms.size(), 0);
  for (const auto& iv : index.interval_of) {
    if (iv.is_atom()) atom_is_member[iv.first] = 1;
  }
  index.all_atoms =
      std::all_of(atom_is_member.begin(), atom_is_member.end(), [](char c) { return c != 0; });

  index.levels.assign(static_cast<std::size_t>(index.max_depth), {});
  for (int h = 1; h <= index.max_depth; ++h) {
    auto& level = index.levels[static_cast<std::size_t>(h - 1)];
    for (std::size_t k = 0; k < n; ++k) {
      const int d = index.depth_of[k];
      if (d == h || (index.interval_of[k].is_atom() && d <= h)) level.push_back(k);
    }
  }
  return index;
}

std::vector<Count> ForestIndex::atom_counts(std::span<const Index> selection) const {
  std::vector<Count> counts(atoms.size(), 0);
  for (Index i : selection) {
    if (i < 1 || i > m) {
      throw Error(ErrorCode::InvalidArgument,
                  "selection index " + std::to_string(i) + " outside 1..m");
    }
    ++counts[atom_of[static_cast<std::size_t>(i - 1)]];
  }
  return counts;
}

CompletedFamily complete_family(const ReferenceFamily& family) {
  ForestIndex index = build_index(family);
  std::vector<Member> members(family.members().begin(), family.members().end());
  if (!index.all_atoms) {
    std::vector<char> present(index.atoms.size(), 0);
    for (const auto& iv : index.interval_of) {
      if (iv.is_atom()) present[iv.first] = 1;
    }
    for (std::size_t a = 0; a < index.atoms.size(); ++a) {
      if (!present[a]) {
        members.push_back(Member{index.atoms[a], static_cast<Count>(index.atoms[a].size())});
      }
    }
  }
  ReferenceFamily completed(family.m(), std::move(members));
  completed.completed_ = true;
  if (completed.size() != family.size()) index = build_index(completed);
  return CompletedFamily{std::move(completed), std::move(index)};
}

LevelSet level_set(const ForestIndex& index, int h) {
  if (h < 1 || h > index.max_depth) {
    throw Error(ErrorCode::HNotInRange, "h = " + std::to_string(h) + " outside 1.." +
                                            std::to_string(index.max_depth));
  }
  return LevelSet{h, index.levels[static_cast<std::size_t>(h - 1)]};
}

}  // namespace posthoc
