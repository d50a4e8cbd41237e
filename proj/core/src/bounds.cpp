#include "posthoc/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "posthoc/error.hpp"

namespace posthoc {
namespace {

constexpr Count kInfinite = std::numeric_limits<Count>::max() / 4;

void check_selection(const ReferenceFamily& family, const Selection& s) {
  if (!s.empty() && s.indices().back() > family.m()) {
    throw Error(ErrorCode::InvalidArgument, "selection index " +
                                                std::to_string(s.indices().back()) +
                                                " exceeds m = " + std::to_string(family.m()));
  }
}

// |S n R_k| for every member, for arbitrary (non-forest) families.
std::vector<Count> intersection_counts(const ReferenceFamily& family, const Selection& s) {
  std::vector<char> in_s(static_cast<std::size_t>(family.m()) + 1, 0);
  for (Index i : s.indices()) in_s[static_cast<std::size_t>(i)] = 1;
  std::vector<Count> counts(family.size(), 0);
  for (std::size_t k = 0; k < family.size(); ++k) {
    for (Index i : family.region(k)) counts[k] += in_s[static_cast<std::size_t>(i)];
  }
  return counts;
}

std::vector<Count> prefix_sums(std::span<const Count> values) {
  std::vector<Count> prefix(values.size() + 1, 0);
  std::partial_sum(values.begin(), values.end(), prefix.begin() + 1);
  return prefix;
}

Count interval_count(const std::vector<Count>& prefix, const AtomInterval& iv) {
  return prefix[iv.last + 1] - prefix[iv.first];
}

// Min-plus convolution of two "at most j members" cost tables, truncated to
// q + 1 entries.
std::vector<Count> min_plus(const std::vector<Count>& a, const std::vector<Count>& b,
                            std::size_t q) {
  const std::size_t n = std::min(a.size() + b.size() - 1, q + 1);
  std::vector<Count> out(n, kInfinite);
  for (std::size_t i = 0; i < a.size() && i < n; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < n; ++j) {
      out[i + j] = std::min(out[i + j], a[i] + b[j]);
    }
  }
  return out;
}

// On a forest, an optimal Q can always be taken pairwise disjoint (dropping a
// member nested in another one keeps the union and lowers the sum), so the
// minimum is a knapsack over the forest: cost[k][j] is the best value inside
// R_k using at most j members.
Count v_tilde_q_forest(const ReferenceFamily& family, const Selection& s, std::size_t q) {
  const ForestIndex index = build_index(family);
  const auto prefix = prefix_sums(index.atom_counts(s.indices()));
  const std::size_t n = family.size();

  std::vector<Count> covered(n);
  for (std::size_t k = 0; k < n; ++k) covered[k] = interval_count(prefix, index.interval_of[k]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return index.depth_of[a] > index.depth_of[b];
  });

  std::vector<std::vector<Count>> cost(n);
  for (std::size_t k : order) {
    Count leftover = covered[k];
    for (std::size_t c : index.children_of[k]) leftover -= covered[c];
    std::vector<Count> table{leftover};
    for (std::size_t c : index.children_of[k]) {
      table = min_plus(table, cost[c], q);
      std::vector<Count>().swap(cost[c]);
    }
    if (table.size() < 2 && q >= 1) table.push_back(kInfinite);
    const Count own = std::min(family.zeta(k), covered[k]);
    for (std::size_t j = 1; j < table.size(); ++j) table[j] = std::min(table[j], own);
    for (std::size_t j = 1; j < table.size(); ++j) table[j] = std::min(table[j], table[j - 1]);
    cost[k] = std::move(table);
  }

  Count outside = static_cast<Count>(s.size());
  for (std::size_t r : index.roots) outside -= covered[r];
  std::vector<Count> total{outside};
  for (std::size_t r : index.roots) total = min_plus(total, cost[r], q);
  for (std::size_t j = 1; j < total.size(); ++j) total[j] = std::min(total[j], total[j - 1]);
  return total[std::min(q, total.size() - 1)];
}

class SubsetEnumerator {
 public:
  SubsetEnumerator(const ReferenceFamily& family, const Selection& s, std::size_t q)
      : q_(q), selected_(static_cast<Count>(s.size())), words_((s.size() + 63) / 64) {
    std::vector<std::size_t> position(static_cast<std::size_t>(family.m()) + 1, s.size());
    for (std::size_t p = 0; p < s.size(); ++p) {
      position[static_cast<std::size_t>(s.indices()[p])] = p;
    }
    masks_.assign(family.size(), std::vector<std::uint64_t>(words_, 0));
    caps_.resize(family.size());
    for (std::size_t k = 0; k < family.size(); ++k) {
      Count hits = 0;
      for (Index i : family.region(k)) {
        const std::size_t p = position[static_cast<std::size_t>(i)];
        if (p < s.size()) {
          masks_[k][p / 64] |= std::uint64_t{1} << (p % 64);
          ++hits;
        }
      }
      caps_[k] = std::min(family.zeta(k), hits);
    }
  }

  Count run() {
    std::vector<std::uint64_t> none(words_, 0);
    best_ = selected_;
    visit(0, 0, 0, none);
    return best_;
  }

 private:
  void visit(std::size_t next, std::size_t chosen, Count sum,
             const std::vector<std::uint64_t>& unioned) {
    Count outside = selected_;
    for (std::uint64_t w : unioned) outside -= std::popcount(w);
    best_ = std::min(best_, sum + outside);
    if (chosen == q_) return;
    std::vector<std::uint64_t> grown(words_);
    for (std::size_t k = next; k < masks_.size(); ++k) {
      for (std::size_t w = 0; w < words_; ++w) grown[w] = unioned[w] | masks_[k][w];
      visit(k + 1, chosen + 1, sum + caps_[k], grown);
    }
  }

  std::size_t q_;
  Count selected_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> masks_;
  std::vector<Count> caps_;
  Count best_ = 0;
};

void check_q(const ReferenceFamily& family, std::size_t q) {
  if (q < 1 || q > family.size()) {
    throw Error(ErrorCode::InvalidArgument, "q = " + std::to_string(q) + " outside 1.." +
                                                std::to_string(family.size()));
  }
}

}  // namespace

Selection::Selection(std::vector<Index> indices) : indices_(normalize_indices(std::move(indices))) {}

Selection Selection::all(Index m) {
  std::vector<Index> v(static_cast<std::size_t>(std::max<Index>(m, 0)));
  std::iota(v.begin(), v.end(), Index{1});
  return Selection(std::move(v));
}

Count v_bar(const ReferenceFamily& family, const Selection& s) {
  check_selection(family, s);
  const Count size = static_cast<Count>(s.size());
  const auto counts = intersection_counts(family, s);
  Count best = size;
  for (std::size_t k = 0; k < family.size(); ++k) {
    best = std::min(best, family.zeta(k) + (size - counts[k]));
  }
  return best;
}

Count v_tilde_q_enumerate(const ReferenceFamily& family, const Selection& s, std::size_t q,
                          std::size_t cap) {
  check_selection(family, s);
  check_q(family, q);
  if (family.size() > cap) {
    throw Error(ErrorCode::FamilyTooLargeForEnumeration,
                std::to_string(family.size()) + " members exceed the enumeration cap of " +
                    std::to_string(cap));
  }
  return SubsetEnumerator(family, s, q).run();
}

Count v_tilde_q(const ReferenceFamily& family, const Selection& s, std::size_t q) {
  check_selection(family, s);
  check_q(family, q);
  if (validate_forest(family).is_forest) return v_tilde_q_forest(family, s, q);
  return v_tilde_q_enumerate(family, s, q);
}

Count v_tilde(const ReferenceFamily& family, const Selection& s) {
  check_selection(family, s);
  if (family.empty()) return static_cast<Count>(s.size());
  if (validate_forest(family).is_forest) return v_star_forest(family, s);
  return v_tilde_q_enumerate(family, s, family.size());
}

Count v_star_from_atom_counts(const ForestIndex& completed, std::span<const Count> zetas,
                              std::span<const Count> atom_counts) {
  if (!completed.all_atoms) {
    throw Error(ErrorCode::InvalidArgument, "level sweep requires a completed family");
  }
  if (zetas.size() != completed.member_count() || atom_counts.size() != completed.atoms.size()) {
    throw Error(ErrorCode::InvalidArgument, "zeta or atom count size mismatch");
  }
  const auto prefix = prefix_sums(atom_counts);
  const std::size_t n = completed.member_count();
  const int top = completed.max_depth;

  std::vector<Count> cap(n);
  for (std::size_t k = 0; k < n; ++k) {
    cap[k] = std::min(zetas[k], interval_count(prefix, completed.interval_of[k]));
  }

  std::vector<Count> value(n, 0);
  for (std::size_t k : completed.levels[static_cast<std::size_t>(top - 1)]) value[k] = cap[k];
  for (int h = top - 1; h >= 1; --h) {
    for (std::size_t k : completed.levels[static_cast<std::size_t>(h - 1)]) {
      // Atoms carried down from a shallower depth are their own successor
      // and keep their value.
      if (completed.depth_of[k] < h) continue;
      const auto& children = completed.children_of[k];
      if (children.empty()) {
        value[k] = cap[k];
        continue;
      }
      Count below = 0;
      for (std::size_t c : children) below += value[c];
      value[k] = std::min(cap[k], below);
    }
  }
  Count total = 0;
  for (std::size_t k : completed.levels[0]) total += value[k];
  return total;
}

Count v_star_forest(const ReferenceFamily& family, const ForestIndex& index, const Selection& s) {
  check_selection(family, s);
  if (index.member_count() != family.size() || index.m != family.m()) {
    throw Error(ErrorCode::InvalidArgument, "index was not built from this family");
  }
  if (index.all_atoms) {
    const auto zetas = family.zetas();
    return v_star_from_atom_counts(index, zetas, index.atom_counts(s.indices()));
  }
  const CompletedFamily completed = complete_family(family);
  const auto zetas = completed.family.zetas();
  return v_star_from_atom_counts(completed.index, zetas,
                                 completed.index.atom_counts(s.indices()));
}

Count v_star_forest(const ReferenceFamily& family, const Selection& s) {
  const CompletedFamily completed = complete_family(family);
  return v_star_forest(completed.family, completed.index, s);
}

Count v_star_bruteforce(const ReferenceFamily& family, const Selection& s) {
  check_selection(family, s);
  if (family.m() > kBruteForceMaxM) {
    throw Error(ErrorCode::ProblemTooLarge, "m = " + std::to_string(family.m()) +
                                                " exceeds " + std::to_string(kBruteForceMaxM));
  }
  // Constraints only shrink as A grows, so the maximum is attained by some
  // A inside S; encode subsets of S as bit masks over positions in S.
  const std::size_t size = s.size();
  std::vector<std::uint32_t> masks(family.size(), 0);
  std::vector<Count> zetas = family.zetas();
  for (std::size_t k = 0; k < family.size(); ++k) {
    for (std::size_t p = 0; p < size; ++p) {
      if (family.region(k).contains(s.indices()[p])) masks[k] |= std::uint32_t{1} << p;
    }
  }
  int best = 0;
  const std::uint32_t end = std::uint32_t{1} << size;
  for (std::uint32_t a = 0; a < end; ++a) {
    const int bits = std::popcount(a);
    if (bits <= best) continue;
    bool admissible = true;
    for (std::size_t k = 0; k < masks.size() && admissible; ++k) {
      admissible = std::popcount(a & masks[k]) <= zetas[k];
    }
    if (admissible) best = bits;
  }
  return best;
}

Count true_discoveries(Count bound, const Selection& s) {
  const Count size = static_cast<Count>(s.size());
  if (bound < 0 || bound > size) {
    throw Error(ErrorCode::InvalidArgument, "bound outside [0, |S|]");
  }
  return size - bound;
}

}  // namespace posthoc
