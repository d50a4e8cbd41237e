#pragma once

#include <vector>

#include "posthoc/family.hpp"

namespace posthoc::testing {

// Nine regions over m = 25 forming two trees of depth 3 and 2, with
// hypotheses 23..25 left uncovered.
inline std::vector<Region> nine_region_forest() {
  return {Region::range(1, 20), Region::range(1, 2),   Region::range(3, 10),
          Region::range(11, 20), Region::range(5, 10), Region::range(11, 16),
          Region::range(17, 20), Region::range(21, 22), Region::range(22, 22)};
}

inline ReferenceFamily uncalibrated(Index m, const std::vector<Region>& regions) {
  std::vector<Member> members;
  for (const auto& r : regions) members.push_back(Member{r, std::nullopt});
  return ReferenceFamily(m, std::move(members));
}

inline ReferenceFamily with_zetas(Index m, const std::vector<Region>& regions,
                                  const std::vector<Count>& zetas) {
  std::vector<Member> members;
  for (std::size_t k = 0; k < regions.size(); ++k) members.push_back(Member{regions[k], zetas[k]});
  return ReferenceFamily(m, std::move(members));
}

// Three pairwise overlapping regions of {1..4}, each allowed one false
// positive. Not a forest; the optimal bound on {1..4} is 1 while the
// interpolation bound is 2.
inline ReferenceFamily three_region_crossing() {
  return with_zetas(4, {Region({1, 2, 4}), Region({2, 3, 4}), Region({1, 3, 4})}, {1, 1, 1});
}

}  // namespace posthoc::testing
