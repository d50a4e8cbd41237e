#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "generators.hpp"
#include "oracles.hpp"
#include "posthoc/bounds.hpp"
#include "posthoc/error.hpp"

using namespace posthoc;
using namespace posthoc::testing;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected posthoc::Error");
  return ErrorCode::InvalidArgument;
}

Selection range_selection(Index first, Index last) {
  std::vector<Index> v;
  for (Index i = first; i <= last; ++i) v.push_back(i);
  return Selection(std::move(v));
}

}  // namespace

TEST_CASE("crossing family: optimal bound beats interpolation") {
  const auto family = three_region_crossing();
  const auto all = Selection::all(4);
  CHECK(v_star_bruteforce(family, all) == 1);
  CHECK(oracle::optimal_bound(family, all) == 1);
  CHECK(v_tilde(family, all) == 2);
  CHECK(v_tilde_q(family, all, 3) == 2);
  CHECK(v_bar(family, all) == 2);
  CHECK(code_of([&] { (void)v_star_forest(family, all); }) == ErrorCode::NotAForest);
}

TEST_CASE("simple bound") {
  const ReferenceFamily one(3, {Member{Region({1, 2, 3}), 1}});
  CHECK(v_bar(one, Selection({1, 2})) == 1);
  CHECK(v_bar(one, Selection()) == 0);
  CHECK(v_bar(ReferenceFamily(5, {}), Selection({1, 4})) == 2);

  const auto loose = with_zetas(25, nine_region_forest(), {20, 2, 8, 10, 6, 6, 4, 2, 1});
  CHECK(v_bar(loose, Selection::all(25)) == 25);
  CHECK(v_star_forest(loose, Selection::all(25)) == 25);
}

TEST_CASE("interpolation bound arguments") {
  const auto family = three_region_crossing();
  CHECK(code_of([&] { (void)v_tilde_q(family, Selection::all(4), 0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { (void)v_tilde_q(family, Selection::all(4), 4); }) == ErrorCode::InvalidArgument);
  CHECK(v_tilde_q(family, Selection(), 2) == 0);
  CHECK(v_tilde_q(family, Selection::all(4), 1) == v_bar(family, Selection::all(4)));

  std::vector<Member> many;
  for (Index i = 1; i <= 21; ++i) many.push_back(Member{Region({i, i + 1}), 1});
  const ReferenceFamily big(22, std::move(many));
  CHECK(code_of([&] { (void)v_tilde(big, Selection::all(22)); }) ==
        ErrorCode::FamilyTooLargeForEnumeration);
}

TEST_CASE("single zero-budget root") {
  const ReferenceFamily family(6, {Member{Region::range(1, 6), 0}});
  CHECK(v_tilde(family, Selection({2, 5})) == 0);
  CHECK(v_star_forest(family, Selection({2, 5})) == 0);
}

TEST_CASE("nine region forest with hand-checked budgets") {
  // R1 = 1..20 (z 5), R2 = {1,2} (0), R3 = 3..10 (1), R4 = 11..20 (3),
  // R5 = 5..10 (0), R6 = 11..16 (2), R7 = 17..20 (2), R8 = {21,22} (1),
  // R9 = {22} (0).
  const auto family = with_zetas(25, nine_region_forest(), {5, 0, 1, 3, 0, 2, 2, 1, 0});
  // Whole set: R1 side min(5, 0 + 1 + 3) = 4, R8 side 1, free 3 -> 8.
  CHECK(v_star_forest(family, Selection::all(25)) == 8);
  CHECK(v_tilde(family, Selection::all(25)) == 8);
  CHECK(v_tilde_q(family, Selection::all(25), 5) == 8);
  // R3 side min(1, 2 + 0) = 1 restricted to 3..12: R4 side min(3, 2) = 2.
  CHECK(v_star_forest(family, range_selection(3, 12)) == 3);
}

TEST_CASE("disjoint families follow the closed form") {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 16)(rng);
    const auto regions = random_disjoint_regions(rng, m, 6);
    const auto family = with_random_zetas(rng, m, regions);
    const auto s = random_selection(rng, m);
    Count expected = 0;
    std::vector<bool> covered(static_cast<std::size_t>(m) + 1, false);
    for (std::size_t k = 0; k < family.size(); ++k) {
      Count inside = 0;
      for (Index i : s.indices()) inside += family.region(k).contains(i) ? 1 : 0;
      expected += std::min(family.zeta(k), inside);
      for (Index i : family.region(k)) covered[static_cast<std::size_t>(i)] = true;
    }
    for (Index i : s.indices()) expected += covered[static_cast<std::size_t>(i)] ? 0 : 1;
    CHECK(v_star_forest(family, s) == expected);
  }
}

TEST_CASE("nested families: simple bound is optimal") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 16)(rng);
    const auto family = with_random_zetas(rng, m, random_nested_regions(rng, m, 5));
    const auto s = random_selection(rng, m);
    CHECK(v_bar(family, s) == v_star_forest(family, s));
  }
}

TEST_CASE("random forests: every bound agrees with the oracles") {
  Rng rng(9);
  for (int trial = 0; trial < 500; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 12)(rng);
    const auto family = with_random_zetas(rng, m, random_forest_regions(rng, m, 6));
    const auto s = random_selection(rng, m);
    const Count expected = oracle::optimal_bound(family, s);
    CHECK(v_star_bruteforce(family, s) == expected);
    CHECK(v_star_forest(family, s) == expected);
    CHECK(v_tilde(family, s) == expected);
    if (!family.empty()) {
      const auto d = build_index(family).leaf_count;
      CHECK(v_tilde_q(family, s, d) == expected);
      for (std::size_t q = 1; q <= family.size(); ++q) {
        CHECK(v_tilde_q(family, s, q) == oracle::interpolation_bound(family, s, q));
        CHECK(v_tilde_q_enumerate(family, s, q) == oracle::interpolation_bound(family, s, q));
      }
    }
    const auto completed = complete_family(family);
    CHECK(v_star_forest(completed.family, s) == expected);
    CHECK(v_tilde(completed.family, s) == expected);
  }
}

TEST_CASE("arbitrary families: ordering chain") {
  Rng rng(10);
  for (int trial = 0; trial < 400; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(1, 10)(rng);
    const auto family = with_random_zetas(rng, m, random_regions(rng, m, 5));
    const auto s = random_selection(rng, m);
    const Count star = v_star_bruteforce(family, s);
    const Count tilde = v_tilde(family, s);
    CHECK(star == oracle::optimal_bound(family, s));
    CHECK(star <= tilde);
    Count previous = static_cast<Count>(s.size());
    for (std::size_t q = 1; q <= family.size(); ++q) {
      const Count value = v_tilde_q(family, s, q);
      CHECK(tilde <= value);
      CHECK(value <= v_bar(family, s));
      CHECK(value <= previous);
      previous = value;
    }
  }
}

TEST_CASE("bounds grow by at most one per added hypothesis") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Index m = std::uniform_int_distribution<Index>(2, 14)(rng);
    const auto family = with_random_zetas(rng, m, random_forest_regions(rng, m, 6));
    std::vector<Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Index{1});
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Index> members;
    Count star = 0;
    Count bar = 0;
    for (Index i : order) {
      members.insert(std::upper_bound(members.begin(), members.end(), i), i);
      const Selection s(members);
      const Count next_star = v_star_forest(family, s);
      const Count next_bar = v_bar(family, s);
      CHECK(next_star >= star);
      CHECK(next_star <= star + 1);
      CHECK(next_bar >= bar);
      CHECK(next_bar <= bar + 1);
      star = next_star;
      bar = next_bar;
    }
  }
}

TEST_CASE("brute force size gate and true discoveries") {
  const ReferenceFamily big(21, {Member{Region({1}), 0}});
  CHECK(code_of([&] { (void)v_star_bruteforce(big, Selection::all(21)); }) == ErrorCode::ProblemTooLarge);
  const auto s = Selection::all(10);
  CHECK(true_discoveries(3, s) == 7);
  CHECK(true_discoveries(10, s) == 0);
  CHECK(true_discoveries(0, s) == 10);
}

TEST_CASE("missing budgets are refused") {
  const auto family = uncalibrated(5, {Region::range(1, 3)});
  CHECK(code_of([&] { (void)v_star_forest(family, Selection::all(5)); }) == ErrorCode::MissingZeta);
  CHECK(code_of([&] { (void)v_bar(family, Selection::all(5)); }) == ErrorCode::MissingZeta);
}
