#include <doctest.h>

#include <random>
#include <set>

#include "rigidseq/folner.hpp"

using namespace rigidseq;

namespace {

const std::vector<std::uint32_t> kTwo{2};

FiniteSubset singleton(const std::vector<std::uint32_t>& primes, const GroupElt& g) {
  FiniteSubset s(primes);
  s.insert(g);
  return s;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

} // namespace

TEST_SUITE("folner") {
  TEST_CASE("invariance defect examples") {
    const FiniteSubset F = box(kTwo, 2);
    CHECK(F.size() == 4);
    CHECK(invariance_defect(box(kTwo, 1), F) == Rational(0));
    CHECK(invariance_defect(F, F) == Rational(0));
    CHECK(invariance_defect(singleton(kTwo, GroupElt::basis(kTwo, 0, 3)), F) == Rational(2));
    CHECK(invariance_defect(singleton(kTwo, GroupElt(kTwo)), box(kTwo, 3)) == Rational(0));
    CHECK_THROWS(invariance_defect(F, FiniteSubset(kTwo)));
  }

  TEST_CASE("box defect vanishes exactly when the support fits") {
    std::mt19937_64 rng(3);
    const std::vector<std::uint32_t> primes{2, 3};
    for (std::uint64_t n = 1; n <= 3; ++n) {
      const FiniteSubset F = box(primes, n);
      for (int i = 0; i < 60; ++i) {
        GroupElt g(primes);
        std::uint64_t reach = 0;
        for (std::size_t j = 0; j < primes.size(); ++j)
          for (std::uint64_t c = 1; c <= 5; ++c) {
            const auto v = static_cast<std::int64_t>(rng() % primes[j]);
            if (rng() % 3 == 0) {
              g.set(j, c, v);
              if (v != 0) reach = std::max(reach, c);
            }
          }
        const Rational d = invariance_defect(singleton(primes, g), F);
        if (reach <= n)
          CHECK(d == Rational(0));
        else
          CHECK(d == Rational(2));
      }
    }
  }

  TEST_CASE("box tile shifts") {
    const TileCover c = box_tile_shifts(kTwo, 1, 3);
    CHECK(c.shifts.size() == 4);
    CHECK(c.exact());
    const TileCover same = box_tile_shifts(kTwo, 3, 3);
    REQUIRE(same.shifts.size() == 1);
    CHECK(same.shifts[0].is_zero());
    CHECK_THROWS(box_tile_shifts(kTwo, 4, 3));
  }

  TEST_CASE("box covers are partitions, checked independently") {
    for (const std::vector<std::uint32_t>& primes : {std::vector<std::uint32_t>{2}, {3}, {2, 3}}) {
      for (std::uint64_t m = 1; m <= 3; ++m)
        for (std::uint64_t n = 0; n <= m; ++n) {
          const TileCover c = box_tile_shifts(primes, n, m);
          const FiniteSubset tile = box(primes, n), region = box(primes, m);
          std::set<GroupElt> seen;
          std::size_t total = 0;
          for (const auto& s : c.shifts)
            for (const auto& f : tile) {
              const GroupElt x = f + s;
              CHECK(region.contains(x));
              seen.insert(x);
              ++total;
            }
          CHECK(total == region.size());
          CHECK(seen.size() == region.size());
          CHECK(c.exact());
        }
    }
  }

  TEST_CASE("tile density") {
    const TileDensityReport r = tile_density_check(kTwo, 2, 5);
    CHECK(r.density == Rational(1, 4));
    CHECK(r.max_tile_hits <= 1);
    CHECK(r.passed());
    CHECK(tile_density_check(kTwo, 0, 3).density == Rational(1));
    for (std::uint64_t m = 2; m <= 12; ++m)
      for (std::uint64_t n = 1; n < m; n += 3) {
        const TileDensityReport t = tile_density_check(kTwo, n, m);
        CHECK(t.density == Rational(1, static_cast<std::int64_t>(ipow(2, n))));
        CHECK(t.passed());
      }
    for (std::uint64_t m = 2; m <= 7; ++m)
      for (std::uint64_t n = 1; n < m; ++n) CHECK(tile_density_check({3}, n, m).density == Rational(1, static_cast<std::int64_t>(ipow(3, n))));
  }

  TEST_CASE("self tiling") {
    const TileCover c = self_tiling_cover({3}, 1, 3);
    CHECK(c.shifts.size() == 9);
    CHECK(c.leftover == 0);
    const TileCover same = self_tiling_cover({3}, 3, 3);
    REQUIRE(same.shifts.size() == 1);
    CHECK(same.shifts[0].is_zero());
  }

  TEST_CASE("greedy cover leftover never grows") {
    const FiniteSubset region = box({2, 3}, 2);
    FiniteSubset tile({2, 3});
    tile.insert(GroupElt({2, 3}));
    tile.insert(GroupElt::basis({2, 3}, 1, 1));
    const TileCover c = greedy_tiling_cover(tile, region);
    CHECK(c.disjoint);
    for (std::size_t i = 1; i < c.trace.size(); ++i) CHECK(c.trace[i] <= c.trace[i - 1]);
    CHECK(c.covered + c.leftover == region.size());
    const TileCover exact = greedy_tiling_cover(box(kTwo, 2), box(kTwo, 4));
    CHECK(exact.exact());
    CHECK(exact.shifts.size() == 4);
  }

  TEST_CASE("window density lower bounds") {
    std::vector<FiniteSubset> windows{box(kTwo, 3)};
    std::vector<GroupElt> shifts{GroupElt(kTwo), GroupElt::basis(kTwo, 0, 1), GroupElt::basis(kTwo, 0, 4)};
    CHECK(window_density([](const GroupElt&) { return true; }, windows, shifts) == Rational(1));
    CHECK(window_density([](const GroupElt&) { return false; }, windows, shifts) == Rational(0));
    // first coordinate zero: an index-2 subgroup
    const Rational half = window_density([](const GroupElt& g) { return g.get(0, 1) == 0; }, windows, shifts);
    CHECK(half >= Rational(1, 2));
  }

  TEST_CASE("integer intervals") {
    for (unsigned n = 0; n <= 8; ++n)
      for (unsigned j = 0; j <= n; ++j) {
        const IntervalTiling t = interval_self_tiling(j, n);
        CHECK(t.disjoint);
        CHECK(t.leftover == 0);
        CHECK(t.shifts.size() == (std::size_t{1} << (n - j)));
      }
    for (std::int64_t hi = 1; hi <= 64; hi *= 2) {
      const std::int64_t K[] = {1, 3};
      // brute force: {1..hi} vs its translates by 1 and 3
      std::set<std::int64_t> F, KF;
      for (std::int64_t x = 1; x <= hi; ++x) {
        F.insert(x);
        KF.insert(x + 1);
        KF.insert(x + 3);
      }
      std::int64_t sym = 0;
      for (auto x : KF) sym += F.count(x) ? 0 : 1;
      for (auto x : F) sym += KF.count(x) ? 0 : 1;
      CHECK(interval_invariance_defect(K, 1, hi) == Rational(sym, hi));
    }
  }
}
