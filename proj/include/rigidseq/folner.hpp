#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "rigidseq/dualgroup.hpp"
#include "rigidseq/rational.hpp"

namespace rigidseq {

/// A finite set of group elements on a fixed block structure.
class FiniteSubset {
public:
  explicit FiniteSubset(std::vector<std::uint32_t> primes) : primes_(std::move(primes)) {}
  FiniteSubset(std::vector<std::uint32_t> primes, std::span<const GroupElt> elems);

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  const std::set<GroupElt>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const GroupElt& g) const { return elems_.count(g) != 0; }
  /// Returns false if g was already present.
  bool insert(GroupElt g);

  FiniteSubset translate(const GroupElt& x) const;
  /// Minkowski sum {k + f}.
  FiniteSubset plus(const FiniteSubset& other) const;
  std::size_t symmetric_difference_size(const FiniteSubset& other) const;

  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  bool operator==(const FiniteSubset&) const = default;

private:
  std::vector<std::uint32_t> primes_;
  std::set<GroupElt> elems_;
};

/// Phi_N: every element supported on coordinates 1..N of every block.
FiniteSubset box(const std::vector<std::uint32_t>& primes, std::uint64_t n);

/// |(K + F) symmetric-difference F| / |F|.  Throws std::invalid_argument for empty F.
Rational invariance_defect(const FiniteSubset& K, const FiniteSubset& F);

struct TileCover {
  std::vector<GroupElt> shifts;
  /// Translates of the tile are pairwise disjoint and lie in the region.
  bool disjoint = false;
  /// Number of region elements covered, and those left over.
  std::uint64_t covered = 0;
  std::uint64_t leftover = 0;
  Rational leftover_ratio{0};
  /// Leftover ratio after each accepted shift (greedy covers only).
  std::vector<Rational> trace;

  bool exact() const { return disjoint && leftover == 0; }
};

/// Shifts of Phi_N supported on coordinates N+1..M (coset representatives of
/// Phi_N in Phi_M), with the cover of Phi_M checked element by element.
TileCover box_tile_shifts(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m);

/// Self-tiling of Phi_N by translates of Phi_j (j <= N); exact for boxes.
TileCover self_tiling_cover(const std::vector<std::uint32_t>& primes, std::uint64_t j, std::uint64_t n);

/// Greedy packing of translates of `tile` into `region`: candidate shifts are
/// r - min(tile) for r in region, taken in increasing order, and a translate
/// is accepted when it fits in the uncovered part of the region.
TileCover greedy_tiling_cover(const FiniteSubset& tile, const FiniteSubset& region);

struct TileDensityReport {
  /// max over probes x in Phi_M of |(S - x) cap Phi_M| / |Phi_M|.
  Rational density{0};
  Rational expected{0};
  std::uint64_t probes = 0;
  /// max over probes of |(S - x) cap Phi_N|; at most 1 for a tiling.
  std::uint64_t max_tile_hits = 0;

  bool passed() const { return density == expected && max_tile_hits <= 1; }
};

/// Shift set S = {elements vanishing on coordinates 1..N} of the tiling by
/// Phi_N, measured in the window Phi_M against 1/|Phi_N|.
TileDensityReport tile_density_check(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m);

/// max over x in shifts and F in windows of |(E - x) cap F| / |F|, a lower
/// bound for the upper Banach density of E.
Rational window_density(const std::function<bool(const GroupElt&)>& in_E, std::span<const FiniteSubset> windows,
                        std::span<const GroupElt> shifts);

// ------------------------------------------------------------ integers

/// |(K + [lo, hi]) symmetric-difference [lo, hi]| / (hi - lo + 1) in Z.
Rational interval_invariance_defect(std::span<const std::int64_t> K, std::int64_t lo, std::int64_t hi);

struct IntervalTiling {
  std::vector<std::int64_t> shifts;
  bool disjoint = false;
  std::uint64_t leftover = 0;
};

/// {1..2^N} tiled by translates k 2^j of {1..2^j}.
IntervalTiling interval_self_tiling(unsigned j, unsigned n);

} // namespace rigidseq
