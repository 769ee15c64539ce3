#include "rigidseq/folner.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

// ------------------------------------------------------------ FiniteSubset

FiniteSubset::FiniteSubset(std::vector<std::uint32_t> primes, std::span<const GroupElt> elems)
    : primes_(std::move(primes)) {
  for (const auto& g : elems) insert(g);
}

bool FiniteSubset::insert(GroupElt g) {
  if (g.primes() != primes_) throw ModulusMismatch("element from a different group");
  return elems_.insert(std::move(g)).second;
}

FiniteSubset FiniteSubset::translate(const GroupElt& x) const {
  FiniteSubset out(primes_);
  for (const auto& g : elems_) out.insert(g + x);
  return out;
}

FiniteSubset FiniteSubset::plus(const FiniteSubset& other) const {
  FiniteSubset out(primes_);
  for (const auto& a : elems_)
    for (const auto& b : other.elems_) out.insert(a + b);
  return out;
}

std::size_t FiniteSubset::symmetric_difference_size(const FiniteSubset& other) const {
  std::size_t common = 0;
  for (const auto& g : elems_) common += other.contains(g) ? 1 : 0;
  return size() + other.size() - 2 * common;
}

Rational invariance_defect(const FiniteSubset& K, const FiniteSubset& F) {
  if (F.empty()) throw std::invalid_argument("invariance defect of an empty set");
  const auto diff = K.plus(F).symmetric_difference_size(F);
  return Rational(static_cast<std::int64_t>(diff), static_cast<std::int64_t>(F.size()));
}

// ------------------------------------------------------------ packed boxes

namespace {

/// Elements of Phi_M packed one 8-bit lane per (block, coordinate), added
/// lane-wise modulo the lane's prime without unpacking.  Needs at most eight
/// lanes and primes below 128.
class LanePacker {
public:
  static std::optional<LanePacker> make(const std::vector<std::uint32_t>& primes, std::uint64_t m) {
    if (primes.size() * m > 8) return std::nullopt;
    for (auto p : primes)
      if (p >= 128) return std::nullopt;
    return LanePacker(primes, m);
  }

  std::size_t lanes() const { return mod_.size(); }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return reduce(a + b); }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return reduce(a + (pvec_ - b)); }

  /// True when every lane outside coordinates 1..n of each block is zero.
  bool within(std::uint64_t a, std::uint64_t n) const { return (a & outside_mask(n)) == 0; }

  /// Every element of Phi_n (n <= m) in increasing mixed-radix order.
  std::vector<std::uint64_t> enumerate(std::uint64_t n) const {
    std::vector<std::uint64_t> out{0};
    for (std::size_t j = 0; j < blocks_; ++j)
      for (std::uint64_t c = 1; c <= n; ++c) {
        const std::size_t lane = j * m_ + (c - 1);
        std::vector<std::uint64_t> next;
        next.reserve(out.size() * mod_[lane]);
        for (auto x : out)
          for (std::uint64_t v = 0; v < mod_[lane]; ++v) next.push_back(x | (v << (8 * lane)));
        out = std::move(next);
      }
    return out;
  }

  /// Elements of Phi_m that vanish on coordinates 1..n.
  std::vector<std::uint64_t> enumerate_above(std::uint64_t n) const {
    std::vector<std::uint64_t> out{0};
    for (std::size_t j = 0; j < blocks_; ++j)
      for (std::uint64_t c = n + 1; c <= m_; ++c) {
        const std::size_t lane = j * m_ + (c - 1);
        std::vector<std::uint64_t> next;
        for (auto x : out)
          for (std::uint64_t v = 0; v < mod_[lane]; ++v) next.push_back(x | (v << (8 * lane)));
        out = std::move(next);
      }
    return out;
  }

  /// Dense index in [0, |Phi_m|).
  std::uint64_t index(std::uint64_t a) const {
    std::uint64_t idx = 0;
    for (std::size_t lane = 0; lane < lanes(); ++lane) idx = idx * mod_[lane] + ((a >> (8 * lane)) & 0xFF);
    return idx;
  }

  GroupElt unpack(std::uint64_t a) const {
    GroupElt g(primes_);
    for (std::size_t j = 0; j < blocks_; ++j)
      for (std::uint64_t c = 1; c <= m_; ++c) g.set(j, c, static_cast<std::int64_t>((a >> (8 * (j * m_ + c - 1))) & 0xFF));
    return g;
  }

  std::uint64_t box_size(std::uint64_t n) const {
    std::uint64_t size = 1;
    for (auto p : primes_)
      for (std::uint64_t c = 0; c < n; ++c) size *= p;
    return size;
  }

private:
  LanePacker(const std::vector<std::uint32_t>& primes, std::uint64_t m) : primes_(primes), blocks_(primes.size()), m_(m) {
    for (auto p : primes)
      for (std::uint64_t c = 0; c < m; ++c) mod_.push_back(p);
    for (std::size_t lane = 0; lane < mod_.size(); ++lane) {
      pvec_ |= std::uint64_t{mod_[lane]} << (8 * lane);
      bias_ |= std::uint64_t{128 - mod_[lane]} << (8 * lane);
      high_ |= std::uint64_t{0x80} << (8 * lane);
    }
  }

  // lanes hold values below 2p; subtract p wherever a lane reached p
  std::uint64_t reduce(std::uint64_t s) const {
    const std::uint64_t flags = ((s + bias_) & high_) >> 7;
    return s - ((flags * 0xFF) & pvec_);
  }

  std::uint64_t outside_mask(std::uint64_t n) const {
    std::uint64_t mask = 0;
    for (std::size_t j = 0; j < blocks_; ++j)
      for (std::uint64_t c = n + 1; c <= m_; ++c) mask |= std::uint64_t{0xFF} << (8 * (j * m_ + c - 1));
    return mask;
  }

  std::vector<std::uint32_t> primes_;
  std::size_t blocks_;
  std::uint64_t m_;
  std::vector<std::uint32_t> mod_;
  std::uint64_t pvec_ = 0, bias_ = 0, high_ = 0;
};

void require_order(std::uint64_t n, std::uint64_t m) {
  if (n > m) throw std::invalid_argument("tile depth " + std::to_string(n) + " exceeds window depth " + std::to_string(m));
}

/// Elements of Phi_m vanishing on coordinates 1..n, as group elements.
std::vector<GroupElt> upper_shifts(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m) {
  std::vector<GroupElt> out{GroupElt(primes)};
  for (std::size_t j = 0; j < primes.size(); ++j)
    for (std::uint64_t c = n + 1; c <= m; ++c) {
      std::vector<GroupElt> next;
      for (const auto& x : out)
        for (std::uint32_t v = 0; v < primes[j]; ++v) {
          GroupElt y = x;
          y.set(j, c, v);
          next.push_back(std::move(y));
        }
      out = std::move(next);
    }
  return out;
}

TileCover cover_generic(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m) {
  TileCover cover;
  cover.shifts = upper_shifts(primes, n, m);
  const FiniteSubset tile = box(primes, n);
  const FiniteSubset region = box(primes, m);
  FiniteSubset seen(primes);
  cover.disjoint = true;
  for (const auto& s : cover.shifts)
    for (const auto& t : tile) {
      GroupElt g = t + s;
      if (!region.contains(g) || !seen.insert(std::move(g))) cover.disjoint = false;
    }
  cover.covered = seen.size();
  cover.leftover = region.size() - std::min<std::uint64_t>(region.size(), cover.covered);
  cover.leftover_ratio = Rational(static_cast<std::int64_t>(cover.leftover), static_cast<std::int64_t>(region.size()));
  return cover;
}

} // namespace

FiniteSubset box(const std::vector<std::uint32_t>& primes, std::uint64_t n) {
  FiniteSubset out(primes);
  for (auto& g : upper_shifts(primes, 0, n)) out.insert(std::move(g));
  return out;
}

TileCover box_tile_shifts(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m) {
  require_order(n, m);
  const auto packer = LanePacker::make(primes, m);
  if (!packer) return cover_generic(primes, n, m);

  TileCover cover;
  const auto tile = packer->enumerate(n);
  const auto shifts = packer->enumerate_above(n);
  const std::uint64_t region = packer->box_size(m);
  std::vector<bool> hit(region, false);
  cover.disjoint = true;
  for (auto s : shifts) {
    for (auto t : tile) {
      const std::uint64_t g = packer->add(t, s);
      if (!packer->within(g, m)) {
        cover.disjoint = false;
        continue;
      }
      const auto idx = packer->index(g);
      if (hit[idx]) cover.disjoint = false;
      hit[idx] = true;
    }
    cover.shifts.push_back(packer->unpack(s));
  }
  cover.covered = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), true));
  cover.leftover = region - cover.covered;
  cover.leftover_ratio = Rational(static_cast<std::int64_t>(cover.leftover), static_cast<std::int64_t>(region));
  return cover;
}

TileCover self_tiling_cover(const std::vector<std::uint32_t>& primes, std::uint64_t j, std::uint64_t n) {
  return box_tile_shifts(primes, j, n);
}

TileCover greedy_tiling_cover(const FiniteSubset& tile, const FiniteSubset& region) {
  if (tile.empty()) throw std::invalid_argument("greedy cover with an empty tile");
  TileCover cover;
  cover.disjoint = true;
  FiniteSubset covered(region.primes());
  const GroupElt anchor = *tile.begin();
  const auto total = static_cast<std::int64_t>(region.size());
  for (const auto& r : region) {
    const GroupElt x = r - anchor;
    bool fits = true;
    for (const auto& t : tile) {
      const GroupElt g = t + x;
      if (!region.contains(g) || covered.contains(g)) {
        fits = false;
        break;
      }
    }
    if (!fits) continue;
    for (const auto& t : tile) covered.insert(t + x);
    cover.shifts.push_back(x);
    cover.trace.emplace_back(total - static_cast<std::int64_t>(covered.size()), std::max<std::int64_t>(total, 1));
  }
  cover.covered = covered.size();
  cover.leftover = region.size() - covered.size();
  cover.leftover_ratio = Rational(static_cast<std::int64_t>(cover.leftover), std::max<std::int64_t>(total, 1));
  return cover;
}

TileDensityReport tile_density_check(const std::vector<std::uint32_t>& primes, std::uint64_t n, std::uint64_t m) {
  require_order(n, m);
  TileDensityReport report;
  const auto packer = LanePacker::make(primes, m);
  if (!packer) {
    // generic path: S cap Phi_M is the set of upper shifts
    const auto shifts = upper_shifts(primes, n, m);
    const FiniteSubset window = box(primes, m);
    const FiniteSubset tile = box(primes, n);
    report.expected = Rational(1, static_cast<std::int64_t>(tile.size()));
    for (const auto& x : window) {
      std::uint64_t in_window = 0, in_tile = 0;
      for (const auto& s : shifts) {
        const GroupElt y = s - x;
        in_window += window.contains(y) ? 1 : 0;
        in_tile += tile.contains(y) ? 1 : 0;
      }
      report.density = std::max(report.density, Rational(static_cast<std::int64_t>(in_window),
                                                          static_cast<std::int64_t>(window.size())));
      report.max_tile_hits = std::max(report.max_tile_hits, in_tile);
      ++report.probes;
    }
    return report;
  }

  const auto shifts = packer->enumerate_above(n);
  const auto probes = packer->enumerate(m);
  const auto window_size = static_cast<std::int64_t>(packer->box_size(m));
  report.expected = Rational(1, static_cast<std::int64_t>(packer->box_size(n)));
  std::uint64_t best = 0;
  for (auto x : probes) {
    std::uint64_t in_window = 0, in_tile = 0;
    for (auto s : shifts) {
      const std::uint64_t y = packer->sub(s, x);
      in_window += packer->within(y, m) ? 1 : 0;
      in_tile += packer->within(y, n) ? 1 : 0;
    }
    best = std::max(best, in_window);
    report.max_tile_hits = std::max(report.max_tile_hits, in_tile);
  }
  report.probes = probes.size();
  report.density = Rational(static_cast<std::int64_t>(best), window_size);
  return report;
}

Rational window_density(const std::function<bool(const GroupElt&)>& in_E, std::span<const FiniteSubset> windows,
                        std::span<const GroupElt> shifts) {
  Rational best(0);
  for (const auto& F : windows) {
    if (F.empty()) continue;
    for (const auto& x : shifts) {
      std::int64_t count = 0;
      for (const auto& f : F) count += in_E(f + x) ? 1 : 0;
      best = std::max(best, Rational(count, static_cast<std::int64_t>(F.size())));
    }
  }
  return best;
}

// ------------------------------------------------------------ integers

Rational interval_invariance_defect(std::span<const std::int64_t> K, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty interval");
  std::set<std::int64_t> moved;
  for (auto k : K)
    for (std::int64_t x = lo; x <= hi; ++x) moved.insert(k + x);
  std::int64_t inside = 0;
  for (auto v : moved) inside += (v >= lo && v <= hi) ? 1 : 0;
  const std::int64_t len = hi - lo + 1;
  return Rational(static_cast<std::int64_t>(moved.size()) - inside + (len - inside), len);
}

IntervalTiling interval_self_tiling(unsigned j, unsigned n) {
  if (j > n || n > 40) throw std::invalid_argument("interval tiling needs j <= N <= 40");
  IntervalTiling out;
  const std::int64_t tile = std::int64_t{1} << j;
  const std::int64_t region = std::int64_t{1} << n;
  std::vector<bool> hit(static_cast<std::size_t>(region), false);
  out.disjoint = true;
  for (std::int64_t s = 0; s + tile <= region; s += tile) {
    out.shifts.push_back(s);
    for (std::int64_t t = 1; t <= tile; ++t) {
      const std::int64_t v = s + t;
      if (hit[static_cast<std::size_t>(v - 1)]) out.disjoint = false;
      hit[static_cast<std::size_t>(v - 1)] = true;
    }
  }
  out.leftover = static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), false));
  return out;
}

} // namespace rigidseq
