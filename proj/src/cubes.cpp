#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "rigidseq/errors.hpp"
#include "rigidseq/recurrence.hpp"

namespace rigidseq {

namespace {

void validate(const CubeInstance& inst) {
  if (inst.k.empty()) throw std::invalid_argument("need at least one cyclic factor");
  for (auto k : inst.k)
    if (k < 2) throw std::invalid_argument("cyclic orders must be at least 2");
  if (inst.d < 1) throw std::invalid_argument("dimension d must be at least 1");
  if (inst.delta <= Rational(0) || inst.delta > Rational(1)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (inst.eps <= Rational(0)) throw std::invalid_argument("eps must be positive");
}

/// Per-coordinate |e(r/k) - 1| / (dM), in the group's coordinate order.
struct CubeGeometry {
  FiniteAbelian group;
  std::vector<std::vector<double>> weight;  // weight[c][r]
  std::vector<std::uint64_t> stride;

  explicit CubeGeometry(const CubeInstance& inst) : group(cube_group(inst)) {
    const double scale = 1.0 / (static_cast<double>(inst.d) * static_cast<double>(inst.k.size()));
    for (unsigned j = 0; j < inst.d; ++j)
      for (auto k : inst.k) {
        std::vector<double> w(k);
        for (std::uint32_t r = 0; r < k; ++r)
          w[r] = r == 0 ? 0.0 : 2.0 * std::abs(std::sin(std::numbers::pi * r / k)) * scale;
        weight.push_back(std::move(w));
      }
    std::uint64_t s = 1;
    stride.assign(group.moduli().size(), 0);
    for (std::size_t c = group.moduli().size(); c-- > 0;) {
      stride[c] = s;
      s *= group.moduli()[c];
    }
  }

  double rho0(std::uint64_t x) const {
    double acc = 0.0;
    const auto& mod = group.moduli();
    for (std::size_t c = 0; c < mod.size(); ++c) acc += weight[c][(x / stride[c]) % mod[c]];
    return acc;
  }

  /// D(y) = min_{a in A} rho(y, a).
  std::vector<double> distance_transform(const std::vector<std::uint64_t>& A) const {
    const std::uint64_t n = group.order();
    std::vector<double> D(n, std::numeric_limits<double>::infinity());
    for (auto a : A) D[a] = 0.0;
    std::vector<double> line, next;
    const auto& mod = group.moduli();
    for (std::size_t c = 0; c < mod.size(); ++c) {
      const std::uint64_t k = mod[c], st = stride[c];
      line.resize(k);
      next.resize(k);
      for (std::uint64_t base = 0; base < n; ++base) {
        if ((base / st) % k != 0) continue;
        for (std::uint64_t r = 0; r < k; ++r) line[r] = D[base + r * st];
        for (std::uint64_t r = 0; r < k; ++r) {
          double best = line[r];
          for (std::uint64_t q = 0; q < k; ++q) best = std::min(best, line[q] + weight[c][(r + k - q) % k]);
          next[r] = best;
        }
        for (std::uint64_t r = 0; r < k; ++r) D[base + r * st] = next[r];
      }
    }
    return D;
  }
};

struct SetResult {
  double worst = 0.0;
  std::uint64_t target = 0, a = 0, b = 0;
};

/// max over targets of min_{a,b in A} rho(a b^{-1}, x).
SetResult examine(const CubeGeometry& geo, const std::vector<std::uint64_t>& A, const std::vector<std::uint64_t>& targets) {
  const auto D = geo.distance_transform(A);
  SetResult res;
  res.worst = -1.0;
  for (auto x : targets) {
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t best_a = 0;
    for (auto a : A) {
      const double v = D[geo.group.sub(a, x)];
      if (v < best) {
        best = v;
        best_a = a;
      }
    }
    if (best > res.worst) {
      res.worst = best;
      res.target = x;
      res.a = best_a;
    }
  }
  // recover b for the reported pair
  double best = std::numeric_limits<double>::infinity();
  const std::uint64_t y = geo.group.sub(res.a, res.target);
  for (auto b : A) {
    const double v = geo.rho0(geo.group.sub(y, b));
    if (v < best) {
      best = v;
      res.b = b;
    }
  }
  return res;
}

CubeVerdict::Status classify(double worst, double eps) {
  if (worst < eps - kCubeGuard) return CubeVerdict::Status::Pass;
  if (worst >= eps + kCubeGuard) return CubeVerdict::Status::Violation;
  return CubeVerdict::Status::Tie;
}

void absorb(CubeVerdict& v, const SetResult& r, const std::vector<std::uint64_t>& A) {
  ++v.sets_checked;
  if (v.worst_set.empty() || r.worst > v.worst_distance) {
    v.worst_distance = r.worst;
    v.worst_set = A;
    v.worst_target = r.target;
    v.witness_a = r.a;
    v.witness_b = r.b;
  }
}

} // namespace

std::string CubeVerdict::name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Violation: return "violation";
    case Status::Tie: return "tie";
  }
  return "?";
}

FiniteAbelian cube_group(const CubeInstance& inst) {
  std::vector<std::uint32_t> moduli;
  for (unsigned j = 0; j < inst.d; ++j) moduli.insert(moduli.end(), inst.k.begin(), inst.k.end());
  return FiniteAbelian(moduli);
}

double cube_metric(const CubeInstance& inst, std::uint64_t x, std::uint64_t y) {
  validate(inst);
  const CubeGeometry geo(inst);
  return geo.rho0(geo.group.sub(x, y));
}

CubeVerdict cube_lemma_check(const CubeInstance& inst, CubeMode mode, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads, std::uint64_t budget) {
  validate(inst);
  const CubeGeometry geo(inst);
  const std::uint64_t n = geo.group.order();
  const auto num = static_cast<std::uint64_t>(inst.delta.numerator());
  const auto den = static_cast<std::uint64_t>(inst.delta.denominator());
  const std::uint64_t size = std::max<std::uint64_t>(1, (num * n + den - 1) / den);
  const double eps = to_double(inst.eps);
  CubeVerdict verdict;

  if (mode == CubeMode::Exhaustive) {
    if (binomial_capped(n, size, budget) > budget)
      throw BudgetExceeded("exhaustive cube search over C(" + std::to_string(n) + ", " + std::to_string(size) +
                           ") sets exceeds the budget; use sampled mode");
    std::vector<std::uint64_t> targets(n);
    for (std::uint64_t x = 0; x < n; ++x) targets[x] = x;
    std::vector<std::uint64_t> A(size);
    for (std::uint64_t i = 0; i < size; ++i) A[i] = i;
    while (true) {
      absorb(verdict, examine(geo, A, targets), A);
      // next combination in lexicographic order
      std::size_t i = size;
      while (i > 0 && A[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++A[i - 1];
      for (std::size_t j = i; j < size; ++j) A[j] = A[j - 1] + 1;
    }
  } else {
    verdict.sampled = true;
    threads = std::max(1u, threads);
    std::vector<std::vector<std::uint64_t>> sets(samples);
    std::vector<SetResult> results(samples);
    auto work = [&](unsigned worker) {
      std::vector<std::uint64_t> pool(n);
      for (std::uint64_t i = worker; i < samples; i += threads) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
        std::mt19937_64 rng(seq);
        for (std::uint64_t x = 0; x < n; ++x) pool[x] = x;
        for (std::uint64_t t = 0; t < size; ++t) {
          std::uniform_int_distribution<std::uint64_t> pick(t, n - 1);
          std::swap(pool[t], pool[pick(rng)]);
        }
        std::vector<std::uint64_t> A(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(A.begin(), A.end());
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
        results[i] = examine(geo, A, {x});
        sets[i] = std::move(A);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    for (std::uint64_t i = 0; i < samples; ++i) absorb(verdict, results[i], sets[i]);
  }
  verdict.status = verdict.sets_checked == 0 ? CubeVerdict::Status::Pass : classify(verdict.worst_distance, eps);
  return verdict;
}

std::uint64_t mcdiarmid_bound(double delta, double eps) {
  if (!(delta > 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must lie in (0, 1]");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double v = 16.0 / (eps * eps) * std::log(1.0 / delta);
  return static_cast<std::uint64_t>(std::ceil(v));
}

BlowupBound blowup_lower_bound(double alpha, unsigned d, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (0, 1]");
  if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  const double raw = 1.0 - std::exp(-static_cast<double>(d) * t * t / 8.0) / alpha;
  return {raw, std::clamp(raw, 0.0, 1.0)};
}

NeighbourhoodCount neighbourhood_count(const CubeInstance& inst, const std::vector<std::uint64_t>& A, double t) {
  validate(inst);
  const CubeGeometry geo(inst);
  const auto D = geo.distance_transform(A);
  NeighbourhoodCount out;
  out.total = D.size();
  for (double v : D) {
    if (v < t - kCubeGuard)
      ++out.inside;
    else if (v < t + kCubeGuard)
      ++out.ties;
  }
  return out;
}

} // namespace rigidseq
