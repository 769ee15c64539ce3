#pragma once

// Reference computations written without the library, used as test oracles.

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

/// Integer polynomial, c[k] = coefficient of t^k.
using ZPoly = std::vector<std::int64_t>;

/// F_0 = 1, F_1 = t, F_n = t F_{n-1} + F_{n-2} over Z.
inline std::vector<ZPoly> fibonacci_polys(unsigned n_max) {
  std::vector<ZPoly> F{{1}, {0, 1}};
  for (unsigned n = 2; n <= n_max; ++n) {
    ZPoly next(n + 1, 0);
    for (std::size_t k = 0; k < F[n - 1].size(); ++k) next[k + 1] += F[n - 1][k];
    for (std::size_t k = 0; k < F[n - 2].size(); ++k) next[k] += F[n - 2][k];
    F.push_back(next);
  }
  F.resize(n_max + 1);
  return F;
}

/// Reduce mod p and trim trailing zeros.
inline std::vector<std::uint32_t> reduce(const ZPoly& a, std::int64_t p) {
  std::vector<std::uint32_t> out;
  for (auto c : a) out.push_back(static_cast<std::uint32_t>(((c % p) + p) % p));
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

/// Schoolbook arithmetic over F_p on plain vectors.
struct Fp {
  std::int64_t p;

  std::vector<std::uint32_t> trim(std::vector<std::uint32_t> a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
  }
  std::vector<std::uint32_t> add(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const std::int64_t s = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
      out[i] = static_cast<std::uint32_t>(s % p);
    }
    return trim(out);
  }
  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    if (a.empty() || b.empty()) return {};
    std::vector<std::int64_t> acc(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::int64_t{a[i]} * b[j]) % p;
    return trim(std::vector<std::uint32_t>(acc.begin(), acc.end()));
  }
  std::int64_t inv(std::int64_t a) const {
    // Fermat
    std::int64_t r = 1, b = a % p, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  }
  std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>> divmod(std::vector<std::uint32_t> a,
                                                                           const std::vector<std::uint32_t>& b) const {
    a = trim(a);
    if (a.size() < b.size()) return {{}, a};
    std::vector<std::uint32_t> q(a.size() - b.size() + 1, 0);
    const std::int64_t lead_inv = inv(b.back());
    for (std::size_t shift = q.size(); shift-- > 0;) {
      const std::size_t top = shift + b.size() - 1;
      const std::int64_t c = a[top] * lead_inv % p;
      q[shift] = static_cast<std::uint32_t>(c);
      for (std::size_t j = 0; j < b.size(); ++j) {
        const std::size_t k = shift + j;
        a[k] = static_cast<std::uint32_t>(((a[k] - c * b[j]) % p + p) % p);
      }
    }
    return {trim(q), trim(a)};
  }
  /// Partial quotients of num/den by the Euclidean algorithm.
  std::vector<std::vector<std::uint32_t>> euclid(std::vector<std::uint32_t> num, std::vector<std::uint32_t> den) const {
    std::vector<std::vector<std::uint32_t>> out;
    num = trim(num);
    den = trim(den);
    while (!den.empty()) {
      auto [q, r] = divmod(num, den);
      out.push_back(q);
      num = den;
      den = r;
    }
    return out;
  }
};

/// Lucas numbers L_0 = 2, L_1 = 1.
inline std::vector<std::int64_t> lucas(unsigned n_max) {
  std::vector<std::int64_t> L{2, 1};
  while (L.size() <= n_max) L.push_back(L[L.size() - 1] + L[L.size() - 2]);
  return L;
}

using big = boost::multiprecision::cpp_bin_float_50;

/// Nearest integer to phi^n in 50-digit arithmetic.
inline std::int64_t golden_nearest(unsigned n) {
  const big phi = (1 + boost::multiprecision::sqrt(big(5))) / 2;
  return static_cast<std::int64_t>(boost::multiprecision::round(boost::multiprecision::pow(phi, n)));
}

/// ||m phi|| in 50-digit arithmetic.
inline double golden_norm_times(std::int64_t m) {
  const big phi = (1 + boost::multiprecision::sqrt(big(5))) / 2;
  const big x = phi * m;
  const big frac = x - boost::multiprecision::floor(x);
  return static_cast<double>(frac < 0.5 ? frac : 1 - frac);
}

/// rho on prod_l (Z/k_l)^d with coordinates listed row-major in (j, l).
inline double rho(const std::vector<std::uint32_t>& k, unsigned d, const std::vector<std::uint32_t>& x,
                  const std::vector<std::uint32_t>& y) {
  double s = 0.0;
  const std::size_t M = k.size();
  for (unsigned j = 0; j < d; ++j)
    for (std::size_t l = 0; l < M; ++l) {
      const auto i = j * M + l;
      const double ax = 2 * std::numbers::pi * x[i] / k[l];
      const double ay = 2 * std::numbers::pi * y[i] / k[l];
      s += std::abs(std::polar(1.0, ax) - std::polar(1.0, ay));
    }
  return s / static_cast<double>(d * M);
}

/// All coordinate vectors of prod (Z/m_i), first coordinate most significant.
inline std::vector<std::vector<std::uint32_t>> all_elements(const std::vector<std::uint32_t>& moduli) {
  std::vector<std::vector<std::uint32_t>> out{{}};
  for (auto m : moduli) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& v : out)
      for (std::uint32_t c = 0; c < m; ++c) {
        auto w = v;
        w.push_back(c);
        next.push_back(w);
      }
    out = std::move(next);
  }
  return out;
}

/// Exhaustive check over bitmasks: does some E of size `size` have (E - E) avoiding R?
inline bool has_recurrence_counterexample(const std::vector<std::uint32_t>& moduli,
                                          const std::vector<std::vector<std::uint32_t>>& R, std::size_t size) {
  const auto elems = all_elements(moduli);
  const std::size_t n = elems.size();
  auto diff = [&](const auto& a, const auto& b) {
    std::vector<std::uint32_t> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = (a[i] + moduli[i] - b[i]) % moduli[i];
    return d;
  };
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != size) continue;
    bool avoids = true;
    for (std::size_t a = 0; a < n && avoids; ++a)
      for (std::size_t b = 0; b < n && avoids; ++b)
        if ((mask >> a & 1) && (mask >> b & 1) && std::find(R.begin(), R.end(), diff(elems[a], elems[b])) != R.end())
          avoids = false;
    if (avoids) return true;
  }
  return false;
}

} // namespace oracle
