#pragma once

#include <random>

namespace rigidseq {

template <class Rng>
MonicIntPoly random_pv_poly(PrimeModulus p, int degree, int slope, Rng& rng) {
  std::uniform_int_distribution<std::uint32_t> any(0, p.value() - 1);
  std::uniform_int_distribution<std::uint32_t> nonzero(1, p.value() - 1);
  auto random_poly = [&](int deg, bool monic_nonzero) {
    std::vector<std::uint32_t> v(static_cast<std::size_t>(deg + 1));
    for (auto& x : v) x = any(rng);
    if (monic_nonzero) v.back() = nonzero(rng);
    return Poly(p, std::move(v));
  };
  std::vector<Poly> c;
  for (int i = 0; i < degree; ++i) {
    if (i == degree - 1) {
      c.push_back(random_poly(slope, true));
    } else {
      std::uniform_int_distribution<int> deg(0, slope - 1);
      Poly ci = random_poly(deg(rng), i == 0);
      c.push_back(std::move(ci));
    }
  }
  return MonicIntPoly(std::move(c));
}

} // namespace rigidseq
