#include "rigidseq/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

FiniteAbelian::FiniteAbelian(std::vector<std::uint32_t> moduli) : moduli_(std::move(moduli)) {
  stride_.assign(moduli_.size(), 1);
  for (std::size_t i = moduli_.size(); i-- > 0;) {
    if (moduli_[i] < 1) throw std::invalid_argument("cyclic factor of order 0");
    stride_[i] = order_;
    if (order_ > (std::uint64_t{1} << 40) / moduli_[i]) throw std::invalid_argument("finite group too large");
    order_ *= moduli_[i];
  }
}

std::uint64_t FiniteAbelian::encode(const std::vector<std::uint32_t>& coords) const {
  if (coords.size() != moduli_.size()) throw std::invalid_argument("wrong number of coordinates");
  std::uint64_t x = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) x += std::uint64_t{coords[i] % moduli_[i]} * stride_[i];
  return x;
}

std::vector<std::uint32_t> FiniteAbelian::decode(std::uint64_t x) const {
  std::vector<std::uint32_t> out(moduli_.size());
  for (std::size_t i = 0; i < moduli_.size(); ++i) out[i] = static_cast<std::uint32_t>((x / stride_[i]) % moduli_[i]);
  return out;
}

std::uint64_t FiniteAbelian::add(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::uint64_t m = moduli_[i];
    out += (((a / stride_[i]) % m + (b / stride_[i]) % m) % m) * stride_[i];
  }
  return out;
}

std::uint64_t FiniteAbelian::sub(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < moduli_.size(); ++i) {
    const std::uint64_t m = moduli_[i];
    out += (((a / stride_[i]) % m + m - (b / stride_[i]) % m) % m) * stride_[i];
  }
  return out;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // exact while the running product stays below 2^53
  double acc = 1.0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (acc > static_cast<double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

namespace {

std::uint64_t ceil_fraction(const Rational& r, std::uint64_t n) {
  const auto num = static_cast<std::uint64_t>(r.numerator()) * n;
  const auto den = static_cast<std::uint64_t>(r.denominator());
  return (num + den - 1) / den;
}

} // namespace

RecurrenceVerdict delta_recurrence_bruteforce(const FiniteModel& model, std::uint64_t budget) {
  const auto& G = model.group;
  const std::uint64_t n = G.order();
  if (model.delta <= Rational(0) || model.delta > Rational(1)) throw std::invalid_argument("delta must lie in (0, 1]");
  std::vector<bool> in_R(n, false);
  for (auto r : model.R) {
    if (r >= n) throw std::invalid_argument("R contains an element outside the group");
    in_R[r] = true;
  }

  RecurrenceVerdict verdict;
  verdict.subset_size = std::max<std::uint64_t>(1, ceil_fraction(model.delta, n));
  const std::uint64_t k = verdict.subset_size;
  if (binomial_capped(n, k, budget) > budget)
    throw BudgetExceeded("C(" + std::to_string(n) + ", " + std::to_string(k) + ") subsets exceed the budget of " +
                         std::to_string(budget));
  if (in_R[0]) {
    // 0 lies in every difference set
    verdict.pass = true;
    return verdict;
  }

  auto clash = [&](std::uint64_t a, std::uint64_t b) { return in_R[G.sub(a, b)] || in_R[G.sub(b, a)]; };
  std::vector<std::uint64_t> chosen;
  chosen.reserve(k);
  // depth-first in increasing order: the first complete set is the lex-least
  auto search = [&](auto&& self, std::uint64_t from) -> bool {
    if (chosen.size() == k) return true;
    for (std::uint64_t x = from; x + (k - chosen.size()) <= n; ++x) {
      ++verdict.nodes;
      if (std::any_of(chosen.begin(), chosen.end(), [&](std::uint64_t c) { return clash(c, x); })) continue;
      chosen.push_back(x);
      if (self(self, x + 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  if (search(search, 0))
    verdict.counterexample = chosen;
  else
    verdict.pass = true;
  return verdict;
}

std::vector<GroupElt> r_epsilon_set(const AtomicMeasure& sigma, double eps, std::span<const GroupElt> probes) {
  std::vector<GroupElt> out;
  for (const auto& g : probes) {
    const Defect d = rigidity_defect_exact(sigma, g);
    const double v = d.exact ? to_double(*d.exact) : d.value;
    if (v < eps) out.push_back(g);
  }
  return out;
}

} // namespace rigidseq
