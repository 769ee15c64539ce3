#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rigidseq/errors.hpp"
#include "rigidseq/pisot.hpp"

namespace rigidseq {

RealPVSpec golden_ratio_spec() { return {"golden", {1, 1}, {}}; }
RealPVSpec plastic_number_spec() { return {"plastic", {1, 1, 0}, {}}; }

namespace {

std::int64_t checked_mul_add(std::int64_t acc, std::int64_t a, std::int64_t b) {
  std::int64_t prod = 0, sum = 0;
  if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &sum))
    throw std::overflow_error("power sum exceeds 64 bits");
  return sum;
}

} // namespace

RealPVTable real_pv_table(const RealPVSpec& spec, unsigned n_max) {
  const int d = static_cast<int>(spec.c.size());
  if (d < 1) throw std::invalid_argument("empty recurrence");

  // Companion matrix of x^d - sum c_i x^i.
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) comp(i, d - 1) = static_cast<double>(spec.c[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw std::domain_error("eigenvalue computation failed");
  std::vector<std::complex<double>> roots(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(roots.begin(), roots.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });

  const auto dominant = roots.front();
  if (std::abs(dominant.imag()) > 1e-12 || dominant.real() <= 1.0)
    throw std::domain_error("dominant eigenvalue is not a real number > 1");
  RealPVTable table{};
  table.conjugates.assign(roots.begin() + 1, roots.end());
  for (const auto& b : table.conjugates) {
    if (std::abs(b) >= 1.0 - 1e-12) throw std::domain_error("a conjugate lies on or outside the unit circle");
    table.conjugate_modulus = std::max(table.conjugate_modulus, std::abs(b));
  }

  // Polish alpha with Newton's method in long double.
  long double x = dominant.real();
  for (int it = 0; it < 8; ++it) {
    long double f = 1, df = 0;
    for (int i = d - 1; i >= 0; --i) {
      df = df * x + f;
      f = f * x - static_cast<long double>(spec.c[i]);
    }
    x -= f / df;
  }
  table.alpha = static_cast<double>(x);

  // Exact power sums.
  std::vector<std::int64_t> s;
  if (!spec.initial_traces.empty()) {
    if (static_cast<int>(spec.initial_traces.size()) != d) throw std::invalid_argument("need d initial traces");
    s = spec.initial_traces;
  } else {
    s.push_back(d);
    for (int n = 1; n < d; ++n) {
      std::int64_t acc = 0;
      for (int k = 1; k < n; ++k) acc = checked_mul_add(acc, spec.c[d - k], s[n - k]);
      s.push_back(checked_mul_add(acc, n, spec.c[d - n]));
    }
  }
  while (s.size() <= n_max + 1) {
    const std::size_t n = s.size();
    std::int64_t acc = 0;
    for (int k = 1; k <= d; ++k) acc = checked_mul_add(acc, spec.c[d - k], s[n - k]);
    s.push_back(acc);
  }

  // Conjugate power sums carry all the small quantities; computing them
  // directly avoids cancellation in alpha^n - s_n.
  auto conj_sum = [&](unsigned n) {
    std::complex<double> acc = 0;
    for (const auto& b : table.conjugates) acc += std::pow(b, static_cast<int>(n));
    return acc.real();
  };
  auto dist = [](double v) { return std::abs(v - std::round(v)); };

  for (unsigned n = 1; n <= n_max; ++n) {
    const double tail = conj_sum(n);  // alpha^n = s_n - tail
    const double frac = tail - std::floor(tail);
    if (std::abs(frac - 0.5) < 1e-12)
      throw PrecisionError("nearest-integer tie at n = " + std::to_string(n));
    const auto shift = static_cast<std::int64_t>(std::llround(tail));
    RealPVRow row{};
    row.n = n;
    row.trace = s[n];
    row.nearest = s[n] - shift;
    row.norm_power = dist(tail);
    // nearest * alpha = s_{n+1} - tail_{n+1} + alpha * tail_n - shift * alpha
    const double next_tail = conj_sum(n + 1);
    const double frac_shift = static_cast<double>(x * shift - std::floor(x * shift));
    row.norm_nearest_times_alpha = dist(-next_tail + table.alpha * tail - frac_shift);
    row.decay_bound = static_cast<double>(table.conjugates.size()) * std::pow(table.conjugate_modulus, n);
    table.rows.push_back(row);
  }

  table.tail_start = n_max + 1;
  for (unsigned n = n_max; n >= 1; --n) {
    const auto& row = table.rows[n - 1];
    if (row.trace != row.nearest || row.norm_power > row.decay_bound + 1e-12) break;
    table.tail_start = n;
  }
  return table;
}

} // namespace rigidseq
