#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigidseq/certificate.hpp"
#include "rigidseq/ffield.hpp"
#include "rigidseq/laurent.hpp"

namespace rigidseq {

/// num / den with den != 0.
struct RationalFunction {
  Poly num;
  Poly den;
};

struct CFExpansion {
  /// The expanded element as a series (rational inputs are expanded to the
  /// working precision; polynomials stay exact).
  Laurent alpha;
  /// Set when the expansion came from an exact rational.
  std::optional<RationalFunction> rational;
  /// a_0, a_1, ...
  std::vector<Poly> quotients;
  bool terminated = false;
};

struct Convergents {
  std::vector<Poly> p;
  std::vector<Poly> q;
};

/// The Gauss map on t^{-1} F_p[[1/t]]: x -> {1/x}, and 0 -> 0.
/// Exact non-monomial inputs are expanded to `working_precision`.
Laurent cf_step(const Laurent& x, std::int64_t working_precision = kDefaultPrecision);

/// First n+1 partial quotients by iterating cf_step.  Throws PrecisionError if
/// the series runs out of precision first.
CFExpansion cf_expand(const Laurent& alpha, std::size_t n,
                      std::int64_t working_precision = kDefaultPrecision);

/// Exact expansion by the Euclidean algorithm; stops early when it terminates.
CFExpansion cf_expand(const RationalFunction& alpha, std::size_t n);

/// As many quotients as the series certifies, up to n+1.
CFExpansion cf_expand_certified(const Laurent& alpha, std::size_t n,
                                std::int64_t working_precision = kDefaultPrecision);

/// p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2} with
/// (p_{-1}, q_{-1}) = (1, 0) and (p_0, q_0) = (a_0, 1).
Convergents convergents(const CFExpansion& cf);

/// Rows "cf.approx" (|alpha - p_n/q_n| < |q_n|^-2) and "cf.norm"
/// (||q_n alpha|| < |q_n|^-1) for every convergent, by exponent comparison.
Certificate verify_approx(const Laurent& alpha, const Convergents& conv);
/// Exact variant for rational alpha.
Certificate verify_approx(const RationalFunction& alpha, const Convergents& conv);

/// Rows checking p_n q_{n-1} - p_{n-1} q_n = (-1)^{n-1} for every n >= 1.
Certificate verify_determinants(const Convergents& conv);

/// Root of x^2 - t x - 1, i.e. [t; t, t, ...], as a series of the given precision.
Laurent fibonacci_alpha(PrimeModulus p, std::int64_t precision);

} // namespace rigidseq
