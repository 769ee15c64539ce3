#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rigidseq/absvalue.hpp"
#include "rigidseq/ffield.hpp"

namespace rigidseq {

/// Working precision used when an exact operand has to be expanded into an
/// infinite series (for example 1/(t+1)).
inline constexpr std::int64_t kDefaultPrecision = 64;

/// Truncated element of F_p((1/t)).
///
/// The value is sum_{e} c_e t^e.  Coefficients are stored from the leading
/// exponent `top()` downward with leading and trailing zeros trimmed.  A finite
/// precision M means the coefficients of t^e are known for e >= -M and unknown
/// below; an exact element has no unknown tail.  M may become negative after
/// products of large elements, in which case even the polynomial part is
/// uncertain and `integer_part` refuses to answer.
///
/// Zero comes in two flavours: the exact zero, and an "unresolved" element
/// whose known window is all zero but whose tail is unknown.
class Laurent {
public:
  explicit Laurent(PrimeModulus p) : mod_(p) {}

  static Laurent exact_zero(PrimeModulus p) { return Laurent(p); }
  /// O(t^{-precision-1}): nothing known to be nonzero.
  static Laurent unresolved(PrimeModulus p, std::int64_t precision);
  static Laurent from_poly(const Poly& a);
  static Laurent monomial(PrimeModulus p, std::int64_t exponent, std::int64_t coeff = 1,
                          std::optional<std::int64_t> precision = std::nullopt);
  /// coeffs[i] is the coefficient of t^{top - i}.
  static Laurent from_coeffs(PrimeModulus p, std::int64_t top, std::vector<std::uint32_t> coeffs,
                             std::optional<std::int64_t> precision = std::nullopt);

  const PrimeModulus& modulus() const { return mod_; }
  bool is_exact() const { return !precision_.has_value(); }
  /// nullopt for exact elements.
  std::optional<std::int64_t> precision() const { return precision_; }
  bool is_exact_zero() const { return is_exact() && coeffs_.empty(); }
  bool has_known_nonzero() const { return !coeffs_.empty(); }
  bool is_unresolved() const { return !is_exact() && coeffs_.empty(); }

  /// Leading exponent; requires has_known_nonzero().
  std::int64_t top() const;
  /// Upper bound on the leading exponent: top() when known, otherwise the
  /// first unknown exponent.  Not defined for the exact zero.
  std::int64_t top_bound() const;
  /// Lowest stored exponent (only meaningful when has_known_nonzero()).
  std::int64_t bottom() const { return top_ - static_cast<std::int64_t>(coeffs_.size()) + 1; }
  const std::vector<std::uint32_t>& coeffs() const { return coeffs_; }

  bool is_known(std::int64_t exponent) const { return is_exact() || exponent >= -*precision_; }
  /// Throws PrecisionError below the known window.
  std::uint32_t coeff(std::int64_t exponent) const;

  /// |x|; throws PrecisionError for unresolved elements.
  AbsValue abs() const;

  /// Forget every coefficient below t^{-precision}.
  Laurent truncated(std::int64_t precision) const;

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator-() const;
  Laurent operator*(const Laurent& o) const;
  Laurent scaled(std::uint32_t c) const;

  /// Structural equality: same known window and same coefficients.
  bool operator==(const Laurent& o) const = default;
  /// True when both agree on every exponent known to both.
  bool agrees_with(const Laurent& o) const;

  /// "t^2+t^-1 mod 2 ; prec 32"; exact elements omit the "; prec" clause.
  std::string str() const;
  static Laurent parse(std::string_view text);

private:
  void normalize();

  PrimeModulus mod_;
  std::int64_t top_ = 0;
  std::vector<std::uint32_t> coeffs_;
  std::optional<std::int64_t> precision_;
};

/// x^n by repeated squaring, n >= 0.
Laurent power(const Laurent& x, unsigned n);

/// 1/a known down to t^{-target_precision}.  Throws DivisionByZero for the
/// exact zero and PrecisionError when `a` is unresolved or its precision
/// cannot support the requested target.
Laurent inverse(const Laurent& a, std::int64_t target_precision);

/// The most precise inverse the input certifies (exact inputs expand to
/// `fallback_precision`).
Laurent inverse(const Laurent& a, std::optional<std::int64_t> fallback_precision = std::nullopt);

/// Largest target precision `inverse` can certify for this input.
std::optional<std::int64_t> max_inverse_precision(const Laurent& a);

/// Polynomial part sum_{e >= 0} c_e t^e.  Throws PrecisionError if a
/// nonnegative exponent is unknown.
Poly integer_part(const Laurent& x);

/// x - integer_part(x): the component in t^{-1} F_p[[1/t]].
Laurent fractional_part(const Laurent& x);

/// ||x|| = |{x}|.  Throws PrecisionError when the fractional part is unresolved.
AbsValue dist_to_integers(const Laurent& x);

} // namespace rigidseq
