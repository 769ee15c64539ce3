#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rigidseq/absvalue.hpp"

namespace rigidseq {

/// A prime p < 2^31, verified by trial division on construction.
class PrimeModulus {
public:
  explicit PrimeModulus(std::uint32_t p);

  std::uint32_t value() const { return p_; }

  std::uint32_t reduce(std::int64_t x) const;
  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  /// Throws DivisionByZero for a == 0.
  std::uint32_t inv(std::uint32_t a) const;

  bool operator==(const PrimeModulus&) const = default;

private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

/// Element of F_p.
class Fp {
public:
  Fp(PrimeModulus p, std::int64_t value) : mod_(p), value_(p.reduce(value)) {}

  std::uint32_t value() const { return value_; }
  const PrimeModulus& modulus() const { return mod_; }

  Fp operator+(const Fp& o) const;
  Fp operator-(const Fp& o) const;
  Fp operator*(const Fp& o) const;
  Fp operator/(const Fp& o) const;
  Fp operator-() const { return Fp(mod_, mod_.neg(value_)); }
  Fp inverse() const;
  bool is_zero() const { return value_ == 0; }

  bool operator==(const Fp& o) const { return mod_ == o.mod_ && value_ == o.value_; }

private:
  PrimeModulus mod_;
  std::uint32_t value_;
};

/// Element of F_p[t], dense. coeffs()[n] is the coefficient of t^n; the
/// leading stored coefficient is never zero, so zero is the empty vector.
class Poly {
public:
  explicit Poly(PrimeModulus p) : mod_(p) {}
  Poly(PrimeModulus p, std::vector<std::uint32_t> coeffs);
  /// Coefficients given as arbitrary integers, reduced mod p.
  static Poly from_ints(PrimeModulus p, std::span<const std::int64_t> coeffs);
  static Poly constant(PrimeModulus p, std::int64_t c);
  static Poly monomial(PrimeModulus p, std::uint32_t exponent, std::int64_t c = 1);

  const PrimeModulus& modulus() const { return mod_; }
  const std::vector<std::uint32_t>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  std::uint32_t coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : 0; }
  std::uint32_t leading() const { return coeffs_.empty() ? 0 : coeffs_.back(); }

  /// |a| = p^deg a; zero maps to the zero absolute value.
  AbsValue abs() const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scaled(std::uint32_t c) const;
  Poly shifted(std::uint32_t k) const;  // multiply by t^k

  bool operator==(const Poly& o) const = default;

  /// "t^3+2*t+1 mod 5"; zero prints as "0 mod p".
  std::string str() const;
  /// Terms without the " mod p" suffix.
  std::string body() const;
  static Poly parse(std::string_view text);
  /// Parses only the term list; the modulus is supplied.
  static Poly parse_body(std::string_view text, PrimeModulus p);

private:
  void normalize();
  PrimeModulus mod_;
  std::vector<std::uint32_t> coeffs_;
};

/// a = q*b + r with deg r < deg b.
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

void require_same_modulus(const PrimeModulus& a, const PrimeModulus& b);

} // namespace rigidseq
