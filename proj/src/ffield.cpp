#include "rigidseq/ffield.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <stdexcept>

#include "rigidseq/errors.hpp"
#include "terms.hpp"

namespace rigidseq {

// ---------------------------------------------------------------- AbsValue

std::int64_t AbsValue::exponent() const {
  if (!exponent_) throw std::logic_error("exponent of the zero absolute value");
  return *exponent_;
}

std::strong_ordering AbsValue::operator<=>(const AbsValue& other) const {
  if (!exponent_ || !other.exponent_) return exponent_.has_value() <=> other.exponent_.has_value();
  return *exponent_ <=> *other.exponent_;
}

AbsValue operator*(const AbsValue& a, const AbsValue& b) {
  if (a.is_zero() || b.is_zero()) return AbsValue::zero();
  return AbsValue::from_exponent(*a.exponent_ + *b.exponent_);
}

AbsValue operator/(const AbsValue& a, const AbsValue& b) {
  if (b.is_zero()) throw DivisionByZero("division by the zero absolute value");
  if (a.is_zero()) return AbsValue::zero();
  return AbsValue::from_exponent(*a.exponent_ - *b.exponent_);
}

std::string AbsValue::str() const {
  return exponent_ ? "p^" + std::to_string(*exponent_) : "0";
}

// ---------------------------------------------------------------- F_p

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
  if (p >= (1u << 31) || !is_prime(p))
    throw std::invalid_argument("modulus " + std::to_string(p) + " is not a prime below 2^31");
}

std::uint32_t PrimeModulus::reduce(std::int64_t x) const {
  std::int64_t r = x % static_cast<std::int64_t>(p_);
  return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
}

std::uint32_t PrimeModulus::add(std::uint32_t a, std::uint32_t b) const {
  std::uint32_t s = a + b;
  return s >= p_ ? s - p_ : s;
}

std::uint32_t PrimeModulus::sub(std::uint32_t a, std::uint32_t b) const {
  return a >= b ? a - b : a + p_ - b;
}

std::uint32_t PrimeModulus::mul(std::uint32_t a, std::uint32_t b) const {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
}

std::uint32_t PrimeModulus::inv(std::uint32_t a) const {
  if (a % p_ == 0) throw DivisionByZero("inverse of 0 in F_" + std::to_string(p_));
  // extended Euclid
  std::int64_t r0 = p_, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
    std::tie(s0, s1) = std::pair{s1, s0 - q * s1};
  }
  return reduce(s0);
}

void require_same_modulus(const PrimeModulus& a, const PrimeModulus& b) {
  if (!(a == b))
    throw ModulusMismatch("operands over F_" + std::to_string(a.value()) + " and F_" +
                          std::to_string(b.value()));
}

Fp Fp::operator+(const Fp& o) const {
  require_same_modulus(mod_, o.mod_);
  return Fp(mod_, mod_.add(value_, o.value_));
}
Fp Fp::operator-(const Fp& o) const {
  require_same_modulus(mod_, o.mod_);
  return Fp(mod_, mod_.sub(value_, o.value_));
}
Fp Fp::operator*(const Fp& o) const {
  require_same_modulus(mod_, o.mod_);
  return Fp(mod_, mod_.mul(value_, o.value_));
}
Fp Fp::operator/(const Fp& o) const { return *this * o.inverse(); }
Fp Fp::inverse() const { return Fp(mod_, mod_.inv(value_)); }

// ---------------------------------------------------------------- F_p[t]

Poly::Poly(PrimeModulus p, std::vector<std::uint32_t> coeffs) : mod_(p), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c %= p.value();
  normalize();
}

Poly Poly::from_ints(PrimeModulus p, std::span<const std::int64_t> coeffs) {
  std::vector<std::uint32_t> v;
  v.reserve(coeffs.size());
  for (auto c : coeffs) v.push_back(p.reduce(c));
  return Poly(p, std::move(v));
}

Poly Poly::constant(PrimeModulus p, std::int64_t c) { return Poly(p, {p.reduce(c)}); }

Poly Poly::monomial(PrimeModulus p, std::uint32_t exponent, std::int64_t c) {
  std::vector<std::uint32_t> v(exponent + 1, 0);
  v[exponent] = p.reduce(c);
  return Poly(p, std::move(v));
}

void Poly::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

AbsValue Poly::abs() const {
  return is_zero() ? AbsValue::zero() : AbsValue::from_exponent(degree());
}

Poly Poly::operator+(const Poly& o) const {
  require_same_modulus(mod_, o.mod_);
  std::vector<std::uint32_t> r(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = mod_.add(coeff(i), o.coeff(i));
  return Poly(mod_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& c : r.coeffs_) c = mod_.neg(c);
  return r;
}

Poly Poly::operator*(const Poly& o) const {
  require_same_modulus(mod_, o.mod_);
  if (is_zero() || o.is_zero()) return Poly(mod_);
  std::vector<std::uint32_t> r(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j)
      r[i + j] = mod_.add(r[i + j], mod_.mul(coeffs_[i], o.coeffs_[j]));
  }
  return Poly(mod_, std::move(r));
}

Poly Poly::scaled(std::uint32_t c) const {
  Poly r = *this;
  for (auto& x : r.coeffs_) x = mod_.mul(x, c % mod_.value());
  r.normalize();
  return r;
}

Poly Poly::shifted(std::uint32_t k) const {
  if (is_zero()) return *this;
  Poly r = *this;
  r.coeffs_.insert(r.coeffs_.begin(), k, 0u);
  return r;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  require_same_modulus(a.modulus(), b.modulus());
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  const auto& m = a.modulus();
  if (a.degree() < b.degree()) return {Poly(m), a};
  std::vector<std::uint32_t> rem = a.coeffs();
  std::vector<std::uint32_t> quot(a.degree() - b.degree() + 1, 0);
  const std::uint32_t lead_inv = m.inv(b.leading());
  const auto& bc = b.coeffs();
  for (int k = a.degree() - b.degree(); k >= 0; --k) {
    std::uint32_t c = m.mul(rem[k + b.degree()], lead_inv);
    quot[k] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) rem[k + j] = m.sub(rem[k + j], m.mul(c, bc[j]));
  }
  rem.resize(b.degree());
  return {Poly(m, std::move(quot)), Poly(m, std::move(rem))};
}

std::string Poly::body() const {
  if (is_zero()) return "0";
  std::string out;
  for (int n = degree(); n >= 0; --n)
    if (coeffs_[n] != 0) detail::append_term(out, coeffs_[n], n);
  return out;
}

std::string Poly::str() const { return body() + " mod " + std::to_string(mod_.value()); }

Poly Poly::parse_body(std::string_view text, PrimeModulus p) {
  std::vector<std::uint32_t> v;
  for (const auto& term : detail::parse_terms(text)) {
    if (term.exponent < 0) throw ParseError("negative exponent in polynomial: " + std::string(text));
    if (static_cast<std::size_t>(term.exponent) >= v.size()) v.resize(term.exponent + 1, 0);
    v[term.exponent] = p.add(v[term.exponent], p.reduce(term.coeff));
  }
  return Poly(p, std::move(v));
}

Poly Poly::parse(std::string_view text) {
  auto [body, p] = detail::split_modulus(text);
  return parse_body(body, PrimeModulus(p));
}

// ---------------------------------------------------------------- term syntax

namespace detail {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

std::pair<std::string_view, std::uint32_t> split_modulus(std::string_view text) {
  auto pos = text.rfind("mod");
  if (pos == std::string_view::npos) throw ParseError("missing 'mod p' in '" + std::string(text) + "'");
  auto p = parse_int(text.substr(pos + 3));
  if (p < 2 || p > INT32_MAX) throw ParseError("bad modulus in '" + std::string(text) + "'");
  return {trim(text.substr(0, pos)), static_cast<std::uint32_t>(p)};
}

std::vector<Term> parse_terms(std::string_view text) {
  std::string compact;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  if (compact.empty()) throw ParseError("empty polynomial text");
  if (compact == "0") return {};

  std::vector<Term> terms;
  std::size_t i = 0;
  while (i < compact.size()) {
    int sign = 1;
    if (compact[i] == '+' || compact[i] == '-') {
      sign = compact[i] == '-' ? -1 : 1;
      ++i;
    } else if (!terms.empty()) {
      throw ParseError("expected '+' or '-' in '" + compact + "'");
    }
    // Split the term at the next top-level sign that is not an exponent sign.
    std::size_t j = i;
    while (j < compact.size() && !((compact[j] == '+' || compact[j] == '-') && compact[j - 1] != '^')) ++j;
    std::string_view term(compact.data() + i, j - i);
    if (term.empty()) throw ParseError("empty term in '" + compact + "'");

    Term t{1, 0};
    auto tpos = term.find('t');
    if (tpos == std::string_view::npos) {
      t.coeff = parse_int(term);
    } else {
      auto coeff_part = term.substr(0, tpos);
      if (!coeff_part.empty()) {
        if (coeff_part.back() != '*') throw ParseError("expected '*' before t in '" + std::string(term) + "'");
        coeff_part.remove_suffix(1);
        t.coeff = parse_int(coeff_part);
      }
      auto rest = term.substr(tpos + 1);
      if (rest.empty()) {
        t.exponent = 1;
      } else {
        if (rest.front() != '^') throw ParseError("malformed term '" + std::string(term) + "'");
        t.exponent = parse_int(rest.substr(1));
      }
    }
    t.coeff *= sign;
    terms.push_back(t);
    i = j;
  }
  return terms;
}

void append_term(std::string& out, std::uint32_t coeff, std::int64_t exponent) {
  if (!out.empty()) out += '+';
  if (exponent == 0) {
    out += std::to_string(coeff);
    return;
  }
  if (coeff != 1) out += std::to_string(coeff) + "*";
  out += 't';
  if (exponent != 1) out += "^" + std::to_string(exponent);
}

} // namespace detail
} // namespace rigidseq
