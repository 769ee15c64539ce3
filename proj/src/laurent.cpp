#include "rigidseq/laurent.hpp"

#include <algorithm>
#include <limits>

#include "rigidseq/errors.hpp"
#include "terms.hpp"

namespace rigidseq {

namespace {

std::optional<std::int64_t> min_precision(std::optional<std::int64_t> a, std::optional<std::int64_t> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

} // namespace

Laurent Laurent::unresolved(PrimeModulus p, std::int64_t precision) {
  Laurent r(p);
  r.precision_ = precision;
  return r;
}

Laurent Laurent::from_poly(const Poly& a) {
  std::vector<std::uint32_t> c(a.coeffs().rbegin(), a.coeffs().rend());
  return from_coeffs(a.modulus(), a.degree(), std::move(c));
}

Laurent Laurent::monomial(PrimeModulus p, std::int64_t exponent, std::int64_t coeff,
                          std::optional<std::int64_t> precision) {
  return from_coeffs(p, exponent, {p.reduce(coeff)}, precision);
}

Laurent Laurent::from_coeffs(PrimeModulus p, std::int64_t top, std::vector<std::uint32_t> coeffs,
                             std::optional<std::int64_t> precision) {
  Laurent r(p);
  r.top_ = top;
  r.coeffs_ = std::move(coeffs);
  r.precision_ = precision;
  for (auto& c : r.coeffs_) c %= p.value();
  r.normalize();
  return r;
}

void Laurent::normalize() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    top_ = 0;
    return;
  }
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
  top_ -= static_cast<std::int64_t>(lead);
  if (precision_) {
    // drop anything below the known window
    const std::int64_t lowest = -*precision_;
    if (top_ < lowest) {
      coeffs_.clear();
      top_ = 0;
      return;
    }
    const auto keep = static_cast<std::size_t>(top_ - lowest + 1);
    if (coeffs_.size() > keep) coeffs_.resize(keep);
  }
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) top_ = 0;
}

std::int64_t Laurent::top() const {
  if (coeffs_.empty()) throw PrecisionError("leading exponent of a zero or unresolved series");
  return top_;
}

std::int64_t Laurent::top_bound() const {
  if (!coeffs_.empty()) return top_;
  if (!precision_) throw std::logic_error("top_bound of the exact zero");
  return -*precision_ - 1;
}

std::uint32_t Laurent::coeff(std::int64_t exponent) const {
  if (!is_known(exponent))
    throw PrecisionError("coefficient of t^" + std::to_string(exponent) + " is below the known window (prec " +
                         std::to_string(*precision_) + ")");
  if (coeffs_.empty() || exponent > top_ || exponent < bottom()) return 0;
  return coeffs_[static_cast<std::size_t>(top_ - exponent)];
}

AbsValue Laurent::abs() const {
  if (has_known_nonzero()) return AbsValue::from_exponent(top_);
  if (is_exact()) return AbsValue::zero();
  throw PrecisionError("absolute value of a series with no known nonzero coefficient");
}

Laurent Laurent::truncated(std::int64_t precision) const {
  if (precision_ && *precision_ <= precision) return *this;
  Laurent r = *this;
  r.precision_ = precision;
  r.normalize();
  return r;
}

Laurent Laurent::operator+(const Laurent& o) const {
  require_same_modulus(mod_, o.mod_);
  const auto prec = min_precision(precision_, o.precision_);
  if (coeffs_.empty() && o.coeffs_.empty()) return prec ? unresolved(mod_, *prec) : exact_zero(mod_);

  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  for (const Laurent* x : {this, &o}) {
    if (x->coeffs_.empty()) continue;
    hi = std::max(hi, x->top_);
    lo = std::min(lo, x->bottom());
  }
  if (prec) lo = std::max(lo, -*prec);
  if (hi < lo) return unresolved(mod_, *prec);

  std::vector<std::uint32_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const Laurent* x : {this, &o}) {
    for (std::size_t i = 0; i < x->coeffs_.size(); ++i) {
      const std::int64_t e = x->top_ - static_cast<std::int64_t>(i);
      if (e < lo) break;
      auto& slot = c[static_cast<std::size_t>(hi - e)];
      slot = mod_.add(slot, x->coeffs_[i]);
    }
  }
  return from_coeffs(mod_, hi, std::move(c), prec);
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& c : r.coeffs_) c = mod_.neg(c);
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::scaled(std::uint32_t c) const {
  Laurent r = *this;
  for (auto& x : r.coeffs_) x = mod_.mul(x, c % mod_.value());
  r.normalize();
  return r;
}

Laurent Laurent::operator*(const Laurent& o) const {
  require_same_modulus(mod_, o.mod_);
  if (is_exact_zero() || o.is_exact_zero()) return exact_zero(mod_);

  // Unknown tail of one factor times the other's leading term bounds the
  // first uncertain exponent of the product.
  std::optional<std::int64_t> prec;
  if (precision_) prec = min_precision(prec, *precision_ - o.top_bound());
  if (o.precision_) prec = min_precision(prec, *o.precision_ - top_bound());

  if (coeffs_.empty() || o.coeffs_.empty()) return unresolved(mod_, *prec);

  const std::int64_t hi = top_ + o.top_;
  std::int64_t lo = bottom() + o.bottom();
  if (prec) lo = std::max(lo, -*prec);
  if (hi < lo) return unresolved(mod_, *prec);

  std::vector<std::uint32_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
  const auto span = static_cast<std::size_t>(hi - lo);
  for (std::size_t i = 0; i < coeffs_.size() && i <= span; ++i) {
    if (coeffs_[i] == 0) continue;
    const std::size_t jmax = std::min(o.coeffs_.size() - 1, span - i);
    for (std::size_t j = 0; j <= jmax; ++j)
      c[i + j] = mod_.add(c[i + j], mod_.mul(coeffs_[i], o.coeffs_[j]));
  }
  return from_coeffs(mod_, hi, std::move(c), prec);
}

bool Laurent::agrees_with(const Laurent& o) const {
  if (!(mod_ == o.mod_)) return false;
  const auto prec = min_precision(precision_, o.precision_);
  std::int64_t hi = std::numeric_limits<std::int64_t>::min();
  std::int64_t lo = std::numeric_limits<std::int64_t>::max();
  for (const Laurent* x : {this, &o}) {
    if (x->coeffs_.empty()) continue;
    hi = std::max(hi, x->top_);
    lo = std::min(lo, x->bottom());
  }
  if (prec) lo = std::max(lo, -*prec);
  for (std::int64_t e = hi; e >= lo; --e)
    if (coeff(e) != o.coeff(e)) return false;
  return true;
}

std::string Laurent::str() const {
  std::string out;
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != 0) detail::append_term(out, coeffs_[i], top_ - static_cast<std::int64_t>(i));
  if (out.empty()) out = "0";
  out += " mod " + std::to_string(mod_.value());
  if (precision_) out += " ; prec " + std::to_string(*precision_);
  return out;
}

Laurent Laurent::parse(std::string_view text) {
  std::optional<std::int64_t> prec;
  if (auto semi = text.find(';'); semi != std::string_view::npos) {
    auto clause = detail::trim(text.substr(semi + 1));
    if (clause.substr(0, 4) != "prec") throw ParseError("expected 'prec M' after ';'");
    prec = detail::parse_int(clause.substr(4));
    text = text.substr(0, semi);
  }
  auto [body, p] = detail::split_modulus(text);
  const PrimeModulus mod(p);
  const auto terms = detail::parse_terms(body);
  if (terms.empty()) return prec ? unresolved(mod, *prec) : exact_zero(mod);
  std::int64_t hi = terms.front().exponent, lo = hi;
  for (const auto& t : terms) {
    hi = std::max(hi, t.exponent);
    lo = std::min(lo, t.exponent);
  }
  std::vector<std::uint32_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& t : terms) {
    if (prec && t.exponent < -*prec) throw ParseError("term t^" + std::to_string(t.exponent) + " lies below prec");
    auto& slot = c[static_cast<std::size_t>(hi - t.exponent)];
    slot = mod.add(slot, mod.reduce(t.coeff));
  }
  return from_coeffs(mod, hi, std::move(c), prec);
}

Laurent power(const Laurent& x, unsigned n) {
  Laurent result = Laurent::monomial(x.modulus(), 0);
  Laurent base = x;
  while (n > 0) {
    if (n & 1u) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

std::optional<std::int64_t> max_inverse_precision(const Laurent& a) {
  if (!a.has_known_nonzero()) throw PrecisionError("cannot invert a series with no known nonzero coefficient");
  if (a.is_exact()) return std::nullopt;
  return *a.precision() + 2 * a.top();
}

Laurent inverse(const Laurent& a, std::int64_t target_precision) {
  if (a.is_exact_zero()) throw DivisionByZero("inverse of the exact zero");
  const auto limit = max_inverse_precision(a);
  if (limit && target_precision > *limit)
    throw PrecisionError("inverse to prec " + std::to_string(target_precision) + " needs more input precision (max " +
                         std::to_string(*limit) + ")");
  const auto& m = a.modulus();
  const std::int64_t n = a.top();
  const auto& ac = a.coeffs();
  if (a.is_exact() && ac.size() == 1) return Laurent::monomial(m, -n, m.inv(ac[0]));
  if (target_precision < n) return Laurent::unresolved(m, target_precision);

  // a = t^n * sum_i ac[i] t^{-i}; invert the power series in 1/t.  The
  // result runs from t^{-n} down to t^{-target_precision}.
  const auto count = static_cast<std::size_t>(target_precision - n + 1);
  std::vector<std::uint32_t> b(count, 0);
  const std::uint32_t lead_inv = m.inv(ac[0]);
  b[0] = lead_inv;
  for (std::size_t j = 1; j < count; ++j) {
    std::uint32_t acc = 0;
    const std::size_t imax = std::min(j, ac.size() - 1);
    for (std::size_t i = 1; i <= imax; ++i) acc = m.add(acc, m.mul(ac[i], b[j - i]));
    b[j] = m.mul(m.neg(acc), lead_inv);
  }
  return Laurent::from_coeffs(m, -n, std::move(b), target_precision);
}

Laurent inverse(const Laurent& a, std::optional<std::int64_t> fallback_precision) {
  if (a.is_exact_zero()) throw DivisionByZero("inverse of the exact zero");
  if (a.is_exact() && a.coeffs().size() == 1)
    return Laurent::monomial(a.modulus(), -a.top(), a.modulus().inv(a.coeffs()[0]));
  const auto limit = max_inverse_precision(a);
  return inverse(a, limit ? *limit : fallback_precision.value_or(kDefaultPrecision));
}

Poly integer_part(const Laurent& x) {
  if (!x.is_known(0)) throw PrecisionError("integer part is not certified: prec " + std::to_string(*x.precision()));
  const auto& m = x.modulus();
  if (!x.has_known_nonzero() || x.top() < 0) return Poly(m);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(x.top() + 1), 0);
  for (std::int64_t e = 0; e <= x.top(); ++e) c[static_cast<std::size_t>(e)] = x.coeff(e);
  return Poly(m, std::move(c));
}

Laurent fractional_part(const Laurent& x) {
  if (!x.is_known(0)) throw PrecisionError("fractional part is not certified: prec " + std::to_string(*x.precision()));
  if (!x.has_known_nonzero() || x.top() < 0) return x;
  if (x.bottom() >= 0) return x.is_exact() ? Laurent::exact_zero(x.modulus()) : Laurent::unresolved(x.modulus(), *x.precision());
  std::vector<std::uint32_t> c(x.coeffs().begin() + (x.top() + 1), x.coeffs().end());
  return Laurent::from_coeffs(x.modulus(), -1, std::move(c), x.precision());
}

AbsValue dist_to_integers(const Laurent& x) {
  const Laurent f = fractional_part(x);
  if (f.is_unresolved())
    throw PrecisionError("distance to F_p[t] is indeterminate at prec " + std::to_string(*f.precision()));
  return f.abs();
}

} // namespace rigidseq
