#include "rigidseq/cfrac.hpp"

#include <algorithm>

#include "rigidseq/errors.hpp"
#include "rigidseq/pisot.hpp"

namespace rigidseq {

namespace {

// Exact inputs expand to the working precision; truncated ones to whatever
// they certify (capped by the working precision).
Laurent reciprocal(const Laurent& x, std::int64_t working_precision) {
  if (x.is_exact()) return inverse(x, working_precision);
  const auto cap = max_inverse_precision(x);
  if (!cap) throw PrecisionError("cannot invert " + x.str());
  return inverse(x, std::min(*cap, working_precision));
}

} // namespace

Laurent cf_step(const Laurent& x, std::int64_t working_precision) {
  if (x.is_exact_zero()) return x;
  if (x.is_unresolved())
    throw PrecisionError("continued fraction step on an unresolved series (prec " +
                         std::to_string(*x.precision()) + ")");
  if (x.top() >= 0) throw std::invalid_argument("cf_step expects an element of t^{-1}F_p[[1/t]]");
  return fractional_part(reciprocal(x, working_precision));
}

namespace {

CFExpansion expand_series(const Laurent& alpha, std::size_t n, std::int64_t working_precision, bool strict) {
  CFExpansion cf{alpha, std::nullopt, {}, false};
  try {
    cf.quotients.push_back(integer_part(alpha));
    Laurent x = fractional_part(alpha);
    while (cf.quotients.size() < n + 1) {
      if (x.is_exact_zero()) {
        cf.terminated = true;
        break;
      }
      if (x.is_unresolved()) cf_step(x, working_precision);  // throws
      const Laurent inv = reciprocal(x, working_precision);
      cf.quotients.push_back(integer_part(inv));
      x = fractional_part(inv);
    }
    if (!cf.terminated && x.is_exact_zero()) cf.terminated = true;
  } catch (const PrecisionError&) {
    if (strict) throw;
  }
  return cf;
}

} // namespace

CFExpansion cf_expand(const Laurent& alpha, std::size_t n, std::int64_t working_precision) {
  return expand_series(alpha, n, working_precision, true);
}

CFExpansion cf_expand_certified(const Laurent& alpha, std::size_t n, std::int64_t working_precision) {
  return expand_series(alpha, n, working_precision, false);
}

CFExpansion cf_expand(const RationalFunction& alpha, std::size_t n) {
  if (alpha.den.is_zero()) throw DivisionByZero("rational with zero denominator");
  const Laurent num = Laurent::from_poly(alpha.num);
  const Laurent series = alpha.den.degree() == 0 ? num * inverse(Laurent::from_poly(alpha.den))
                                                 : num * inverse(Laurent::from_poly(alpha.den),
                                                                 kDefaultPrecision + alpha.den.degree());
  CFExpansion cf{series, alpha, {}, false};
  Poly a = alpha.num, b = alpha.den;
  while (cf.quotients.size() < n + 1) {
    auto [q, r] = divmod(a, b);
    cf.quotients.push_back(std::move(q));
    if (r.is_zero()) {
      cf.terminated = true;
      break;
    }
    a = std::move(b);
    b = std::move(r);
  }
  return cf;
}

Convergents convergents(const CFExpansion& cf) {
  if (cf.quotients.empty()) throw std::invalid_argument("convergents need at least one partial quotient");
  const auto& m = cf.quotients.front().modulus();
  Convergents c;
  Poly p_prev = Poly::constant(m, 1), q_prev(m);
  Poly p_cur = cf.quotients[0], q_cur = Poly::constant(m, 1);
  c.p.push_back(p_cur);
  c.q.push_back(q_cur);
  for (std::size_t n = 1; n < cf.quotients.size(); ++n) {
    const Poly& a = cf.quotients[n];
    Poly p_next = a * p_cur + p_prev;
    Poly q_next = a * q_cur + q_prev;
    p_prev = std::exchange(p_cur, std::move(p_next));
    q_prev = std::exchange(q_cur, std::move(q_next));
    c.p.push_back(p_cur);
    c.q.push_back(q_cur);
  }
  return c;
}

namespace {

CertificateRow exponent_row(std::string id, std::size_t n, const AbsValue& left, std::int64_t bound) {
  CertificateRow row{std::move(id), {{"n", n}}, left.str(), "<", "p^" + std::to_string(bound), false};
  row.pass = left.is_zero() || left.exponent() < bound;
  return row;
}

} // namespace

Certificate verify_approx(const Laurent& alpha, const Convergents& conv) {
  Certificate cert;
  for (std::size_t n = 0; n < conv.q.size(); ++n) {
    const Laurent qa = Laurent::from_poly(conv.q[n]) * alpha;
    const Laurent diff = qa - Laurent::from_poly(conv.p[n]);
    if (diff.is_unresolved())
      throw PrecisionError("|q_n alpha - p_n| unresolved at n = " + std::to_string(n));
    const int dq = conv.q[n].degree();
    // |alpha - p/q| = |q alpha - p| / |q|
    const AbsValue approx = diff.abs() / conv.q[n].abs();
    cert.add(exponent_row("cf.approx", n, approx, -2 * dq));
    cert.add(exponent_row("cf.norm", n, dist_to_integers(qa), -dq));
  }
  return cert;
}

Certificate verify_approx(const RationalFunction& alpha, const Convergents& conv) {
  Certificate cert;
  const AbsValue den_abs = alpha.den.abs();
  for (std::size_t n = 0; n < conv.q.size(); ++n) {
    const Poly& q = conv.q[n];
    const Poly diff = q * alpha.num - conv.p[n] * alpha.den;
    const AbsValue approx = diff.abs() / den_abs / q.abs();
    const Poly rem = divmod(q * alpha.num, alpha.den).second;
    cert.add(exponent_row("cf.approx", n, approx, -2 * q.degree()));
    cert.add(exponent_row("cf.norm", n, rem.abs() / den_abs, -q.degree()));
  }
  return cert;
}

Certificate verify_determinants(const Convergents& conv) {
  Certificate cert;
  for (std::size_t n = 1; n < conv.q.size(); ++n) {
    const Poly det = conv.p[n] * conv.q[n - 1] - conv.p[n - 1] * conv.q[n];
    const auto& m = det.modulus();
    const Poly expected = Poly::constant(m, n % 2 == 1 ? 1 : -1);
    cert.add({"cf.determinant", {{"n", n}}, det.body(), "==", expected.body(), det == expected});
  }
  return cert;
}

Laurent fibonacci_alpha(PrimeModulus p, std::int64_t precision) {
  const MonicIntPoly f({Poly::constant(p, 1), Poly::monomial(p, 1)});
  return pv_root(f, precision).root.truncated(precision);
}

} // namespace rigidseq
