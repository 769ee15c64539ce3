#include "rigidseq/pisot.hpp"

#include <algorithm>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

MonicIntPoly::MonicIntPoly(std::vector<Poly> c) : c_(std::move(c)) {
  if (c_.empty()) throw std::invalid_argument("monic polynomial needs degree >= 1");
  for (const auto& ci : c_) require_same_modulus(ci.modulus(), c_.front().modulus());
}

Laurent MonicIntPoly::evaluate(const Laurent& x) const {
  Laurent r = Laurent::monomial(modulus(), 0);
  for (int i = degree() - 1; i >= 0; --i) r = r * x - Laurent::from_poly(c_[i]);
  return r;
}

Laurent MonicIntPoly::evaluate_derivative(const Laurent& x) const {
  const int d = degree();
  Laurent r = Laurent::monomial(modulus(), 0, d);
  for (int k = d - 2; k >= 0; --k) r = r * x - Laurent::from_poly(c_[k + 1].scaled(modulus().reduce(k + 1)));
  return r;
}

std::string MonicIntPoly::str() const {
  std::string out = "x^" + std::to_string(degree());
  for (int i = degree() - 1; i >= 0; --i) {
    if (c_[i].is_zero()) continue;
    out += "-(" + c_[i].body() + ")";
    if (i >= 1) out += "*x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out + " mod " + std::to_string(modulus().value());
}

NewtonPolygon newton_polygon(const MonicIntPoly& f) {
  struct Pt {
    std::int64_t x, y;
  };
  const int d = f.degree();
  NewtonPolygon out;
  std::vector<Pt> pts;
  for (int i = 0; i < d; ++i) {
    if (f.c()[i].is_zero()) {
      if (pts.empty()) ++out.zero_roots;
      continue;
    }
    pts.push_back({i, f.c()[i].degree()});
  }
  pts.push_back({d, 0});

  // Upper hull, left to right; collinear points are dropped so each segment
  // carries its full multiplicity.
  std::vector<Pt> hull;
  for (const auto& pt : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      const std::int64_t cross = (b.x - a.x) * (pt.y - a.y) - (b.y - a.y) * (pt.x - a.x);
      if (cross >= 0) hull.pop_back();
      else break;
    }
    hull.push_back(pt);
  }
  for (std::size_t k = hull.size() - 1; k >= 1; --k) {
    const auto& a = hull[k - 1];
    const auto& b = hull[k];
    // A segment rising by g per step carries roots of absolute value p^{-g}.
    out.slopes.push_back({Rational(a.y - b.y, b.x - a.x), static_cast<int>(b.x - a.x)});
  }
  return out;
}

bool is_pv(const MonicIntPoly& f) {
  const auto poly = newton_polygon(f);
  if (poly.zero_roots > 0 || poly.slopes.empty()) return false;
  if (poly.slopes.front().value <= Rational(0) || poly.slopes.front().multiplicity != 1) return false;
  return std::all_of(poly.slopes.begin() + 1, poly.slopes.end(), [](const Slope& s) { return s.value < Rational(0); });
}

std::int64_t PVElement::dominant_slope() const { return slopes.front().value.numerator(); }

std::optional<Rational> PVElement::conjugate_slope() const {
  if (slopes.size() < 2) return std::nullopt;
  return slopes[1].value;
}

namespace {

std::string describe(const NewtonPolygon& poly) {
  std::string s;
  for (const auto& sl : poly.slopes)
    s += (s.empty() ? "" : ", ") + to_string(sl.value) + " (x" + std::to_string(sl.multiplicity) + ")";
  if (poly.zero_roots) s += ", zero root (x" + std::to_string(poly.zero_roots) + ")";
  return "{" + s + "}";
}

Laurent as_exact(const Laurent& x) {
  return Laurent::from_coeffs(x.modulus(), x.has_known_nonzero() ? x.top() : 0, x.coeffs());
}

} // namespace

PVElement pv_root(const MonicIntPoly& f, std::int64_t precision) {
  const auto poly = newton_polygon(f);
  if (!is_pv(f)) throw std::domain_error("not a PV polynomial: root slopes " + describe(poly));
  const auto& m = f.modulus();
  const int d = f.degree();
  if (d == 1) return PVElement{f, Laurent::from_poly(f.c()[0]), poly.slopes};

  const std::int64_t s = poly.slopes.front().value.numerator();
  const Poly& top_coeff = f.c()[d - 1];
  // Final working precision leaves room for |f'(alpha)| = p^{(d-1)s}.
  const std::int64_t work = precision + (d - 1) * s + 2;

  Laurent a = Laurent::monomial(m, s, top_coeff.leading());
  for (int iter = 0; iter < 64; ++iter) {
    const Laurent fa = f.evaluate(a);
    if (fa.is_exact_zero()) return PVElement{f, a, poly.slopes};
    const Laurent dfa = f.evaluate_derivative(a);
    if (dfa.is_exact_zero())
      throw std::domain_error("derivative vanishes at the Newton seed (inseparable case)");
    // Hensel: |f(a)| < |f'(a)|^2 guarantees convergence to the unique nearby root
    // with |alpha - a| = |f(a)| / |f'(a)|.
    if (!(fa.abs() < dfa.abs() * dfa.abs()))
      throw std::domain_error("Newton seed fails |f(a)| < |f'(a)|^2 (wild case)");
    const std::int64_t certified = dfa.top() - fa.top() - 1;
    if (fa.top() < -precision) return PVElement{f, a.truncated(certified), poly.slopes};

    const Laurent step = fa * inverse(dfa, work + fa.top());
    a = as_exact((a - step).truncated(work));
  }
  throw PrecisionError("Newton iteration did not reach prec " + std::to_string(precision));
}

std::vector<Poly> trace_sequence(const MonicIntPoly& f, unsigned n_max) {
  const auto& m = f.modulus();
  const int d = f.degree();
  const auto& c = f.c();
  std::vector<Poly> s;
  s.reserve(n_max + 1);
  s.push_back(Poly::constant(m, d));
  for (unsigned n = 1; n <= n_max; ++n) {
    // Newton's identities for n <= d, the linear recurrence afterwards.
    Poly acc(m);
    const unsigned terms = std::min<unsigned>(n, static_cast<unsigned>(d));
    for (unsigned k = 1; k <= terms; ++k)
      acc = acc + (k == n ? c[d - n].scaled(m.reduce(n)) : c[d - k] * s[n - k]);
    s.push_back(std::move(acc));
  }
  return s;
}

std::vector<Poly> pv_floor_powers(const PVElement& e, unsigned n_max) {
  const auto traces = trace_sequence(e.minpoly, n_max);
  std::vector<Poly> floors;
  floors.reserve(n_max);
  Laurent pw = e.root;
  for (unsigned n = 1; n <= n_max; ++n) {
    const Poly via_series = integer_part(pw);
    if (!(via_series == traces[n]))
      throw CertificateFailure("floor(alpha^" + std::to_string(n) + ") mismatch: series " + via_series.str() +
                               " vs trace " + traces[n].str());
    floors.push_back(traces[n]);
    if (n < n_max) pw = pw * e.root;
  }
  return floors;
}

NormDecay pv_norm_decay(const PVElement& e, unsigned n_max) {
  NormDecay out;
  const Laurent residual = e.minpoly.evaluate(e.root);
  {
    CertificateRow row{"pv.residual", {{"minpoly", e.minpoly.str()}}, "", "<", "", false};
    if (residual.has_known_nonzero()) {
      row.left = "p^" + std::to_string(residual.top());
      row.bound = residual.precision() ? "p^" + std::to_string(-*residual.precision()) : "0";
      row.pass = false;
    } else {
      row.left = "0";
      row.relation = "==";
      row.bound = residual.precision() ? "0 (to prec " + std::to_string(*residual.precision()) + ")" : "0";
      row.pass = true;
    }
    out.certificate.add(std::move(row));
  }

  const auto conj = e.conjugate_slope();
  Laurent pw = e.root;
  for (unsigned n = 1; n <= n_max; ++n) {
    const AbsValue norm = dist_to_integers(pw);
    out.norms.push_back(norm);
    CertificateRow row{"pv.norm_bound", {{"n", n}}, norm.str(), "<=", "", false};
    if (!conj) {
      row.relation = "==";
      row.bound = "0";
      row.pass = norm.is_zero();
    } else {
      const Rational bound = *conj * static_cast<std::int64_t>(n);
      row.bound = "p^" + to_string(bound);
      row.pass = norm.is_zero() || Rational(norm.exponent()) <= bound;
    }
    out.certificate.add(std::move(row));

    // With a single conjugate ||alpha^n|| = |beta|^n exactly, so it must drop every step.
    if (e.minpoly.degree() == 2 && n >= 2) {
      const AbsValue prev = out.norms[n - 2];
      out.certificate.add({"pv.norm_strict_decrease", {{"n", n}}, norm.str(), "<", prev.str(),
                           prev.is_zero() ? norm.is_zero() : norm < prev});
    }
    if (n < n_max) pw = pw * e.root;
  }
  return out;
}

AdaptiveNormDecay pv_norm_decay_adaptive(const MonicIntPoly& f, unsigned n_max, std::int64_t initial_precision,
                                         std::int64_t max_precision) {
  for (std::int64_t prec = std::max<std::int64_t>(initial_precision, 1);; prec *= 2) {
    PVElement e = pv_root(f, prec);
    try {
      NormDecay d = pv_norm_decay(e, n_max);
      return {std::move(e), std::move(d)};
    } catch (const PrecisionError&) {
      if (prec >= max_precision) throw;
    }
  }
}

} // namespace rigidseq
