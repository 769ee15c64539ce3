#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rigidseq/certificate.hpp"
#include "rigidseq/ffield.hpp"
#include "rigidseq/laurent.hpp"
#include "rigidseq/rational.hpp"

namespace rigidseq {

/// f(x) = x^d - c_{d-1} x^{d-1} - ... - c_1 x - c_0 with c_i in F_p[t].
///
/// The sign convention makes the power-sum recurrence read
/// s_n = c_{d-1} s_{n-1} + ... + c_0 s_{n-d} without sign juggling.
class MonicIntPoly {
public:
  /// `c[i]` is c_i; d = c.size() >= 1.
  explicit MonicIntPoly(std::vector<Poly> c);

  int degree() const { return static_cast<int>(c_.size()); }
  const std::vector<Poly>& c() const { return c_; }
  const PrimeModulus& modulus() const { return c_.front().modulus(); }

  /// f(x) evaluated by Horner's rule.
  Laurent evaluate(const Laurent& x) const;
  Laurent evaluate_derivative(const Laurent& x) const;

  /// "x^2-(t)*x-(1) mod 2"
  std::string str() const;

private:
  std::vector<Poly> c_;
};

/// A Newton-polygon slope in the root convention: every root in this group
/// has absolute value p^value.
struct Slope {
  Rational value;
  int multiplicity;

  bool operator==(const Slope&) const = default;
};

struct NewtonPolygon {
  /// Ordered from the largest root absolute value to the smallest.
  std::vector<Slope> slopes;
  /// Multiplicity of the root x = 0 (leading zeros among c_0, c_1, ...).
  int zero_roots = 0;
};

/// Upper convex hull of (i, deg c_i) together with (d, 0).
NewtonPolygon newton_polygon(const MonicIntPoly& f);

/// One simple root of absolute value > 1 and every other root of absolute value < 1.
bool is_pv(const MonicIntPoly& f);

struct PVElement {
  MonicIntPoly minpoly;
  Laurent root;
  std::vector<Slope> slopes;

  /// Absolute-value exponent of the dominant root.
  std::int64_t dominant_slope() const;
  /// Largest conjugate slope (negative); nullopt for degree 1.
  std::optional<Rational> conjugate_slope() const;
};

/// The root with |alpha| > 1 as a Laurent series known to at least
/// `precision`, refined by Newton's iteration from the leading monomial of
/// c_{d-1} until |f(alpha)| < p^{-precision}.
PVElement pv_root(const MonicIntPoly& f, std::int64_t precision);

/// Power sums s_n = Tr(alpha^n) for 0 <= n <= n_max, via Newton's identities
/// and the linear recurrence.
std::vector<Poly> trace_sequence(const MonicIntPoly& f, unsigned n_max);

/// floor(alpha^n) for 1 <= n <= n_max (index 0 holds n = 1).  The trace
/// recurrence value is returned after it has been matched against
/// integer_part(alpha^n); a mismatch throws CertificateFailure.
std::vector<Poly> pv_floor_powers(const PVElement& e, unsigned n_max);

/// Exponents of ||alpha^n|| for 1 <= n <= n_max computed from the stored root,
/// with rows asserting the geometric bound n * (largest conjugate slope) and a
/// residual row for f(root).
struct NormDecay {
  std::vector<AbsValue> norms;
  Certificate certificate;
};
NormDecay pv_norm_decay(const PVElement& e, unsigned n_max);

/// pv_norm_decay with the root recomputed at doubled precision until every
/// norm resolves.  Needed because conjugates of equal slope can cancel: in
/// characteristic p, beta_1^{p^k} + beta_2^{p^k} = (beta_1 + beta_2)^{p^k}, so
/// ||alpha^n|| may sit far below the slope bound.  Throws PrecisionError past
/// `max_precision`.
struct AdaptiveNormDecay {
  PVElement element;
  NormDecay decay;
};
AdaptiveNormDecay pv_norm_decay_adaptive(const MonicIntPoly& f, unsigned n_max, std::int64_t initial_precision,
                                         std::int64_t max_precision = 1 << 16);

/// Random PV polynomial of the given degree and dominant slope: c_{d-1} of
/// degree `slope`, every other c_i of smaller degree, c_0 != 0.
template <class Rng>
MonicIntPoly random_pv_poly(PrimeModulus p, int degree, int slope, Rng& rng);

// ----------------------------------------------------------------- real PV

/// x^d = c_{d-1} x^{d-1} + ... + c_0 over the integers.
struct RealPVSpec {
  std::string name;
  std::vector<std::int64_t> c;
  /// Initial power sums s_0 .. s_{d-1}; filled from Newton's identities if empty.
  std::vector<std::int64_t> initial_traces;
};

RealPVSpec golden_ratio_spec();
RealPVSpec plastic_number_spec();

struct RealPVRow {
  unsigned n;
  /// Exact power sum Tr(alpha^n).
  std::int64_t trace;
  /// Nearest integer to alpha^n.
  std::int64_t nearest;
  /// ||alpha^n|| and ||nearest * alpha||, computed from the conjugates.
  double norm_power;
  double norm_nearest_times_alpha;
  /// (d-1) |beta|^n bound on ||alpha^n|| once the conjugate sum is below 1/2.
  double decay_bound;
};

struct RealPVTable {
  double alpha;
  double conjugate_modulus;  // largest |beta|
  std::vector<std::complex<double>> conjugates;
  std::vector<RealPVRow> rows;
  /// First n from which the decay bound holds and the norms decrease.
  unsigned tail_start;
};

/// Throws std::domain_error if the dominant eigenvalue is not > 1 with all
/// others inside the unit disc, and PrecisionError on a nearest-integer tie.
RealPVTable real_pv_table(const RealPVSpec& spec, unsigned n_max);

} // namespace rigidseq

#include "rigidseq/pisot_random.tpp"
