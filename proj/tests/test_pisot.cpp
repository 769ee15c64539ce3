#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rigidseq/errors.hpp"
#include "rigidseq/pisot.hpp"

using namespace rigidseq;

namespace {

MonicIntPoly poly(std::uint32_t p, std::vector<const char*> c) {
  std::vector<Poly> cs;
  for (auto* s : c) cs.push_back(Poly::parse_body(s, PrimeModulus(p)));
  return MonicIntPoly(cs);
}

// x^2 - t x - 1
MonicIntPoly fib(std::uint32_t p) { return poly(p, {"1", "t"}); }

std::vector<Slope> slopes(std::initializer_list<std::pair<Rational, int>> list) {
  std::vector<Slope> out;
  for (auto [v, m] : list) out.push_back({v, m});
  return out;
}

} // namespace

TEST_SUITE("pisot") {
  TEST_CASE("Newton polygon examples") {
    CHECK(newton_polygon(fib(2)).slopes == slopes({{Rational(1), 1}, {Rational(-1), 1}}));
    CHECK(newton_polygon(poly(2, {"1", "0"})).slopes == slopes({{Rational(0), 2}}));
    CHECK(newton_polygon(poly(3, {"1", "0", "t^2"})).slopes == slopes({{Rational(2), 1}, {Rational(-1), 2}}));
    CHECK(newton_polygon(poly(2, {"t", "0"})).slopes == slopes({{Rational(1, 2), 2}}));
  }

  TEST_CASE("PV predicate") {
    CHECK(is_pv(fib(2)));
    CHECK_FALSE(is_pv(poly(2, {"1", "0"})));
    CHECK_FALSE(is_pv(poly(2, {"t", "0"})));
    CHECK(is_pv(poly(5, {"t"})));
  }

  TEST_CASE("root of the Fibonacci polynomial") {
    const PVElement e = pv_root(fib(2), 32);
    CHECK(integer_part(e.root) == Poly::parse("t mod 2"));
    CHECK(e.root.coeff(-1) == 1);
    CHECK(e.root.coeff(-2) == 0);
    CHECK(e.root.coeff(-3) == 1);
    // substitute back
    CHECK(e.minpoly.evaluate(e.root).is_unresolved());
    CHECK(*e.minpoly.evaluate(e.root).precision() >= 32);
  }

  TEST_CASE("degree one and non-PV inputs") {
    const PVElement e = pv_root(poly(3, {"t"}), 10);
    CHECK(e.root == Laurent::parse("t mod 3"));
    CHECK_THROWS_AS(pv_root(poly(2, {"t", "0"}), 10), std::domain_error);
  }

  TEST_CASE("trace sequence") {
    const auto s = trace_sequence(fib(2), 5);
    CHECK(s[0].is_zero());
    CHECK(s[1] == Poly::parse("t mod 2"));
    CHECK(s[2] == Poly::parse("t^2 mod 2"));
    CHECK(s[3] == Poly::parse("t^3+t mod 2"));
    // s_n = t s_{n-1} + s_{n-2}
    for (unsigned n = 2; n <= 5; ++n) CHECK(s[n] == Poly::monomial(PrimeModulus(2), 1) * s[n - 1] + s[n - 2]);
  }

  TEST_CASE("floor of the first power is the polynomial part of the root") {
    const PVElement e = pv_root(fib(3), 20);
    CHECK(pv_floor_powers(e, 1)[0] == integer_part(e.root));
  }

  TEST_CASE("slope sum equals deg c_0") {
    std::mt19937_64 rng(2);
    for (std::uint32_t pv : {2u, 3u, 5u})
      for (int i = 0; i < 30; ++i) {
        const MonicIntPoly f = random_pv_poly(PrimeModulus(pv), 1 + i % 4, 1 + i % 3, rng);
        Rational total(0);
        for (const auto& s : newton_polygon(f).slopes) total += s.value * s.multiplicity;
        CHECK(total == Rational(f.c().front().degree()));
        CHECK(is_pv(f));
      }
  }

  TEST_CASE("floors agree along both paths on random PV polynomials") {
    std::mt19937_64 rng(31);
    for (std::uint32_t pv : {2u, 3u, 5u})
      for (int i = 0; i < 10; ++i) {
        const int degree = 2 + i % 3, slope = 1 + i % 2;
        const MonicIntPoly f = random_pv_poly(PrimeModulus(pv), degree, slope, rng);
        const PVElement e = pv_root(f, 29 * slope + 30 * 2 + 16);
        const auto floors = pv_floor_powers(e, 30);
        const auto traces = trace_sequence(f, 30);
        Laurent pw = e.root;
        for (unsigned n = 1; n <= 30; ++n) {
          CHECK(floors[n - 1] == traces[n]);
          CHECK(integer_part(pw) == traces[n]);
          pw = pw * e.root;
        }
        const NormDecay nd = pv_norm_decay_adaptive(f, 30, 29 * slope + 30 * 2 + 16).decay;
        CHECK(nd.certificate.passed());
        const Rational s2 = *e.conjugate_slope();
        for (unsigned n = 1; n <= 30; ++n)
          if (!nd.norms[n - 1].is_zero()) CHECK(Rational(nd.norms[n - 1].exponent()) <= s2 * static_cast<std::int64_t>(n));
      }
  }

  TEST_CASE("norm decay of the quadratic example") {
    for (std::uint32_t pv : {2u, 3u, 5u}) {
      const PVElement e = pv_root(fib(pv), 60);
      const NormDecay nd = pv_norm_decay(e, 20);
      CHECK(nd.certificate.passed());
      for (unsigned n = 1; n <= 20; ++n) CHECK(nd.norms[n - 1].exponent() == -static_cast<std::int64_t>(n));
    }
  }

  TEST_CASE("integral PV element has zero norms") {
    const NormDecay nd = pv_norm_decay(pv_root(poly(2, {"t"}), 10), 8);
    for (const auto& v : nd.norms) CHECK(v.is_zero());
    CHECK(nd.certificate.passed());
  }

  TEST_CASE("corrupted root is caught") {
    PVElement e = pv_root(fib(2), 40);
    e.root = e.root + Laurent::monomial(PrimeModulus(2), -6, 1, 40);
    CHECK_FALSE(pv_norm_decay(e, 10).certificate.passed());
  }

  TEST_CASE("golden ratio against Lucas numbers") {
    const RealPVTable t = real_pv_table(golden_ratio_spec(), 40);
    const auto L = oracle::lucas(40);
    for (const auto& row : t.rows) {
      CHECK(row.trace == L[row.n]);
      if (row.n >= 2) {
        CHECK(row.nearest == L[row.n]);
        CHECK(row.nearest == oracle::golden_nearest(row.n));
      }
    }
    CHECK(t.rows[1].nearest == 3);
    CHECK(t.rows[2].nearest == 4);
    CHECK(t.rows[3].nearest == 7);
    for (const auto& row : t.rows)
      if (row.n <= 30) CHECK(row.norm_nearest_times_alpha == doctest::Approx(oracle::golden_norm_times(row.nearest)).epsilon(1e-6));
  }

  TEST_CASE("plastic number norms settle below one half and decrease") {
    const RealPVTable t = real_pv_table(plastic_number_spec(), 80);
    REQUIRE(t.tail_start <= 80);
    for (const auto& row : t.rows)
      if (row.n >= t.tail_start) {
        CHECK(row.norm_power < 0.5);
        CHECK(row.norm_power <= row.decay_bound + 1e-12);
      }
    CHECK(t.alpha == doctest::Approx(1.324717957244746));
  }

  TEST_CASE("integer PV number") {
    const RealPVTable t = real_pv_table({"two", {2}, {}}, 20);
    for (const auto& row : t.rows) {
      CHECK(row.norm_power == 0.0);
      CHECK(row.nearest == (std::int64_t{1} << row.n));
    }
    CHECK_THROWS_AS(real_pv_table({"not pv", {0, 1}, {}}, 5), std::domain_error);
  }
}
