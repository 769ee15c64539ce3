#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rigidseq/cfrac.hpp"
#include "rigidseq/errors.hpp"

using namespace rigidseq;

namespace {

Poly P(const char* text) { return Poly::parse(text); }

Poly random_poly(PrimeModulus p, int deg, std::mt19937_64& rng, bool monic_nonzero) {
  std::uniform_int_distribution<std::uint32_t> coeff(0, p.value() - 1);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(deg + 1));
  for (auto& x : c) x = coeff(rng);
  if (monic_nonzero) c.back() = 1 + coeff(rng) % (p.value() - 1);
  return Poly(p, c);
}

RationalFunction random_rational(PrimeModulus p, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 7);
  return {random_poly(p, deg(rng), rng, false), random_poly(p, deg(rng), rng, true)};
}

} // namespace

TEST_SUITE("cfrac") {
  TEST_CASE("Gauss map examples") {
    const PrimeModulus p2(2);
    CHECK(cf_step(Laurent::exact_zero(p2)).is_exact_zero());
    CHECK(cf_step(Laurent::parse("t^-1 mod 2")).is_exact_zero());
    // x = (t+1)/t^2, so 1/x = t^2/(t+1) = (t+1) + 1/(t+1)
    const Laurent x = Laurent::parse("t^-1+t^-2 mod 2");
    const oracle::Fp ref{2};
    auto [q, r] = ref.divmod({0, 0, 1}, {1, 1});
    CHECK(q == std::vector<std::uint32_t>{1, 1});
    CHECK(r == std::vector<std::uint32_t>{1});
    const Laurent expected = inverse(Laurent::parse("t+1 mod 2"), 30);
    CHECK(cf_step(x, 30).agrees_with(expected));
    CHECK_THROWS(cf_step(Laurent::parse("t mod 2")));
  }

  TEST_CASE("rational expansion terminates") {
    const CFExpansion cf = cf_expand(RationalFunction{P("t^2+1 mod 2"), P("t mod 2")}, 10);
    REQUIRE(cf.quotients.size() == 2);
    CHECK(cf.quotients[0] == P("t mod 2"));
    CHECK(cf.quotients[1] == P("t mod 2"));
    CHECK(cf.terminated);
    CHECK_THROWS_AS(cf_expand(RationalFunction{P("t mod 2"), P("0 mod 2")}, 3), DivisionByZero);
  }

  TEST_CASE("polynomial input is its own expansion") {
    const CFExpansion cf = cf_expand(Laurent::from_poly(P("t^3+2 mod 5")), 6);
    REQUIRE(cf.quotients.size() == 1);
    CHECK(cf.quotients[0] == P("t^3+2 mod 5"));
    CHECK(cf.terminated);
  }

  TEST_CASE("the Fibonacci element has every quotient equal to t") {
    for (std::uint32_t pv : {2u, 3u, 5u, 7u}) {
      const PrimeModulus p(pv);
      const CFExpansion cf = cf_expand(fibonacci_alpha(p, 40), 12, 40);
      REQUIRE(cf.quotients.size() == 13);
      for (const auto& a : cf.quotients) CHECK(a == Poly::monomial(p, 1));
    }
  }

  TEST_CASE("Fibonacci convergent denominators against the integer recurrence") {
    const auto F = oracle::fibonacci_polys(12);
    CHECK(F[8] == oracle::ZPoly{1, 0, 10, 0, 15, 0, 7, 0, 1});
    for (std::uint32_t pv : {2u, 3u, 5u, 7u}) {
      const PrimeModulus p(pv);
      const Convergents conv = convergents(cf_expand(fibonacci_alpha(p, 60), 12, 60));
      for (unsigned n = 0; n <= 12; ++n) CHECK(conv.q[n].coeffs() == oracle::reduce(F[n], pv));
    }
    const Convergents c2 = convergents(cf_expand(fibonacci_alpha(PrimeModulus(2), 40), 8, 40));
    CHECK(c2.q[3] == P("t^3 mod 2"));
    CHECK(c2.q[8] == P("t^8+t^6+t^4+1 mod 2"));
    const Convergents c5 = convergents(cf_expand(fibonacci_alpha(PrimeModulus(5), 40), 8, 40));
    CHECK(c5.q[8] == P("t^8+2*t^6+1 mod 5"));
  }

  TEST_CASE("single quotient convergents") {
    CFExpansion cf{Laurent::from_poly(P("t+1 mod 3")), std::nullopt, {P("t+1 mod 3")}, true};
    const Convergents conv = convergents(cf);
    CHECK(conv.p[0] == P("t+1 mod 3"));
    CHECK(conv.q[0] == P("1 mod 3"));
  }

  TEST_CASE("approximation certificate for the Fibonacci element") {
    const Laurent alpha = fibonacci_alpha(PrimeModulus(2), 80);
    const Convergents conv = convergents(cf_expand(alpha, 10, 80));
    const Certificate cert = verify_approx(alpha, conv);
    CHECK(cert.passed());
    CHECK(cert.rows.size() == 22);
    for (std::size_t n = 0; n <= 10; ++n) {
      const Laurent err = Laurent::from_poly(conv.q[n]) * alpha - Laurent::from_poly(conv.p[n]);
      CHECK(err.abs().exponent() < -conv.q[n].degree());
    }
    CHECK(verify_determinants(conv).passed());
  }

  TEST_CASE("terminating rational has zero error at the last convergent") {
    const RationalFunction r{P("t^3+t+1 mod 3"), P("t^2+2 mod 3")};
    const CFExpansion cf = cf_expand(r, 20);
    REQUIRE(cf.terminated);
    const Certificate cert = verify_approx(r, convergents(cf));
    CHECK(cert.passed());
    CHECK(cert.rows.back().id == "cf.norm");
    CHECK(cert.rows.back().left == "0");
  }

  TEST_CASE("corrupted convergent is caught") {
    const Laurent alpha = fibonacci_alpha(PrimeModulus(3), 60);
    Convergents conv = convergents(cf_expand(alpha, 8, 60));
    conv.q[5] = conv.q[5] + Poly::constant(PrimeModulus(3), 1);
    const Certificate cert = verify_approx(alpha, conv);
    CHECK_FALSE(cert.passed());
    CHECK_FALSE(verify_determinants(conv).passed());
  }

  TEST_CASE("determinant identity on random rationals") {
    std::mt19937_64 rng(21);
    for (std::uint32_t pv : {2u, 3u, 5u}) {
      const PrimeModulus p(pv);
      for (int i = 0; i < 100; ++i) {
        const RationalFunction r = random_rational(p, rng);
        CHECK(verify_determinants(convergents(cf_expand(r, 30))).passed());
      }
    }
  }

  TEST_CASE("Euclidean and series paths agree on random rationals") {
    std::mt19937_64 rng(17);
    for (std::uint32_t pv : {2u, 3u, 5u}) {
      const PrimeModulus p(pv);
      const oracle::Fp ref{pv};
      for (int i = 0; i < 500; ++i) {
        const RationalFunction r = random_rational(p, rng);
        const CFExpansion exact = cf_expand(r, 40);
        // independent Euclid
        const auto quotients = ref.euclid(r.num.coeffs(), r.den.coeffs());
        REQUIRE(quotients.size() == exact.quotients.size());
        for (std::size_t k = 0; k < quotients.size(); ++k) CHECK(exact.quotients[k].coeffs() == quotients[k]);
        // series path
        const std::int64_t prec = 4 * r.den.degree() + 8;
        const Laurent x = Laurent::from_poly(r.num) * inverse(Laurent::from_poly(r.den), prec);
        const CFExpansion series = cf_expand_certified(x, 40, prec);
        REQUIRE(series.quotients.size() == exact.quotients.size());
        for (std::size_t k = 0; k < series.quotients.size(); ++k) CHECK(series.quotients[k] == exact.quotients[k]);
      }
    }
  }

  TEST_CASE("norm exponents strictly decrease for non-terminating input") {
    for (std::uint32_t pv : {2u, 3u}) {
      const Laurent alpha = fibonacci_alpha(PrimeModulus(pv), 80);
      const Convergents conv = convergents(cf_expand(alpha, 12, 80));
      std::int64_t prev = 1;
      for (std::size_t n = 0; n < conv.q.size(); ++n) {
        const std::int64_t e = dist_to_integers(Laurent::from_poly(conv.q[n]) * alpha).exponent();
        CHECK(e < prev);
        prev = e;
      }
    }
  }

  TEST_CASE("strict expansion reports missing precision") {
    CHECK_THROWS_AS(cf_expand(fibonacci_alpha(PrimeModulus(2), 10), 30, 10), PrecisionError);
    const CFExpansion partial = cf_expand_certified(fibonacci_alpha(PrimeModulus(2), 10), 30, 10);
    CHECK(partial.quotients.size() < 31);
    CHECK(partial.quotients.size() >= 3);
  }
}
