#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rigidseq/errors.hpp"
#include "rigidseq/recurrence.hpp"

using namespace rigidseq;

namespace {

std::vector<std::uint64_t> encode_all(const FiniteAbelian& G, const std::vector<std::vector<std::uint32_t>>& xs) {
  std::vector<std::uint64_t> out;
  for (const auto& x : xs) out.push_back(G.encode(x));
  return out;
}

/// max over |A| = size, x of min_{a,b} rho(a - b, x), by brute force.
double worst_distance_oracle(const std::vector<std::uint32_t>& k, unsigned d, std::size_t size) {
  std::vector<std::uint32_t> moduli;
  for (unsigned j = 0; j < d; ++j) moduli.insert(moduli.end(), k.begin(), k.end());
  const auto elems = oracle::all_elements(moduli);
  const std::size_t n = elems.size();
  auto sub = [&](const auto& a, const auto& b) {
    std::vector<std::uint32_t> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = (a[i] + moduli[i] - b[i]) % moduli[i];
    return r;
  };
  double worst = 0.0;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<long>(size), true);
  do {
    std::vector<std::size_t> A;
    for (std::size_t i = 0; i < n; ++i)
      if (pick[i]) A.push_back(i);
    for (const auto& x : elems) {
      double best = 1e9;
      for (auto a : A)
        for (auto b : A) best = std::min(best, oracle::rho(k, d, sub(elems[a], elems[b]), x));
      worst = std::max(worst, best);
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return worst;
}

} // namespace

TEST_SUITE("recurrence") {
  TEST_CASE("finite abelian encoding") {
    const FiniteAbelian G({2, 3, 4});
    CHECK(G.order() == 24);
    for (std::uint64_t x = 0; x < 24; ++x) CHECK(G.encode(G.decode(x)) == x);
    CHECK(G.encode({1, 0, 0}) == 12);
    for (std::uint64_t a = 0; a < 24; ++a)
      for (std::uint64_t b = 0; b < 24; ++b) CHECK(G.add(G.sub(a, b), b) == a);
  }

  TEST_CASE("weight-one differences admit the even-weight counterexample") {
    const FiniteAbelian G({2, 2, 2});
    FiniteModel m{G, encode_all(G, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}), Rational(1, 2)};
    const RecurrenceVerdict v = delta_recurrence_bruteforce(m);
    CHECK_FALSE(v.pass);
    REQUIRE(v.counterexample);
    CHECK(*v.counterexample == encode_all(G, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}));
    CHECK(v.subset_size == 4);
  }

  TEST_CASE("all nonzero differences always recur") {
    for (const std::vector<std::uint32_t>& moduli : {std::vector<std::uint32_t>{2, 2}, {4}, {2, 2, 2}, {3, 3}, {2, 5}}) {
      const FiniteAbelian G(moduli);
      std::vector<std::uint64_t> R;
      for (std::uint64_t x = 1; x < G.order(); ++x) R.push_back(x);
      CHECK(delta_recurrence_bruteforce({G, R, Rational(1, 2)}).pass);
    }
  }

  TEST_CASE("empty R fails") {
    const RecurrenceVerdict v = delta_recurrence_bruteforce({FiniteAbelian({2, 2}), {}, Rational(1, 2)});
    CHECK_FALSE(v.pass);
    CHECK(v.counterexample);
  }

  TEST_CASE("R containing zero passes") {
    CHECK(delta_recurrence_bruteforce({FiniteAbelian({5}), {0}, Rational(1, 5)}).pass);
  }

  TEST_CASE("budget") {
    const FiniteAbelian G({2, 2, 2, 2, 2, 2});
    CHECK_THROWS_AS(delta_recurrence_bruteforce({G, {1}, Rational(1, 2)}, 1000), BudgetExceeded);
  }

  TEST_CASE("brute force agrees with subset enumeration and is monotone in R") {
    std::mt19937_64 rng(8);
    for (const std::vector<std::uint32_t>& moduli : {std::vector<std::uint32_t>{2, 2, 2}, {2, 4}, {3, 3}}) {
      const FiniteAbelian G(moduli);
      const auto elems = oracle::all_elements(moduli);
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::uint64_t> R;
        std::vector<std::vector<std::uint32_t>> Rv;
        for (std::uint64_t x = 1; x < G.order(); ++x)
          if (rng() % 3 == 0) {
            R.push_back(x);
            Rv.push_back(elems[x]);
          }
        for (Rational delta : {Rational(1, 3), Rational(1, 2)}) {
          const FiniteModel m{G, R, delta};
          const RecurrenceVerdict v = delta_recurrence_bruteforce(m);
          const std::size_t size = v.subset_size;
          CHECK(v.pass == !oracle::has_recurrence_counterexample(moduli, Rv, size));
          if (v.pass) {
            // adding elements keeps it passing
            auto bigger = R;
            for (std::uint64_t x = 1; x < G.order(); ++x)
              if (std::find(R.begin(), R.end(), x) == R.end()) {
                bigger.push_back(x);
                break;
              }
            std::sort(bigger.begin(), bigger.end());
            CHECK(delta_recurrence_bruteforce({G, bigger, delta}).pass);
          }
        }
      }
    }
  }

  TEST_CASE("R_epsilon sets") {
    const std::vector<std::uint32_t> two{2};
    std::vector<GroupElt> probes;
    for (std::uint64_t c = 0; c <= 4; ++c) probes.push_back(c == 0 ? GroupElt(two) : GroupElt::basis(two, 0, c));
    const AtomicMeasure delta1 = AtomicMeasure::dirac(Character(two, {4}));
    CHECK(r_epsilon_set(delta1, 0.1, probes).size() == probes.size());
    Character chi(two, {4});
    chi.set(0, 2, 1);
    chi.set(0, 4, 1);
    const AtomicMeasure sigma = AtomicMeasure::from_atoms({{Character(two, {4}), Rational(1, 2)}, {chi, Rational(1, 2)}});
    CHECK(r_epsilon_set(sigma, 0.0, probes).empty());
    CHECK(r_epsilon_set(sigma, 2.5, probes).size() == probes.size());
    std::size_t prev = 0;
    for (double eps : {0.01, 0.5, 1.0, 1.01, 2.0, 3.0}) {
      const auto R = r_epsilon_set(sigma, eps, probes);
      CHECK(R.size() >= prev);
      CHECK(std::find(R.begin(), R.end(), GroupElt(two)) != R.end());
      prev = R.size();
    }
  }

  TEST_CASE("cube lemma exhaustive examples") {
    for (Rational eps : {Rational(1, 100), Rational(1, 2), Rational(2)}) {
      const CubeVerdict v = cube_lemma_check({{2}, 2, Rational(3, 4), eps}, CubeMode::Exhaustive);
      CHECK(v.status == CubeVerdict::Status::Pass);
      CHECK(v.sets_checked == 4);
      CHECK(v.worst_distance == 0.0);
      CHECK_FALSE(v.sampled);
    }
    const CubeVerdict full = cube_lemma_check({{2, 3}, 1, Rational(1), Rational(1, 10)}, CubeMode::Exhaustive);
    CHECK(full.status == CubeVerdict::Status::Pass);
    CHECK(full.worst_distance == 0.0);
  }

  TEST_CASE("cube search worst distance matches brute force") {
    struct Case {
      std::vector<std::uint32_t> k;
      unsigned d;
      Rational delta;
    };
    for (const Case& c : {Case{{3}, 1, Rational(1, 3)}, Case{{2, 3}, 1, Rational(1, 2)}, Case{{3}, 2, Rational(1, 3)},
                          Case{{2}, 3, Rational(1, 4)}}) {
      const CubeInstance inst{c.k, c.d, c.delta, Rational(1, 2)};
      const CubeVerdict v = cube_lemma_check(inst, CubeMode::Exhaustive);
      const FiniteAbelian G = cube_group(inst);
      const auto size = static_cast<std::size_t>(
          std::ceil(to_double(c.delta) * static_cast<double>(G.order()) - 1e-12));
      CHECK(v.worst_distance == doctest::Approx(worst_distance_oracle(c.k, c.d, size)).epsilon(1e-12));
      CHECK(v.status == (v.worst_distance < 0.5 - kCubeGuard ? CubeVerdict::Status::Pass
                                                             : v.worst_distance > 0.5 + kCubeGuard
                                                                   ? CubeVerdict::Status::Violation
                                                                   : CubeVerdict::Status::Tie));
      const double direct = cube_metric(inst, G.sub(v.witness_a, v.witness_b), v.worst_target);
      CHECK(direct == doctest::Approx(v.worst_distance));
    }
  }

  TEST_CASE("sampled search does not depend on the thread count") {
    const CubeInstance inst{{2, 3}, 3, Rational(1, 2), Rational(4, 5)};
    const CubeVerdict a = cube_lemma_check(inst, CubeMode::Sampled, 64, 42, 1);
    const CubeVerdict b = cube_lemma_check(inst, CubeMode::Sampled, 64, 42, 3);
    CHECK(a.sampled);
    CHECK(a.worst_distance == b.worst_distance);
    CHECK(a.worst_set == b.worst_set);
    CHECK(a.worst_target == b.worst_target);
    CHECK_THROWS_AS(cube_lemma_check(inst, CubeMode::Exhaustive), BudgetExceeded);
  }

  TEST_CASE("concentration bounds") {
    CHECK(mcdiarmid_bound(0.5, 0.5) == 45);
    CHECK(mcdiarmid_bound(1.0, 0.5) == 0);
    for (double delta : {0.1, 0.3, 0.75})
      for (double eps : {0.2, 0.5, 1.0}) {
        const double raw = 16.0 / (4 * eps * eps) * std::log(1 / delta);
        CHECK(mcdiarmid_bound(delta, 2 * eps) == static_cast<std::uint64_t>(std::ceil(raw - 1e-9)));
      }
    CHECK(blowup_lower_bound(0.5, 100, 0.5).raw == doctest::Approx(1 - 2 * std::exp(-3.125)));
    CHECK(blowup_lower_bound(0.5, 100, 0.5).raw == doctest::Approx(0.9121).epsilon(1e-4));
    CHECK(blowup_lower_bound(0.5, 4, 1e6).raw == doctest::Approx(1.0));
    CHECK(blowup_lower_bound(0.01, 1, 0.1).clamped == 0.0);
  }

  TEST_CASE("neighbourhood count against brute force and the blow-up bound") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
      const std::vector<std::uint32_t> k = trial % 2 ? std::vector<std::uint32_t>{2, 3} : std::vector<std::uint32_t>{3};
      const unsigned d = 1 + static_cast<unsigned>(trial % 3);
      const CubeInstance inst{k, d, Rational(1, 2), Rational(1, 2)};
      const FiniteAbelian G = cube_group(inst);
      std::vector<std::uint64_t> A;
      for (std::uint64_t x = 0; x < G.order(); ++x)
        if (rng() % 4 == 0) A.push_back(x);
      if (A.empty()) A.push_back(0);
      const double t = 0.05 + static_cast<double>(rng() % 100) / 60.0;
      const NeighbourhoodCount nc = neighbourhood_count(inst, A, t);
      std::uint64_t inside = 0;
      for (std::uint64_t x = 0; x < G.order(); ++x) {
        double best = 1e9;
        for (auto a : A) best = std::min(best, oracle::rho(k, d, G.decode(x), G.decode(a)));
        if (best < t - kCubeGuard) ++inside;
      }
      CHECK(nc.inside == inside);
      CHECK(nc.total == G.order());
      const double alpha = static_cast<double>(A.size()) / static_cast<double>(G.order());
      CHECK(nc.ratio() + static_cast<double>(nc.ties) / static_cast<double>(nc.total) >=
            blowup_lower_bound(alpha, d, t).clamped - 1e-12);
    }
  }
}
