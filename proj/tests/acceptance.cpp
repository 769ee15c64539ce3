// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "rigidseq/cfrac.hpp"
#include "rigidseq/dualgroup.hpp"
#include "rigidseq/folner.hpp"
#include "rigidseq/measures.hpp"
#include "rigidseq/pisot.hpp"
#include "rigidseq/recurrence.hpp"

using namespace rigidseq;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream s(line);
  for (std::string f; std::getline(s, f, sep);) out.push_back(f);
  return out;
}

Outcome fibonacci_table() {
  Outcome o;
  const auto F = oracle::fibonacci_polys(8);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    std::ostringstream out, err;
    const int code = cli::run({"cfrac", "--alpha", "fibonacci", "--p", std::to_string(p), "--n", "8"}, out, err);
    o.require(code == 0, "cfrac exited with " + std::to_string(code));
    std::istringstream rows(out.str());
    std::string line;
    std::getline(rows, line);
    std::getline(rows, line);
    for (unsigned n = 0; n <= 8; ++n) {
      std::getline(rows, line);
      const auto fields = split(line, ',');
      const std::string expected = Poly(PrimeModulus(p), oracle::reduce(F[n], p)).body();
      o.require(fields.size() > 2 && fields[2] == expected,
                "p=" + std::to_string(p) + " F_" + std::to_string(n) + ": got " + (fields.size() > 2 ? fields[2] : "?") +
                    ", expected " + expected);
    }
  }
  return o;
}

Outcome convergent_inequalities() {
  Outcome o;
  const Laurent alpha = fibonacci_alpha(PrimeModulus(2), 200);
  const Convergents fc = convergents(cf_expand(alpha, 40, 200));
  o.require(verify_approx(alpha, fc).passed(), "Fibonacci element over F_2");
  std::mt19937_64 rng(2024);
  std::size_t rows = 0;
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    const PrimeModulus p(pv);
    for (int i = 0; i < 20; ++i) {
      std::vector<std::uint32_t> num(1 + rng() % 12), den(1 + rng() % 12);
      for (auto& c : num) c = static_cast<std::uint32_t>(rng() % pv);
      for (auto& c : den) c = static_cast<std::uint32_t>(rng() % pv);
      den.back() = 1 + static_cast<std::uint32_t>(rng() % (pv - 1));
      const RationalFunction r{Poly(p, num), Poly(p, den)};
      const Certificate cert = verify_approx(r, convergents(cf_expand(r, 64)));
      rows += cert.rows.size();
      o.require(cert.passed(), "rational " + r.num.str() + " / " + r.den.body());
    }
  }
  o.detail = o.ok ? std::to_string(rows) + " rational rows" : o.detail;
  return o;
}

Outcome pv_dual_path() {
  Outcome o;
  std::mt19937_64 rng(99);
  auto check = [&](const MonicIntPoly& f, bool quadratic) {
    const NewtonPolygon np = newton_polygon(f);
    const auto s = static_cast<std::int64_t>(std::ceil(to_double(np.slopes.front().value)));
    std::int64_t low = 0;
    for (const auto& sl : np.slopes) low = std::max<std::int64_t>(low, static_cast<std::int64_t>(std::ceil(-to_double(sl.value))));
    const PVElement e = pv_root(f, 29 * s + 30 * low + 16);
    const auto traces = trace_sequence(f, 30);
    const auto floors = pv_floor_powers(e, 30);
    Laurent pw = e.root;
    for (unsigned n = 1; n <= 30; ++n) {
      o.require(floors[n - 1] == traces[n] && integer_part(pw) == traces[n], "floor mismatch for " + f.str());
      pw = pw * e.root;
    }
    if (quadratic) {
      const NormDecay nd = pv_norm_decay(e, 30);
      for (unsigned n = 1; n <= 30; ++n)
        o.require(!nd.norms[n - 1].is_zero() && nd.norms[n - 1].exponent() == -static_cast<std::int64_t>(n),
                  "norm exponent at n=" + std::to_string(n));
    }
  };
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    const PrimeModulus p(pv);
    check(MonicIntPoly({Poly::constant(p, 1), Poly::monomial(p, 1)}), true);
    for (int i = 0; i < 10; ++i) check(random_pv_poly(p, 2 + i % 3, 1 + i % 3, rng), false);
  }
  return o;
}

Outcome real_pv() {
  Outcome o;
  const RealPVTable t = real_pv_table(golden_ratio_spec(), 40);
  const auto L = oracle::lucas(41);
  double C = 0.0;
  for (const auto& row : t.rows)
    if (row.n >= 2 && row.n <= 10) C = std::max(C, row.norm_nearest_times_alpha / std::pow(0.62, row.n));
  for (const auto& row : t.rows) {
    if (row.n < 2) continue;
    o.require(row.nearest == L[row.n] && row.nearest == oracle::golden_nearest(row.n),
              "nearest integer at n=" + std::to_string(row.n));
    o.require(std::abs(row.norm_nearest_times_alpha - oracle::golden_norm_times(row.nearest)) < 1e-9,
              "norm value at n=" + std::to_string(row.n));
    o.require(row.norm_nearest_times_alpha <= C * std::pow(0.62, row.n) + 1e-9, "decay at n=" + std::to_string(row.n));
  }
  if (o.ok) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "C fitted on n<=10: %.6f", C);
    o.detail = buf;
  }
  return o;
}

Outcome annihilation() {
  Outcome o;
  std::mt19937_64 rng(5);
  auto direct = [](const Laurent& x, const Poly& a) {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < a.coeffs().size(); ++k) s += std::uint64_t{a.coeffs()[k]} * x.coeff(-static_cast<std::int64_t>(k) - 1);
    return s % a.modulus().value();
  };
  const IndexSet I = IndexSet::evens();
  for (std::uint32_t pv : {2u, 3u, 5u}) {
    const PrimeModulus p(pv);
    const GroupSequence idx = indexset_sequence(I, p);
    for (int i = 0; i < 50; ++i) {
      const Laurent xg = c0_random_geometric(p, 21, rng);
      const Laurent xi = c0_random_indexset(I, p, 64, rng);
      for (std::uint64_t n = 1; n <= 20; ++n) {
        const Poly ag = example_sequence_geometric(n, p);
        o.require(poly_pair(xg, ag).is_one() && direct(xg, ag) == 0, "geometric family");
        const Poly ai(p, idx.term(n).block(0));
        o.require(poly_pair(xi, ai).is_one() && direct(xi, ai) == 0, "index-set family");
      }
    }
  }
  return o;
}

Outcome construction() {
  Outcome o;
  const std::uint64_t horizon = 300;
  auto fam = finite_support_family({2}, {2 * horizon + 2});
  ConstructionOptions opt;
  opt.depth = 4;
  opt.horizon = horizon;
  const GroupSequence seq = monomial_sequence(PrimeModulus(2));
  const ConstructionResult res = construct_wm_measure(*fam, seq, opt);
  o.require(res.certificate.passed(), "certificate row failed");
  for (const auto& row : res.certificate.rows) {
    bool exact = true;
    try {
      (void)parse_rational(row.left);
    } catch (const std::exception&) {
      exact = false;
    }
    o.require(exact, "row " + row.id + " not exact: " + row.left);
  }
  const Certificate masses = cell_mass_check(res.state, res.sigma);
  o.require(masses.passed() && masses.rows.size() == 31, "cell masses");
  const Certificate again = reverify(res.state, seq);
  o.require(again.rows == res.certificate.rows, "re-verification differs");
  if (o.ok) o.detail = std::to_string(res.certificate.rows.size()) + " rows, " + std::to_string(masses.rows.size()) + " cells";
  return o;
}

Outcome convolution() {
  Outcome o;
  std::mt19937_64 rng(71);
  const std::vector<std::uint32_t> primes{2, 3, 5};
  const std::uint64_t window = 5;
  auto random_char = [&] {
    Character chi(primes, {window, window, window});
    for (std::size_t j = 0; j < primes.size(); ++j)
      for (std::uint64_t n = 1; n <= window; ++n) chi.set(j, n, static_cast<std::int64_t>(rng() % primes[j]));
    return chi;
  };
  auto random_measure = [&] {
    std::vector<Atom> atoms;
    const int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) atoms.push_back({random_char(), Rational(1, k)});
    return AtomicMeasure::from_atoms(atoms);
  };
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const AtomicMeasure a = random_measure(), c = random_measure();
    const AtomicMeasure ac = convolve(a, c);
    for (int i = 0; i < 100; ++i) {
      GroupElt g(primes);
      for (std::size_t j = 0; j < primes.size(); ++j)
        for (std::uint64_t n = 1; n <= window; ++n) g.set(j, n, static_cast<std::int64_t>(rng() % primes[j]));
      worst = std::max(worst, std::abs(fourier(ac, g) - fourier(a, g) * fourier(c, g)));
    }
  }
  o.require(worst <= 1e-12, "max deviation " + std::to_string(worst));
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.2e", worst);
  if (o.ok) o.detail = buf;
  return o;
}

Outcome tiling() {
  Outcome o;
  for (std::uint32_t p : {2u, 3u}) {
    std::int64_t pn = 1;
    for (std::uint64_t n = 2; n < 8; ++n) {
      pn = 1;
      for (std::uint64_t i = 0; i < n; ++i) pn *= p;
      for (std::uint64_t m = n + 1; m <= 8; ++m) {
        const TileCover c = box_tile_shifts({p}, n, m);
        o.require(c.exact() && c.leftover == 0, "cover p=" + std::to_string(p));
        const TileDensityReport d = tile_density_check({p}, n, m);
        o.require(d.density == Rational(1, pn) && d.max_tile_hits <= 1, "density p=" + std::to_string(p));
      }
    }
  }
  return o;
}

Outcome recurrence() {
  Outcome o;
  const FiniteAbelian G({2, 2, 2});
  const RecurrenceVerdict weight_one =
      delta_recurrence_bruteforce({G, {G.encode({0, 0, 1}), G.encode({0, 1, 0}), G.encode({1, 0, 0})}, Rational(1, 2)});
  const std::vector<std::uint64_t> even{G.encode({0, 0, 0}), G.encode({0, 1, 1}), G.encode({1, 0, 1}), G.encode({1, 1, 0})};
  o.require(!weight_one.pass && weight_one.counterexample == even, "weight-one R");
  std::vector<std::uint64_t> nonzero;
  for (std::uint64_t x = 1; x < 8; ++x) nonzero.push_back(x);
  o.require(delta_recurrence_bruteforce({G, nonzero, Rational(1, 2)}).pass, "nonzero R");
  return o;
}

Outcome cubes() {
  Outcome o;
  const CubeVerdict v = cube_lemma_check({{2}, 2, Rational(3, 4), Rational(1, 2)}, CubeMode::Exhaustive);
  o.require(v.status == CubeVerdict::Status::Pass && !v.sampled, "exhaustive k=(2), d=2");
  o.require(mcdiarmid_bound(0.5, 0.5) == 45, "mcdiarmid_bound(0.5, 0.5)");
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double margin = 1.0;
  for (int i = 0; i < 200; ++i) {
    const unsigned d = 1 + static_cast<unsigned>(i % 6);
    const CubeInstance inst{{2, 3}, d, Rational(1, 2), Rational(1, 2)};
    const FiniteAbelian G = cube_group(inst);
    const double density = 0.02 + 0.5 * unit(rng);
    std::vector<std::uint64_t> A;
    for (std::uint64_t x = 0; x < G.order(); ++x)
      if (unit(rng) < density) A.push_back(x);
    if (A.empty()) A.push_back(rng() % G.order());
    const double t = 0.05 + 1.5 * unit(rng);
    const NeighbourhoodCount nc = neighbourhood_count(inst, A, t);
    const double alpha = static_cast<double>(A.size()) / static_cast<double>(G.order());
    const double bound = blowup_lower_bound(alpha, d, t).clamped;
    margin = std::min(margin, nc.ratio() - bound);
    o.require(nc.ratio() >= bound, "instance " + std::to_string(i));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "smallest margin %.4f", margin);
  if (o.ok) o.detail = buf;
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> body;
  };
  const Criterion criteria[] = {
      {1, "Fibonacci polynomial table mod 2,3,5,7", 1, fibonacci_table},
      {2, "convergent inequalities, Fibonacci and random rationals", 5, convergent_inequalities},
      {3, "PV floors along both paths, norm exponent -n", 10, pv_dual_path},
      {4, "golden ratio: Lucas values and geometric decay", 1, real_pv},
      {5, "C_0 annihilation for both example families", 2, annihilation},
      {6, "measure construction certificate, depth 4, horizon 300", 30, construction},
      {7, "convolution theorem on random probes", 2, convolution},
      {8, "exact box tilings and tile densities", 5, tiling},
      {9, "recurrence brute force on (Z/2)^3", 5, recurrence},
      {10, "cube lemma, McDiarmid bound and blow-up bound", 60, cubes},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("[%s] %2d %s (%.3f s, limit %.0f s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, c.limit_s,
                o.detail.empty() ? "" : ": ", o.detail.c_str());
    if (!in_time) std::printf("       over the time limit\n");
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
