#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidseq/certificate.hpp"
#include "rigidseq/dualgroup.hpp"
#include "rigidseq/rational.hpp"

namespace rigidseq {

struct Atom {
  Character chi;
  Rational weight;
};

/// Finitely many point masses with exact positive weights summing to 1.
/// Atoms are kept sorted by character with duplicates merged.
class AtomicMeasure {
public:
  static AtomicMeasure dirac(Character chi);
  /// Throws std::invalid_argument on non-positive weights, a total other
  /// than 1, or characters with different blocks or windows.
  static AtomicMeasure from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::uint32_t>& primes() const { return atoms_.front().chi.primes(); }
  const std::vector<std::uint64_t>& window() const { return atoms_.front().chi.window(); }

private:
  std::vector<Atom> atoms_;
};

/// A rigidity-defect value.  When every root involved has order <= 2 the
/// sum is exact and `exact` holds it; otherwise only `value` is meaningful.
struct Defect {
  double value = 0.0;
  std::optional<Rational> exact = Rational(0);

  std::string str() const;
};

/// Guard band for comparing inexact defects against dyadic thresholds.
inline constexpr double kDefectGuard = 1e-12;

/// d < bound, exactly when possible, otherwise with the guard band against us.
bool strictly_below(const Defect& d, const Rational& bound);
bool at_most(const Defect& d, const Rational& bound);
Defect max(const Defect& a, const Defect& b);

/// sigma^(g) = sum w_i chi_i(g).
std::complex<double> fourier(const AtomicMeasure& sigma, const GroupElt& g);
/// sum w_i |chi_i(g) - 1|.
double rigidity_defect(const AtomicMeasure& sigma, const GroupElt& g);
Defect rigidity_defect_exact(const AtomicMeasure& sigma, const GroupElt& g);

/// Atoms (chi psi, w_chi w_psi), merged on collision.  Throws WindowError when
/// the windows differ.
AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b);

/// Largest |(a*b)^(g) - a^(g) b^(g)| over the probes.
double convolution_defect(const AtomicMeasure& a, const AtomicMeasure& b, const AtomicMeasure& ab,
                          std::span<const GroupElt> probes);

struct SupportGroupReport {
  /// Indices of probes with sigma^(g) = 1 (numerically, within 1e-12).
  std::vector<std::size_t> kernel;
  /// Every atom is exactly 1 on every kernel probe.
  bool atoms_annihilate_kernel = true;
  /// For each probe outside the kernel, an atom index with chi(g) != 1.
  std::map<std::size_t, std::size_t> witnesses;
  /// Both directions hold.
  bool consistent = true;
};
SupportGroupReport support_group_check(const AtomicMeasure& sigma, std::span<const GroupElt> probes);

// ------------------------------------------------------------ families

/// An infinite set of characters from which the construction draws.
class CharacterFamily {
public:
  virtual ~CharacterFamily() = default;
  virtual std::string name() const = 0;
  virtual const std::vector<std::uint32_t>& primes() const = 0;
  virtual const std::vector<std::uint64_t>& window() const = 0;
  virtual bool contains(const Character& chi) const = 0;
  /// A member agreeing with `near` on coordinates 1..depth of every block and
  /// different from everything in `exclude`; nullopt if the window is exhausted.
  virtual std::optional<Character> pick(const Character& near, std::uint64_t depth,
                                        std::span<const Character> exclude) const = 0;

  Character identity() const { return Character(primes(), window()); }
};

/// All characters with finitely many nonzero exponents, on the given blocks.
std::unique_ptr<CharacterFamily> finite_support_family(std::vector<std::uint32_t> primes,
                                                       std::vector<std::uint64_t> window);
/// The geometric C_0: exponents constant on each run of p coordinates.
std::unique_ptr<CharacterFamily> c0_geometric_family(PrimeModulus p, std::uint64_t window);
/// The index-set C_0: exponent zero at coordinate n+1 for every n in I.
std::unique_ptr<CharacterFamily> c0_indexset_family(const IndexSet& I, PrimeModulus p, std::uint64_t window);

// ------------------------------------------------------------ construction

/// Characters agreeing with `center` on coordinates 1..depth of every block.
struct Cylinder {
  std::uint64_t depth = 0;
  Character center;

  bool contains(const Character& chi) const { return chi.agrees_with(center, depth); }
  bool disjoint_from(const Cylinder& o) const;
  bool subset_of(const Cylinder& o) const;
};

struct ConstructionStep {
  unsigned p = 0;
  std::uint64_t s = 0;
  /// Agreement depth at which the pick was accepted, and how many depths were tried.
  std::uint64_t agreement = 0;
  unsigned attempts = 0;
  /// N_{p,s}.
  std::uint64_t cutoff = 0;
};

struct ConstructionState {
  unsigned depth = 0;
  std::uint64_t horizon = 0;
  /// chi_1, chi_2, ... (chi_i at index i-1).
  std::vector<Character> characters;
  /// N_0 .. N_depth.
  std::vector<std::uint64_t> cutoffs;
  /// cells[q][r-1] = V_{q,r}.
  std::vector<std::vector<Cylinder>> cells;
  std::vector<ConstructionStep> steps;
};

struct ConstructionOptions {
  unsigned depth = 3;
  std::uint64_t horizon = 200;
  /// Starting agreement depth for picks at level p; the cell depth is a floor.
  /// Missing levels reuse the last entry; empty means start at the cell depth.
  std::vector<std::uint64_t> agreement_schedule;
  /// Added to the agreement depth after each rejected pick.
  std::uint64_t agreement_step = 1;
};

struct ConstructionResult {
  AtomicMeasure sigma;
  ConstructionState state;
  Certificate certificate;
};

/// Runs the Cantor-like double induction to finite depth.  Throws
/// ConstructionError when no acceptable pick exists within the window or the
/// horizon cannot hold the next cutoff, WindowError if a sequence term leaves
/// the family window, and CertificateFailure if an emitted row fails.
ConstructionResult construct_wm_measure(const CharacterFamily& family, const GroupSequence& seq,
                                        const ConstructionOptions& options);

/// sigma_{p,s} from the closed form: chi_1..chi_s and chi_{2^p+1}..chi_{2^p+s}
/// carry 2^{-(p+1)}, chi_{s+1}..chi_{2^p} carry 2^{-p}.  s = 0 gives sigma_p.
AtomicMeasure stage_measure(const ConstructionState& state, unsigned p, std::uint64_t s);

/// Recomputes every construction row by direct summation over the atoms of
/// stage_measure.
Certificate reverify(const ConstructionState& state, const GroupSequence& seq);

/// Same ids, params and verdicts, and left values within `tol`.
bool certificates_agree(const Certificate& a, const Certificate& b, double tol = 1e-9);

/// sigma(V_{q,r}) = 2^{-q} for every q <= depth and r <= 2^q, exactly.
Certificate cell_mass_check(const ConstructionState& state, const AtomicMeasure& sigma);

// ------------------------------------------------------------ JSON

nlohmann::json to_json(const AtomicMeasure& sigma);
AtomicMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ConstructionState& state);

} // namespace rigidseq
