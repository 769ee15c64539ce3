#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rigidseq/ffield.hpp"
#include "rigidseq/laurent.hpp"

namespace rigidseq {

/// e^{2 pi i r/m}, kept in lowest terms (so 1 is 0/1 and -1 is 1/2).
class RootOfUnity {
public:
  RootOfUnity() = default;
  RootOfUnity(std::uint64_t r, std::uint64_t m);
  static RootOfUnity one() { return {}; }

  std::uint64_t residue() const { return r_; }
  std::uint64_t order() const { return m_; }
  bool is_one() const { return r_ == 0; }

  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity conj() const { return RootOfUnity(r_ == 0 ? 0 : m_ - r_, m_); }
  /// |zeta - 1| = 2|sin(pi r/m)|.
  double distance_to_one() const;
  std::complex<double> value() const;
  bool operator==(const RootOfUnity&) const = default;
  std::string str() const;

private:
  std::uint64_t r_ = 0;
  std::uint64_t m_ = 1;
};

/// Finitely supported element of the direct sum over blocks j of
/// (Z/p_j)^(N).  Coordinates are numbered from 1.
class GroupElt {
public:
  explicit GroupElt(std::vector<std::uint32_t> primes);
  /// Single block p, coordinate k+1 holding the coefficient of t^k.
  static GroupElt from_poly(const Poly& a);
  static GroupElt basis(std::vector<std::uint32_t> primes, std::size_t block, std::uint64_t coord,
                        std::uint32_t value = 1);

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  std::size_t blocks() const { return primes_.size(); }
  std::uint32_t get(std::size_t block, std::uint64_t coord) const;
  void set(std::size_t block, std::uint64_t coord, std::int64_t value);
  /// Largest coordinate with a nonzero entry, 0 if the block is empty.
  std::uint64_t support_bound(std::size_t block) const { return entries_.at(block).size(); }
  const std::vector<std::uint32_t>& block(std::size_t j) const { return entries_.at(j); }
  bool is_zero() const;

  GroupElt operator+(const GroupElt& o) const;
  GroupElt operator-(const GroupElt& o) const;
  GroupElt operator-() const;
  bool operator==(const GroupElt&) const = default;
  auto operator<=>(const GroupElt&) const = default;

private:
  void trim(std::size_t block);
  std::vector<std::uint32_t> primes_;
  std::vector<std::vector<std::uint32_t>> entries_;  // entries_[j][n-1]
};

/// A character of the dual product, stored through a finite window per block.
/// Exponents beyond the stored entries are zero; coordinates beyond the
/// window are not part of the description and evaluating there is an error.
class Character {
public:
  Character(std::vector<std::uint32_t> primes, std::vector<std::uint64_t> window);
  /// Coefficient of t^{-n} as the exponent at coordinate n, for n <= window.
  static Character from_laurent(const Laurent& x, std::uint64_t window);

  const std::vector<std::uint32_t>& primes() const { return primes_; }
  const std::vector<std::uint64_t>& window() const { return window_; }
  std::size_t blocks() const { return primes_.size(); }
  /// Throws WindowError past the window.
  std::uint32_t exponent(std::size_t block, std::uint64_t coord) const;
  void set(std::size_t block, std::uint64_t coord, std::int64_t value);
  const std::vector<std::uint32_t>& block(std::size_t j) const { return entries_.at(j); }
  std::uint64_t support_bound(std::size_t block) const { return entries_.at(block).size(); }
  bool is_trivial() const;

  /// Pointwise product (sum of exponents); windows must match.
  Character operator*(const Character& o) const;
  Character inverse() const;
  /// Equal exponents on coordinates 1..depth of every block.
  bool agrees_with(const Character& o, std::uint64_t depth) const;
  /// First coordinate (over all blocks) where the two differ, 0 if equal.
  std::uint64_t first_difference(const Character& o) const;

  bool operator==(const Character&) const = default;
  auto operator<=>(const Character&) const = default;

private:
  void trim(std::size_t block);
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> window_;
  std::vector<std::vector<std::uint32_t>> entries_;
};

/// prod_j exp(2 pi i sum_n x_{j,n} g_{j,n} / p_j).  Throws WindowError if the
/// support of g leaves the window and ModulusMismatch on different blocks.
RootOfUnity char_eval(const Character& chi, const GroupElt& g);

/// <x, a> = e(ax) = e^{2 pi i c_{-1}(ax) / p} for x in t^{-1}F_p[[1/t]].
RootOfUnity poly_pair(const Laurent& x, const Poly& a);

// ------------------------------------------------------------ examples

/// a_n = 1 + t + ... + t^{np-1}, n >= 1.
Poly example_sequence_geometric(std::uint64_t n, PrimeModulus p);

/// sum_j b_j (t^{-(jp+1)} + ... + t^{-(j+1)p}); known through t^{-p * blocks}.
Laurent c0_sample_geometric(std::span<const std::int64_t> block_values, PrimeModulus p);
Laurent c0_random_geometric(PrimeModulus p, std::size_t blocks, std::mt19937_64& rng);

/// Union of residue classes modulo `period`.  Requires a nonempty proper
/// subset of residues, so both the set and its complement are infinite.
struct IndexSet {
  std::uint64_t period = 2;
  std::vector<std::uint64_t> residues{0};

  IndexSet() = default;
  IndexSet(std::uint64_t period, std::vector<std::uint64_t> residues);
  static IndexSet evens() { return {}; }
  bool contains(std::uint64_t n) const;
  /// k-th element in increasing order, k >= 0.
  std::uint64_t element(std::uint64_t k) const;
  /// "2:0" or "3:0,2".
  std::string str() const;
  static IndexSet parse(std::string_view text);
};

/// sum_{i in F} c_i t^i.  Throws std::invalid_argument if F is empty, not a
/// subset of I, or every c_i vanishes mod p.
Poly example_sequence_indexset(const IndexSet& I, std::span<const std::uint64_t> F,
                               std::span<const std::int64_t> c, PrimeModulus p);
/// Element with c_k = coeffs[k-1] except c_{n+1} = 0 for n in I; known
/// through t^{-coeffs.size()}.
Laurent c0_sample_indexset(const IndexSet& I, std::span<const std::int64_t> coeffs, PrimeModulus p);
Laurent c0_random_indexset(const IndexSet& I, PrimeModulus p, std::size_t depth, std::mt19937_64& rng);

/// A sequence in the group, indexed from `start`.
struct GroupSequence {
  std::string name;
  std::vector<std::uint32_t> primes;
  std::uint64_t start = 0;
  std::function<GroupElt(std::uint64_t)> term;
};

/// a_n = t^n in a single block, n >= 0.
GroupSequence monomial_sequence(PrimeModulus p);
/// The geometric example, n >= 1.
GroupSequence geometric_sequence(PrimeModulus p);
/// Enumeration of every a_{F;c}: the base-p digits of n >= 1 are placed on
/// the elements of I in increasing order.
GroupSequence indexset_sequence(const IndexSet& I, PrimeModulus p);

// ------------------------------------------------------------ JSON

nlohmann::json to_json(const GroupElt& g);
nlohmann::json to_json(const Character& chi);
GroupElt group_elt_from_json(const nlohmann::json& j);
Character character_from_json(const nlohmann::json& j);

} // namespace rigidseq
