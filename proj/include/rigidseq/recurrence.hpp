#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rigidseq/folner.hpp"
#include "rigidseq/measures.hpp"
#include "rigidseq/rational.hpp"

namespace rigidseq {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

/// C(n, k), or cap + 1 once it exceeds cap.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

/// A finite abelian group prod Z/m_i with elements encoded in mixed radix,
/// the first coordinate most significant (so numeric order is lexicographic).
class FiniteAbelian {
public:
  explicit FiniteAbelian(std::vector<std::uint32_t> moduli);

  const std::vector<std::uint32_t>& moduli() const { return moduli_; }
  std::uint64_t order() const { return order_; }
  std::uint64_t encode(const std::vector<std::uint32_t>& coords) const;
  std::vector<std::uint32_t> decode(std::uint64_t x) const;
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;

private:
  std::vector<std::uint32_t> moduli_;
  std::vector<std::uint64_t> stride_;
  std::uint64_t order_ = 1;
};

/// Finite stand-in for a set of delta-recurrence: R inside a finite group G,
/// with "positive density" read as |E| >= delta |G|.
struct FiniteModel {
  FiniteAbelian group;
  std::vector<std::uint64_t> R;
  Rational delta{1, 2};
};

struct RecurrenceVerdict {
  bool pass = false;
  /// Lexicographically least E of the minimal size with (E - E) cap R empty.
  std::optional<std::vector<std::uint64_t>> counterexample;
  /// ceil(delta |G|), the only subset size that needs checking.
  std::uint64_t subset_size = 0;
  /// Search nodes visited.
  std::uint64_t nodes = 0;
};

/// Every E with |E| >= delta|G| has (E - E) cap R nonempty?  Supersets of a
/// good set are good, so only sets of size ceil(delta |G|) are examined, by
/// backtracking over sets whose pairwise differences avoid R.  Throws
/// BudgetExceeded when C(|G|, size) exceeds the budget.
RecurrenceVerdict delta_recurrence_bruteforce(const FiniteModel& model, std::uint64_t budget = kDefaultBudget);

/// {g in probes : rigidity_defect(sigma, g) < eps}.
std::vector<GroupElt> r_epsilon_set(const AtomicMeasure& sigma, double eps, std::span<const GroupElt> probes);

// ------------------------------------------------------------ cube lemma

/// Lambda^d with Lambda = prod_l Lambda_{k_l}; elements are d*M residues,
/// row-major in j (the Lambda factor) then l.
struct CubeInstance {
  std::vector<std::uint32_t> k;
  unsigned d = 1;
  Rational delta{1, 2};
  Rational eps{1, 2};
};

/// Comparison slack when a rho value meets eps.
inline constexpr double kCubeGuard = 1e-9;

/// rho(x, y) = (1/dM) sum_{j,l} |e(x_{jl}/k_l) - e(y_{jl}/k_l)|.
double cube_metric(const CubeInstance& inst, std::uint64_t x, std::uint64_t y);
FiniteAbelian cube_group(const CubeInstance& inst);

enum class CubeMode { Exhaustive, Sampled };

struct CubeVerdict {
  enum class Status { Pass, Violation, Tie };
  Status status = Status::Pass;
  /// Sets A examined (all minimal ones when exhaustive).
  std::uint64_t sets_checked = 0;
  /// Largest over (A, x) of min_{a,b in A} rho(ab^{-1}, x).
  double worst_distance = 0.0;
  /// The (A, x) attaining worst_distance, and its witnesses.
  std::vector<std::uint64_t> worst_set;
  std::uint64_t worst_target = 0;
  std::uint64_t witness_a = 0;
  std::uint64_t witness_b = 0;
  bool sampled = false;

  static std::string name(Status s);
};

/// Exhaustive: every A of size ceil(delta |Lambda^d|) and every x.  Sampled:
/// `samples` random (A, x) pairs, sample i drawn from a generator seeded with
/// (seed, i) so results do not depend on the thread count.
CubeVerdict cube_lemma_check(const CubeInstance& inst, CubeMode mode, std::uint64_t samples = 0,
                             std::uint64_t seed = 0, unsigned threads = 1, std::uint64_t budget = kDefaultBudget);

/// ceil(16 eps^{-2} ln(1/delta)).
std::uint64_t mcdiarmid_bound(double delta, double eps);

struct BlowupBound {
  double raw;
  double clamped;
};
/// 1 - alpha^{-1} exp(-d t^2 / 8).
BlowupBound blowup_lower_bound(double alpha, unsigned d, double t);

struct NeighbourhoodCount {
  /// x with rho(x, A) < t - guard, and x within the guard band of t.
  std::uint64_t inside = 0;
  std::uint64_t ties = 0;
  std::uint64_t total = 0;
  double ratio() const { return static_cast<double>(inside) / static_cast<double>(total); }
};

/// |A_t| by a separable min-plus distance transform over the d*M coordinates.
NeighbourhoodCount neighbourhood_count(const CubeInstance& inst, const std::vector<std::uint64_t>& A, double t);

} // namespace rigidseq
