#include "rigidseq/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

// ------------------------------------------------------------ AtomicMeasure

AtomicMeasure AtomicMeasure::dirac(Character chi) {
  AtomicMeasure m;
  m.atoms_.push_back({std::move(chi), Rational(1)});
  return m;
}

AtomicMeasure AtomicMeasure::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("a probability measure needs at least one atom");
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.chi < b.chi; });
  AtomicMeasure m;
  Rational total(0);
  const auto primes = atoms.front().chi.primes();
  const auto window = atoms.front().chi.window();
  for (auto& atom : atoms) {
    if (atom.weight <= Rational(0)) throw std::invalid_argument("atom weights must be positive");
    if (atom.chi.primes() != primes) throw ModulusMismatch("atoms on different groups");
    if (atom.chi.window() != window) throw WindowError("atoms with different windows");
    total += atom.weight;
    if (!m.atoms_.empty() && m.atoms_.back().chi == atom.chi)
      m.atoms_.back().weight += atom.weight;
    else
      m.atoms_.push_back(std::move(atom));
  }
  if (total != Rational(1)) throw std::invalid_argument("atom weights sum to " + to_string(total) + ", not 1");
  return m;
}

// ------------------------------------------------------------ defects

std::string Defect::str() const {
  if (exact) return to_string(*exact);
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

bool strictly_below(const Defect& d, const Rational& bound) {
  if (d.exact) return *d.exact < bound;
  return d.value < to_double(bound) - kDefectGuard;
}

bool at_most(const Defect& d, const Rational& bound) {
  if (d.exact) return *d.exact <= bound;
  return d.value <= to_double(bound) - kDefectGuard;
}

Defect max(const Defect& a, const Defect& b) {
  Defect out;
  out.value = std::max(a.value, b.value);
  if (a.exact && b.exact)
    out.exact = std::max(*a.exact, *b.exact);
  else
    out.exact.reset();
  return out;
}

std::complex<double> fourier(const AtomicMeasure& sigma, const GroupElt& g) {
  std::complex<double> acc{0.0, 0.0};
  for (const auto& atom : sigma.atoms()) acc += to_double(atom.weight) * char_eval(atom.chi, g).value();
  return acc;
}

double rigidity_defect(const AtomicMeasure& sigma, const GroupElt& g) { return rigidity_defect_exact(sigma, g).value; }

Defect rigidity_defect_exact(const AtomicMeasure& sigma, const GroupElt& g) {
  Defect d;
  for (const auto& atom : sigma.atoms()) {
    const RootOfUnity z = char_eval(atom.chi, g);
    d.value += to_double(atom.weight) * z.distance_to_one();
    if (z.order() > 2)
      d.exact.reset();
    else if (d.exact && z.order() == 2)
      *d.exact += atom.weight * 2;
  }
  return d;
}

AtomicMeasure convolve(const AtomicMeasure& a, const AtomicMeasure& b) {
  if (a.window() != b.window()) throw WindowError("convolution of measures with different windows");
  std::vector<Atom> atoms;
  atoms.reserve(a.size() * b.size());
  for (const auto& x : a.atoms())
    for (const auto& y : b.atoms()) atoms.push_back({x.chi * y.chi, x.weight * y.weight});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

double convolution_defect(const AtomicMeasure& a, const AtomicMeasure& b, const AtomicMeasure& ab,
                          std::span<const GroupElt> probes) {
  double worst = 0.0;
  for (const auto& g : probes) worst = std::max(worst, std::abs(fourier(ab, g) - fourier(a, g) * fourier(b, g)));
  return worst;
}

SupportGroupReport support_group_check(const AtomicMeasure& sigma, std::span<const GroupElt> probes) {
  SupportGroupReport report;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const bool in_kernel = std::abs(fourier(sigma, probes[i]) - 1.0) < 1e-12;
    if (in_kernel) {
      report.kernel.push_back(i);
      for (const auto& atom : sigma.atoms())
        if (!char_eval(atom.chi, probes[i]).is_one()) report.atoms_annihilate_kernel = false;
    } else {
      const auto& atoms = sigma.atoms();
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (!char_eval(atoms[k].chi, probes[i]).is_one()) {
          report.witnesses[i] = k;
          break;
        }
      }
    }
  }
  report.consistent = report.atoms_annihilate_kernel && report.kernel.size() + report.witnesses.size() == probes.size();
  return report;
}

// ------------------------------------------------------------ families

namespace {

bool excluded(const Character& c, std::span<const Character> exclude) {
  return std::find(exclude.begin(), exclude.end(), c) != exclude.end();
}

class FiniteSupportFamily final : public CharacterFamily {
public:
  FiniteSupportFamily(std::vector<std::uint32_t> primes, std::vector<std::uint64_t> window)
      : primes_(std::move(primes)), window_(std::move(window)) {
    Character probe(primes_, window_);  // validates the shape
  }
  std::string name() const override { return "finite-support"; }
  const std::vector<std::uint32_t>& primes() const override { return primes_; }
  const std::vector<std::uint64_t>& window() const override { return window_; }
  bool contains(const Character& chi) const override { return chi.primes() == primes_ && chi.window() == window_; }

  std::optional<Character> pick(const Character& near, std::uint64_t depth,
                                std::span<const Character> exclude) const override {
    const std::uint64_t top = *std::max_element(window_.begin(), window_.end());
    for (std::uint64_t c = depth + 1; c <= top; ++c) {
      for (std::size_t j = 0; j < primes_.size(); ++j) {
        if (c > window_[j]) continue;
        for (std::uint32_t v = 1; v < primes_[j]; ++v) {
          Character cand = near;
          cand.set(j, c, std::int64_t{near.exponent(j, c)} + v);
          if (!excluded(cand, exclude)) return cand;
        }
      }
    }
    return std::nullopt;
  }

private:
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> window_;
};

class C0GeometricFamily final : public CharacterFamily {
public:
  C0GeometricFamily(PrimeModulus p, std::uint64_t window) : primes_{p.value()}, window_{window} {
    if (window % p.value() != 0)
      throw std::invalid_argument("the geometric C_0 window must be a multiple of p");
  }
  std::string name() const override { return "c0-geometric"; }
  const std::vector<std::uint32_t>& primes() const override { return primes_; }
  const std::vector<std::uint64_t>& window() const override { return window_; }

  bool contains(const Character& chi) const override {
    if (chi.primes() != primes_ || chi.window() != window_) return false;
    const std::uint64_t p = primes_[0];
    for (std::uint64_t c = 1; c <= chi.support_bound(0); ++c)
      if (chi.exponent(0, c) != chi.exponent(0, ((c - 1) / p) * p + 1)) return false;
    return true;
  }

  std::optional<Character> pick(const Character& near, std::uint64_t depth,
                                std::span<const Character> exclude) const override {
    const std::uint64_t p = primes_[0];
    for (std::uint64_t run = (depth + p - 1) / p; (run + 1) * p <= window_[0]; ++run) {
      const std::uint32_t base = near.exponent(0, run * p + 1);
      for (std::uint32_t v = 1; v < p; ++v) {
        Character cand = near;
        for (std::uint64_t c = run * p + 1; c <= (run + 1) * p; ++c) cand.set(0, c, std::int64_t{base} + v);
        if (!excluded(cand, exclude)) return cand;
      }
    }
    return std::nullopt;
  }

private:
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> window_;
};

class C0IndexSetFamily final : public CharacterFamily {
public:
  C0IndexSetFamily(IndexSet I, PrimeModulus p, std::uint64_t window)
      : index_(std::move(I)), primes_{p.value()}, window_{window} {}
  std::string name() const override { return "c0-indexset " + index_.str(); }
  const std::vector<std::uint32_t>& primes() const override { return primes_; }
  const std::vector<std::uint64_t>& window() const override { return window_; }

  bool contains(const Character& chi) const override {
    if (chi.primes() != primes_ || chi.window() != window_) return false;
    for (std::uint64_t c = 1; c <= chi.support_bound(0); ++c)
      if (index_.contains(c - 1) && chi.exponent(0, c) != 0) return false;
    return true;
  }

  std::optional<Character> pick(const Character& near, std::uint64_t depth,
                                std::span<const Character> exclude) const override {
    for (std::uint64_t c = depth + 1; c <= window_[0]; ++c) {
      if (index_.contains(c - 1)) continue;
      for (std::uint32_t v = 1; v < primes_[0]; ++v) {
        Character cand = near;
        cand.set(0, c, std::int64_t{near.exponent(0, c)} + v);
        if (!excluded(cand, exclude)) return cand;
      }
    }
    return std::nullopt;
  }

private:
  IndexSet index_;
  std::vector<std::uint32_t> primes_;
  std::vector<std::uint64_t> window_;
};

} // namespace

std::unique_ptr<CharacterFamily> finite_support_family(std::vector<std::uint32_t> primes,
                                                       std::vector<std::uint64_t> window) {
  return std::make_unique<FiniteSupportFamily>(std::move(primes), std::move(window));
}

std::unique_ptr<CharacterFamily> c0_geometric_family(PrimeModulus p, std::uint64_t window) {
  return std::make_unique<C0GeometricFamily>(p, window);
}

std::unique_ptr<CharacterFamily> c0_indexset_family(const IndexSet& I, PrimeModulus p, std::uint64_t window) {
  return std::make_unique<C0IndexSetFamily>(I, p, window);
}

// ------------------------------------------------------------ cylinders

bool Cylinder::disjoint_from(const Cylinder& o) const {
  return !center.agrees_with(o.center, std::min(depth, o.depth));
}

bool Cylinder::subset_of(const Cylinder& o) const {
  return depth >= o.depth && center.agrees_with(o.center, o.depth);
}

// ------------------------------------------------------------ JSON

nlohmann::json to_json(const AtomicMeasure& sigma) {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : sigma.atoms()) atoms.push_back({{"character", to_json(a.chi)}, {"weight", to_string(a.weight)}});
  return {{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const nlohmann::json& j) {
  try {
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms"))
      atoms.push_back({character_from_json(a.at("character")), parse_rational(a.at("weight").get<std::string>())});
    return AtomicMeasure::from_atoms(std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("measure JSON: ") + e.what());
  }
}

nlohmann::json to_json(const ConstructionState& state) {
  nlohmann::json chars = nlohmann::json::array();
  for (const auto& c : state.characters) chars.push_back(to_json(c));
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t q = 0; q < state.cells.size(); ++q)
    for (std::size_t r = 0; r < state.cells[q].size(); ++r) {
      const auto& cell = state.cells[q][r];
      nlohmann::json pattern = nlohmann::json::array();
      for (std::size_t j = 0; j < cell.center.blocks(); ++j) {
        std::vector<std::uint32_t> head;
        for (std::uint64_t c = 1; c <= std::min(cell.depth, cell.center.window()[j]); ++c)
          head.push_back(cell.center.exponent(j, c));
        pattern.push_back(head);
      }
      cells.push_back({{"q", q}, {"r", r + 1}, {"depth", cell.depth}, {"pattern", pattern}});
    }
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : state.steps)
    steps.push_back({{"p", s.p}, {"s", s.s}, {"agreement", s.agreement}, {"attempts", s.attempts}, {"cutoff", s.cutoff}});
  return {{"depth", state.depth}, {"horizon", state.horizon}, {"cutoffs", state.cutoffs},
          {"characters", chars},  {"cells", cells},           {"steps", steps}};
}

} // namespace rigidseq
