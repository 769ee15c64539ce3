#include <algorithm>
#include <cmath>
#include <functional>

#include "rigidseq/errors.hpp"
#include "rigidseq/measures.hpp"

namespace rigidseq {

namespace {

/// Weights of one stage, indexed like state.characters.
using Weights = std::vector<Rational>;

/// Defects over n = start .. horizon (index n - start).
using DefectSeries = std::vector<Defect>;

Rational two_pow_neg(int k) { return dyadic(k); }

/// Values of every chosen character on every sequence term, computed once.
class RootTable {
public:
  RootTable(const GroupSequence& seq, std::uint64_t horizon) : start_(seq.start) {
    for (std::uint64_t n = seq.start; n <= horizon; ++n) terms_.push_back(seq.term(n));
  }

  void add(const Character& chi) {
    std::vector<RootOfUnity> row;
    row.reserve(terms_.size());
    for (const auto& g : terms_) row.push_back(char_eval(chi, g));
    rows_.push_back(std::move(row));
  }

  DefectSeries defects(const Weights& w) const {
    DefectSeries out(terms_.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].numerator() == 0) continue;
      const double wd = to_double(w[i]);
      for (std::size_t k = 0; k < terms_.size(); ++k) {
        const RootOfUnity& z = rows_[i][k];
        if (z.is_one()) continue;
        out[k].value += wd * z.distance_to_one();
        if (z.order() > 2)
          out[k].exact.reset();
        else if (out[k].exact)
          *out[k].exact += w[i] * 2;
      }
    }
    return out;
  }

  void pop() { rows_.pop_back(); }

private:
  std::uint64_t start_;
  std::vector<GroupElt> terms_;
  std::vector<std::vector<RootOfUnity>> rows_;
};

Defect range_max(const DefectSeries& d, std::uint64_t start, std::uint64_t lo, std::uint64_t hi) {
  Defect out;
  for (std::uint64_t n = std::max(lo, start); n <= hi && n - start < d.size(); ++n) out = max(out, d[n - start]);
  return out;
}

CertificateRow bound_row(std::string id, nlohmann::json params, const Defect& left, const Rational& bound,
                         bool strict = true) {
  CertificateRow row{std::move(id), std::move(params), left.str(), strict ? "<" : "<=", to_string(bound), false};
  row.pass = strict ? strictly_below(left, bound) : at_most(left, bound);
  return row;
}

/// Which stage measure to evaluate: (p, s) with s = 0 meaning sigma_p.
using DefectProvider = std::function<DefectSeries(unsigned p, std::uint64_t s)>;

std::uint64_t step_cutoff(const ConstructionState& st, unsigned p, std::uint64_t s) {
  for (const auto& step : st.steps)
    if (step.p == p && step.s == s) return step.cutoff;
  throw std::logic_error("missing construction step");
}

/// Rows checking the bounds the induction promises for sigma_{p,s}.
void step_rows(Certificate& cert, const ConstructionState& st, const DefectSeries& d, std::uint64_t start,
               unsigned p, std::uint64_t s) {
  const auto& N = st.cutoffs;
  for (unsigned j = 0; j < p; ++j)
    cert.add(bound_row("step_prefix_bound", {{"p", p}, {"s", s}, {"j", j}, {"from", N[j]}, {"to", N[j + 1]}},
                       range_max(d, start, N[j], N[j + 1]), two_pow_neg(static_cast<int>(j) - 1)));
  cert.add(bound_row("step_middle_bound", {{"p", p}, {"s", s}, {"from", N[p]}, {"to", st.horizon}},
                     range_max(d, start, N[p], st.horizon), two_pow_neg(static_cast<int>(p) - 1)));
  const std::uint64_t cut = step_cutoff(st, p, s);
  cert.add(bound_row("step_tail_bound", {{"p", p}, {"s", s}, {"from", cut}, {"to", st.horizon}},
                     range_max(d, start, cut, st.horizon), two_pow_neg(static_cast<int>(p) + 2)));
}

/// Rows for sigma_p itself, p >= 1.
void level_rows(Certificate& cert, const ConstructionState& st, const DefectSeries& d, std::uint64_t start,
                unsigned p) {
  const auto& N = st.cutoffs;
  for (unsigned j = 0; j < p; ++j)
    cert.add(bound_row("prefix_bound", {{"p", p}, {"j", j}, {"from", N[j]}, {"to", N[j + 1]}},
                       range_max(d, start, N[j], N[j + 1]), two_pow_neg(static_cast<int>(j) - 1)));
  cert.add(bound_row("tail_bound", {{"p", p}, {"from", N[p]}, {"to", st.horizon}},
                     range_max(d, start, N[p], st.horizon), two_pow_neg(static_cast<int>(p) + 1)));

  const auto& cells = st.cells[p];
  std::size_t overlaps = 0;
  for (std::size_t a = 0; a < cells.size(); ++a)
    for (std::size_t b = a + 1; b < cells.size(); ++b)
      if (!cells[a].disjoint_from(cells[b])) ++overlaps;
  cert.add({"cells_disjoint", {{"p", p}, {"cells", cells.size()}}, std::to_string(overlaps), "==", "0", overlaps == 0});

  for (unsigned q = 0; q < p; ++q) {
    std::size_t bad = 0;
    const std::size_t block = std::size_t{1} << q;
    for (std::size_t i = 1; i <= cells.size(); ++i) {
      const std::size_t r = (i - 1) % block + 1;
      if (!cells[i - 1].contains(st.characters[i - 1]) || !cells[i - 1].subset_of(st.cells[q][r - 1])) ++bad;
    }
    cert.add({"cells_nested", {{"p", p}, {"q", q}}, std::to_string(bad), "==", "0", bad == 0});
  }
}

void final_rows(Certificate& cert, const ConstructionState& st, const DefectSeries& d, std::uint64_t start) {
  const auto& N = st.cutoffs;
  for (unsigned j = 0; j < st.depth; ++j) {
    if (N[j + 1] == 0) continue;
    cert.add(bound_row("final_decay", {{"j", j}, {"from", N[j]}, {"to", N[j + 1] - 1}},
                       range_max(d, start, N[j], N[j + 1] - 1), two_pow_neg(static_cast<int>(j) - 1), false));
  }
}

Certificate emit_rows(const ConstructionState& st, std::uint64_t start, const DefectProvider& provider) {
  Certificate cert;
  for (unsigned p = 0; p < st.depth; ++p) {
    for (std::uint64_t s = 1; s <= (std::uint64_t{1} << p); ++s) step_rows(cert, st, provider(p, s), start, p, s);
    level_rows(cert, st, provider(p + 1, 0), start, p + 1);
  }
  if (st.depth > 0) final_rows(cert, st, provider(st.depth, 0), start);
  return cert;
}

/// Closed-form weights of sigma_{p,s} over chi_1 .. chi_{2^p + s}.
Weights closed_form_weights(unsigned p, std::uint64_t s) {
  const std::uint64_t half = std::uint64_t{1} << p;
  Weights w(half + s);
  for (std::uint64_t i = 1; i <= half + s; ++i)
    w[i - 1] = (i <= s || i > half) ? two_pow_neg(static_cast<int>(p) + 1) : two_pow_neg(static_cast<int>(p));
  return w;
}

bool prefix_ok(const ConstructionState& st, const DefectSeries& d, std::uint64_t start, unsigned p) {
  const auto& N = st.cutoffs;
  for (unsigned j = 0; j < p; ++j)
    if (!strictly_below(range_max(d, start, N[j], N[j + 1]), two_pow_neg(static_cast<int>(j) - 1))) return false;
  return strictly_below(range_max(d, start, N[p], st.horizon), two_pow_neg(static_cast<int>(p) - 1));
}

} // namespace

ConstructionResult construct_wm_measure(const CharacterFamily& family, const GroupSequence& seq,
                                        const ConstructionOptions& opt) {
  if (seq.primes != family.primes()) throw ModulusMismatch("sequence and character family live on different groups");
  if (opt.horizon < seq.start) throw std::invalid_argument("horizon precedes the first sequence index");
  if (opt.depth > 20) throw std::invalid_argument("construction depth above 20 is not supported");

  ConstructionState st;
  st.depth = opt.depth;
  st.horizon = opt.horizon;
  st.characters.push_back(family.identity());
  st.cutoffs.push_back(seq.start);
  st.cells.push_back({Cylinder{0, family.identity()}});

  RootTable table(seq, opt.horizon);
  table.add(st.characters[0]);
  const std::uint64_t start = seq.start;

  // weights[p][s] = sigma_{p,s} as maintained incrementally (s = 0 is sigma_p)
  std::vector<std::vector<Weights>> stages{{Weights{Rational(1)}}};

  for (unsigned p = 0; p < opt.depth; ++p) {
    const std::uint64_t half = std::uint64_t{1} << p;
    const Rational moved = two_pow_neg(static_cast<int>(p) + 1);
    st.cells.emplace_back(2 * half, Cylinder{0, family.identity()});
    std::uint64_t schedule = 0;
    if (!opt.agreement_schedule.empty())
      schedule = opt.agreement_schedule[std::min<std::size_t>(p, opt.agreement_schedule.size() - 1)];
    std::uint64_t prev_cut = st.cutoffs[p];
    Weights w = stages[p][0];

    for (std::uint64_t s = 1; s <= half; ++s) {
      const Character& near = st.characters[s - 1];
      const Cylinder& cell = st.cells[p][s - 1];
      std::uint64_t m = std::max(cell.depth, schedule);
      unsigned attempts = 0;
      std::optional<Character> chosen;
      Weights trial;
      DefectSeries d;
      while (true) {
        ++attempts;
        auto cand = family.pick(near, m, st.characters);
        if (!cand)
          throw ConstructionError("no character of the family agrees with chi_" + std::to_string(s) +
                                  " to depth " + std::to_string(m) + " inside the window (p = " +
                                  std::to_string(p) + ")");
        table.add(*cand);
        trial = w;
        trial[s - 1] -= moved;
        trial.push_back(moved);
        d = table.defects(trial);
        if (prefix_ok(st, d, start, p)) {
          chosen = std::move(cand);
          break;
        }
        // rejected: look closer to chi_s
        table.pop();
        m += std::max<std::uint64_t>(opt.agreement_step, 1);
      }

      // N_{p,s}: first n past prev_cut from which every defect up to the horizon is below 2^{-(p+2)}
      const Rational tail_bound = two_pow_neg(static_cast<int>(p) + 2);
      std::uint64_t last_bad = start;
      bool any_bad = false;
      for (std::uint64_t n = opt.horizon + 1; n-- > start;) {
        if (!strictly_below(d[n - start], tail_bound)) {
          last_bad = n;
          any_bad = true;
          break;
        }
      }
      const std::uint64_t cut = std::max(prev_cut + 1, any_bad ? last_bad + 1 : start);
      if (cut > opt.horizon)
        throw ConstructionError("horizon " + std::to_string(opt.horizon) + " is too small to place N_{" +
                                std::to_string(p) + "," + std::to_string(s) + "}");

      const std::uint64_t split = std::max(cell.depth, near.first_difference(*chosen));
      st.cells[p + 1][s - 1] = Cylinder{split, near};
      st.cells[p + 1][half + s - 1] = Cylinder{split, *chosen};
      st.characters.push_back(std::move(*chosen));
      st.steps.push_back({p, s, m, attempts, cut});
      w = std::move(trial);
      Rational total(0);
      for (const auto& x : w) total += x;
      if (total != Rational(1)) throw CertificateFailure("stage weights no longer sum to 1");
      stages[p].push_back(w);
      prev_cut = cut;
    }
    st.cutoffs.push_back(prev_cut);
    stages.push_back({w});
  }

  const DefectProvider cached = [&](unsigned p, std::uint64_t s) { return table.defects(stages[p][s]); };
  Certificate cert = emit_rows(st, start, cached);
  if (const auto* bad = cert.first_failure())
    throw CertificateFailure("construction row " + bad->id + " " + bad->params.dump() + " failed: " + bad->left +
                             " " + bad->relation + " " + bad->bound);

  std::vector<Atom> atoms;
  const Weights& final_w = stages[opt.depth][0];
  for (std::size_t i = 0; i < final_w.size(); ++i) atoms.push_back({st.characters[i], final_w[i]});
  return {AtomicMeasure::from_atoms(std::move(atoms)), std::move(st), std::move(cert)};
}

AtomicMeasure stage_measure(const ConstructionState& state, unsigned p, std::uint64_t s) {
  if (p > state.depth || (p == state.depth && s != 0) || s > (std::uint64_t{1} << p))
    throw std::out_of_range("no such construction stage");
  const Weights w = closed_form_weights(p, s);
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < w.size(); ++i) atoms.push_back({state.characters.at(i), w[i]});
  return AtomicMeasure::from_atoms(std::move(atoms));
}

Certificate reverify(const ConstructionState& state, const GroupSequence& seq) {
  const DefectProvider direct = [&](unsigned p, std::uint64_t s) {
    const AtomicMeasure sigma = stage_measure(state, p, s);
    DefectSeries out;
    for (std::uint64_t n = seq.start; n <= state.horizon; ++n) out.push_back(rigidity_defect_exact(sigma, seq.term(n)));
    return out;
  };
  return emit_rows(state, seq.start, direct);
}

bool certificates_agree(const Certificate& a, const Certificate& b, double tol) {
  if (a.rows.size() != b.rows.size()) return false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const auto& x = a.rows[i];
    const auto& y = b.rows[i];
    if (x.id != y.id || x.params != y.params || x.pass != y.pass || x.relation != y.relation || x.bound != y.bound)
      return false;
    if (x.left == y.left) continue;
    try {
      if (std::abs(to_double(parse_rational(x.left)) - to_double(parse_rational(y.left))) > tol) return false;
    } catch (const std::exception&) {
      try {
        if (std::abs(std::stod(x.left) - std::stod(y.left)) > tol) return false;
      } catch (const std::exception&) {
        return false;
      }
    }
  }
  return true;
}

Certificate cell_mass_check(const ConstructionState& state, const AtomicMeasure& sigma) {
  Certificate cert;
  for (std::size_t q = 0; q < state.cells.size(); ++q) {
    const Rational expected = two_pow_neg(static_cast<int>(q));
    for (std::size_t r = 0; r < state.cells[q].size(); ++r) {
      Rational mass(0);
      for (const auto& atom : sigma.atoms())
        if (state.cells[q][r].contains(atom.chi)) mass += atom.weight;
      cert.add({"cell_mass", {{"q", q}, {"r", r + 1}}, to_string(mass), "==", to_string(expected), mass == expected});
    }
  }
  return cert;
}

} // namespace rigidseq
