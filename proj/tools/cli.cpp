#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "rigidseq/cfrac.hpp"
#include "rigidseq/dualgroup.hpp"
#include "rigidseq/errors.hpp"
#include "rigidseq/folner.hpp"
#include "rigidseq/measures.hpp"
#include "rigidseq/pisot.hpp"
#include "rigidseq/recurrence.hpp"

namespace rigidseq::cli {

namespace {

using nlohmann::json;

class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------ options

/// Options that may also come from the config file.
class Registry {
public:
  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    auto* opt = app->add_option("--" + name, var, help);
    setters_[name] = {opt, [&var](const json& j) { var = j.get<T>(); }};
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    auto* opt = app->add_flag("--" + name, var, help);
    setters_[name] = {opt, [&var](const json& j) { var = j.get<bool>(); }};
    return opt;
  }

  /// Fills every option not given on the command line; returns false for an unknown key.
  bool apply(const std::string& key, const json& value) const {
    const auto it = setters_.find(key);
    if (it == setters_.end()) return false;
    if (it->second.first->count() > 0) return true;  // the flag wins
    try {
      it->second.second(value);
    } catch (const json::exception& e) {
      throw ValidationError("config key '" + key + "': " + e.what());
    }
    return true;
  }

private:
  std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> setters_;
};

struct Common {
  std::string output;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string config;
  bool reverify = false;
};

struct CfracOpts {
  std::string alpha = "fibonacci";
  std::uint32_t p = 2;
  unsigned n = 8;
  std::int64_t precision = 0;
  std::string num, den, series;
};

struct PisotOpts {
  std::string example = "fibonacci";
  std::uint32_t p = 2;
  unsigned n = 30;
  std::int64_t precision = 0;
  std::string coeffs;
  int degree = 2;
  int slope = 1;
  std::string real_coeffs;
};

struct RigidityOpts {
  std::string example = "geometric";
  std::uint32_t p = 2;
  unsigned depth = 3;
  std::uint64_t horizon = 100;
  std::string index_set = "2:0";
  std::vector<std::uint64_t> schedule;
  std::uint64_t step = 1;
  std::string certificate;
};

struct PairingOpts {
  std::string example = "geometric";
  std::uint32_t p = 2;
  std::uint64_t samples = 50;
  std::uint64_t n_max = 20;
  std::string index_set = "2:0";
  std::string x, a;
};

struct FolnerOpts {
  std::string table = "tiles";
  std::vector<std::uint32_t> primes{2};
  std::uint64_t min_depth = 2;
  std::uint64_t max_depth = 6;
  std::uint64_t depth = 2;
};

struct RecurrenceOpts {
  std::vector<std::uint32_t> moduli{2, 2, 2};
  std::string R = "weight-one";
  std::string delta = "1/2";
  std::uint64_t budget = kDefaultBudget;
};

struct CubesOpts {
  std::vector<std::uint32_t> k{2};
  unsigned d = 2;
  std::string delta = "3/4";
  std::string eps = "1/2";
  std::string mode = "exhaustive";
  std::uint64_t samples = 100;
  std::uint64_t budget = kDefaultBudget;
};

// ------------------------------------------------------------ helpers

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

class Csv {
public:
  Csv(const std::string& table, const std::vector<std::pair<std::string, std::string>>& meta,
      const std::vector<std::string>& columns) {
    text_ << "# rigidseq schema_version=" << kSchemaVersion << " table=" << table;
    for (const auto& [k, v] : meta) text_ << ' ' << k << '=' << v;
    text_ << '\n';
    row(columns);
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) text_ << (i ? "," : "") << csv_field(fields[i]);
    text_ << '\n';
  }
  void comment(const std::string& s) { text_ << "# " << s << '\n'; }
  std::string str() const { return text_.str(); }

private:
  std::ostringstream text_;
};

std::int64_t int_arg(const std::string& name, const std::string& text) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ValidationError("--" + name + ": '" + text + "' is not an integer");
}

std::string b(bool v) { return v ? "true" : "false"; }

/// "p^-3" -> "-3"; the zero absolute value prints as "-inf".
std::string exponent_field(const std::string& abs) {
  if (abs.rfind("p^", 0) == 0) return abs.substr(2);
  return abs == "0" ? "-inf" : abs;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

PrimeModulus prime(std::uint32_t p) {
  if (!is_prime(p) || p >= (1u << 31)) throw ValidationError("--p must be a prime below 2^31, got " + std::to_string(p));
  return PrimeModulus(p);
}

Rational rational_arg(const std::string& name, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception& e) {
    throw ValidationError("--" + name + ": " + e.what());
  }
}

json header(const std::string& command) { return {{"schema_version", kSchemaVersion}, {"command", command}}; }

json rows_json(const Certificate& cert) {
  json rows = json::array();
  for (const auto& r : cert.rows) rows.push_back(to_json(r));
  return rows;
}

struct Result {
  std::string text;
  bool ok = true;
};

// ------------------------------------------------------------ cfrac

Result cmd_cfrac(const CfracOpts& o, const Common& c) {
  const PrimeModulus p = prime(o.p);
  std::optional<Laurent> series;
  const CFExpansion cf = [&] {
    if (o.alpha == "fibonacci" || o.alpha == "series") {
      const std::int64_t prec = o.precision > 0 ? o.precision : 4 * (static_cast<std::int64_t>(o.n) + 2) + 16;
      series = o.alpha == "fibonacci" ? fibonacci_alpha(p, prec) : Laurent::parse(o.series);
      return cf_expand(*series, o.n, prec);
    }
    if (o.alpha == "rational") {
      const RationalFunction r{Poly::parse_body(o.num, p), Poly::parse_body(o.den, p)};
      if (r.den.is_zero()) throw ValidationError("--den must be nonzero");
      return cf_expand(r, o.n);
    }
    throw ValidationError("--alpha must be fibonacci, rational or series");
  }();
  const Convergents conv = convergents(cf);
  const Certificate approx = cf.rational ? verify_approx(*cf.rational, conv) : verify_approx(*series, conv);
  const Certificate det = verify_determinants(conv);

  Csv csv("cfrac", {{"p", std::to_string(o.p)}, {"alpha", o.alpha}},
          {"n", "a_n", "q_n", "deg_q_n", "norm_exponent", "p_n", "approx_exponent", "approx_pass", "norm_pass",
           "det_pass"});
  for (std::size_t n = 0; n < conv.q.size(); ++n) {
    const auto& ra = approx.rows[2 * n];
    const auto& rn = approx.rows[2 * n + 1];
    csv.row({std::to_string(n), cf.quotients[n].body(), conv.q[n].body(), std::to_string(conv.q[n].degree()),
             exponent_field(rn.left), conv.p[n].body(), exponent_field(ra.left), b(ra.pass), b(rn.pass),
             n == 0 ? "" : b(det.rows[n - 1].pass)});
  }
  bool ok = approx.passed() && det.passed();
  if (c.reverify) {
    // ||q_n alpha|| = |q_{n+1}|^{-1}, from the series rather than the quotients
    const Laurent& a = series ? *series : cf.alpha;
    bool agree = true;
    std::size_t checked = 0;
    for (std::size_t n = 0; n + 1 < conv.q.size(); ++n) {
      const Laurent err = Laurent::from_poly(conv.q[n]) * a - Laurent::from_poly(conv.p[n]);
      if (!err.has_known_nonzero()) break;
      agree = agree && err.top() == -static_cast<std::int64_t>(conv.q[n + 1].degree());
      ++checked;
    }
    csv.comment("reverify_rows=" + std::to_string(checked));
    csv.comment("reverified=" + b(agree));
    ok = ok && agree;
  }
  return {csv.str(), ok};
}

// ------------------------------------------------------------ pisot

Result cmd_pisot_real(const PisotOpts& o) {
  RealPVSpec spec;
  if (o.example == "golden")
    spec = golden_ratio_spec();
  else if (o.example == "plastic")
    spec = plastic_number_spec();
  else {
    spec.name = "custom";
    std::stringstream ss(o.real_coeffs);
    std::string tok;
    while (std::getline(ss, tok, ',')) spec.c.push_back(int_arg("real-coeffs", tok));
    if (spec.c.empty()) throw ValidationError("--real-coeffs needs c_{d-1},...,c_0");
    std::reverse(spec.c.begin(), spec.c.end());
  }
  const RealPVTable t = real_pv_table(spec, o.n);
  Csv csv("pisot-real", {{"example", o.example}, {"alpha", fmt(t.alpha)}, {"conjugate_modulus", fmt(t.conjugate_modulus)},
                         {"tail_start", std::to_string(t.tail_start)}},
          {"n", "trace", "nearest", "norm_power", "norm_nearest_times_alpha", "decay_bound"});
  for (const auto& r : t.rows)
    csv.row({std::to_string(r.n), std::to_string(r.trace), std::to_string(r.nearest), fmt(r.norm_power),
             fmt(r.norm_nearest_times_alpha), fmt(r.decay_bound)});
  return {csv.str(), true};
}

MonicIntPoly parse_coeffs(const std::string& text, PrimeModulus p) {
  // "c_{d-1};...;c_0"
  std::vector<Poly> desc;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ';')) desc.push_back(Poly::parse_body(tok, p));
  if (desc.empty()) throw ValidationError("--coeffs needs c_{d-1};...;c_0");
  return MonicIntPoly(std::vector<Poly>(desc.rbegin(), desc.rend()));
}

Result cmd_pisot(const PisotOpts& o, const Common& c) {
  if (o.example == "golden" || o.example == "plastic" || o.example == "real") return cmd_pisot_real(o);
  const PrimeModulus p = prime(o.p);
  std::optional<MonicIntPoly> f;
  if (o.example == "fibonacci") {
    f = MonicIntPoly({Poly::constant(p, 1), Poly::monomial(p, 1)});
  } else if (o.example == "custom") {
    f = parse_coeffs(o.coeffs, p);
  } else if (o.example == "random") {
    if (o.degree < 1 || o.slope < 1) throw ValidationError("--degree and --slope must be positive");
    std::mt19937_64 rng(c.seed);
    f = random_pv_poly(p, o.degree, o.slope, rng);
  } else {
    throw ValidationError("--example must be fibonacci, custom, random, golden, plastic or real");
  }
  const NewtonPolygon np = newton_polygon(*f);
  json j = header("pisot");
  j["p"] = o.p;
  j["minpoly"] = f->str();
  j["slopes"] = json::array();
  for (const auto& sl : np.slopes) j["slopes"].push_back({{"value", to_string(sl.value)}, {"multiplicity", sl.multiplicity}});
  j["zero_roots"] = np.zero_roots;
  j["pv"] = is_pv(*f);
  if (!j["pv"].get<bool>()) return {j.dump(2) + "\n", true};

  const std::int64_t s = static_cast<std::int64_t>(std::ceil(to_double(np.slopes.front().value)));
  std::int64_t low = 0;
  for (const auto& sl : np.slopes)
    low = std::max<std::int64_t>(low, static_cast<std::int64_t>(std::ceil(-to_double(sl.value))));
  const std::int64_t n = o.n;
  const std::int64_t prec = o.precision > 0 ? o.precision : (n - 1) * s + n * low + 16;

  // An explicit --precision is honoured as given; the automatic one grows
  // until every norm resolves.
  const AdaptiveNormDecay ad = o.precision > 0 ? AdaptiveNormDecay{pv_root(*f, prec), {}}
                                               : pv_norm_decay_adaptive(*f, o.n, prec);
  const PVElement& e = ad.element;
  const NormDecay nd = o.precision > 0 ? pv_norm_decay(e, o.n) : ad.decay;
  const auto traces = trace_sequence(*f, o.n);
  const auto floors = pv_floor_powers(e, o.n);

  j["precision"] = e.root.precision().value_or(prec);
  j["root"] = e.root.str();
  json tr = json::array(), fl = json::array(), ne = json::array();
  for (unsigned k = 0; k <= o.n; ++k) tr.push_back(traces[k].body());
  for (const auto& x : floors) fl.push_back(x.body());
  for (const auto& x : nd.norms) ne.push_back(x.is_zero() ? json(nullptr) : json(x.exponent()));
  j["traces"] = tr;
  j["floors"] = fl;
  j["norm_exponents"] = ne;
  j["certificate"] = rows_json(nd.certificate);
  bool ok = nd.certificate.passed();
  j["passed"] = ok;
  if (c.reverify) {
    // ||alpha^k|| = |s_k - alpha^k| from the trace, not the fractional part
    Laurent pw = e.root;
    bool agree = true;
    for (unsigned k = 1; k <= o.n && agree; ++k) {
      const Laurent diff = Laurent::from_poly(traces[k]) - pw;
      agree = diff.has_known_nonzero() && diff.abs() == nd.norms[k - 1];
      pw = pw * e.root;
    }
    j["reverified"] = agree;
    ok = ok && agree;
  }
  return {j.dump(2) + "\n", ok};
}

// ------------------------------------------------------------ rigidity

Result cmd_rigidity(const RigidityOpts& o, const Common& c) {
  const PrimeModulus p = prime(o.p);
  if (o.depth > 12) throw ValidationError("--depth above 12 is not supported");
  std::unique_ptr<CharacterFamily> family;
  GroupSequence seq;
  if (o.example == "geometric") {
    family = c0_geometric_family(p, o.p * (2 * o.horizon + 2));
    seq = geometric_sequence(p);
  } else if (o.example == "indexset") {
    const IndexSet I = IndexSet::parse(o.index_set);
    family = c0_indexset_family(I, p, 2 * o.horizon + 2);
    seq = indexset_sequence(I, p);
  } else if (o.example == "monomial") {
    family = finite_support_family({o.p}, {2 * o.horizon + 2});
    seq = monomial_sequence(p);
  } else {
    throw ValidationError("--example must be geometric, indexset or monomial");
  }
  ConstructionOptions opt;
  opt.depth = o.depth;
  opt.horizon = o.horizon;
  opt.agreement_schedule = o.schedule;
  opt.agreement_step = o.step;
  const ConstructionResult res = construct_wm_measure(*family, seq, opt);
  const Certificate masses = cell_mass_check(res.state, res.sigma);

  json j = header("rigidity");
  j["params"] = {{"example", o.example}, {"p", o.p},          {"depth", o.depth},
                 {"horizon", o.horizon}, {"family", family->name()}, {"sequence", seq.name}};
  j["cutoffs"] = res.state.cutoffs;
  j["state"] = to_json(res.state);
  j["measure"] = to_json(res.sigma);
  j["certificate"] = rows_json(res.certificate);
  j["cell_masses"] = rows_json(masses);
  bool ok = res.certificate.passed() && masses.passed();
  j["passed"] = ok;
  if (c.reverify) {
    const bool agree = certificates_agree(res.certificate, reverify(res.state, seq));
    j["reverified"] = agree;
    ok = ok && agree;
  }
  if (!o.certificate.empty()) {
    std::ofstream f(o.certificate);
    if (!f) throw std::runtime_error("cannot write " + o.certificate);
    f << to_json_lines(res.certificate) << to_json_lines(masses);
  }
  return {j.dump(2) + "\n", ok};
}

// ------------------------------------------------------------ pairing

Poly as_poly(const GroupElt& g, PrimeModulus p) { return Poly(p, g.block(0)); }

Result cmd_pairing(const PairingOpts& o, const Common& c) {
  if (!o.x.empty() || !o.a.empty()) {
    if (o.x.empty() || o.a.empty()) throw ValidationError("--x and --a go together");
    const Laurent x = Laurent::parse(o.x);
    const Poly a = Poly::parse(o.a);
    const RootOfUnity z = poly_pair(x, a);
    json j = header("pairing");
    j["x"] = x.str();
    j["a"] = a.str();
    j["residue"] = z.residue();
    j["order"] = z.order();
    j["root"] = z.str();
    return {j.dump(2) + "\n", true};
  }
  const PrimeModulus p = prime(o.p);
  if (o.n_max < 1) throw ValidationError("--n-max must be at least 1");
  std::mt19937_64 rng(c.seed);
  GroupSequence seq;
  std::optional<IndexSet> I;
  if (o.example == "geometric") {
    seq = geometric_sequence(p);
  } else if (o.example == "indexset") {
    I = IndexSet::parse(o.index_set);
    seq = indexset_sequence(*I, p);
  } else {
    throw ValidationError("--example must be geometric or indexset");
  }
  std::vector<Poly> terms;
  std::size_t depth = 1;
  for (std::uint64_t n = seq.start; n <= o.n_max; ++n) {
    terms.push_back(as_poly(seq.term(n), p));
    depth = std::max<std::size_t>(depth, static_cast<std::size_t>(terms.back().degree() + 1));
  }
  Csv csv("pairing", {{"p", std::to_string(o.p)}, {"example", o.example}, {"seed", std::to_string(c.seed)}},
          {"sample", "n", "residue", "order", "is_one"});
  bool ok = true;
  for (std::uint64_t i = 0; i < o.samples; ++i) {
    const Laurent x = I ? c0_random_indexset(*I, p, depth, rng) : c0_random_geometric(p, (depth + o.p - 1) / o.p, rng);
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const RootOfUnity z = poly_pair(x, terms[k]);
      ok = ok && z.is_one();
      csv.row({std::to_string(i), std::to_string(seq.start + k), std::to_string(z.residue()), std::to_string(z.order()),
               b(z.is_one())});
    }
  }
  return {csv.str(), ok};
}

// ------------------------------------------------------------ folner

Result cmd_folner(const FolnerOpts& o, const Common& c) {
  for (auto q : o.primes) prime(q);
  std::string blocks;
  for (auto q : o.primes) blocks += (blocks.empty() ? "" : ";") + std::to_string(q);
  bool ok = true;
  if (o.table == "tiles") {
    if (o.min_depth >= o.max_depth) throw ValidationError("--min-depth must be below --max-depth");
    Csv csv("folner-tiles", {{"primes", blocks}},
            {"N", "M", "shifts", "disjoint", "leftover", "density", "expected", "max_tile_hits", "pass"});
    for (std::uint64_t n = o.min_depth; n < o.max_depth; ++n)
      for (std::uint64_t m = n + 1; m <= o.max_depth; ++m) {
        const TileCover cover = box_tile_shifts(o.primes, n, m);
        const TileDensityReport dens = tile_density_check(o.primes, n, m);
        bool pass = cover.exact() && dens.passed();
        if (c.reverify) {
          const TileCover greedy = greedy_tiling_cover(box(o.primes, n), box(o.primes, m));
          pass = pass && greedy.exact() && greedy.shifts.size() == cover.shifts.size();
        }
        ok = ok && pass;
        csv.row({std::to_string(n), std::to_string(m), std::to_string(cover.shifts.size()), b(cover.disjoint),
                 std::to_string(cover.leftover), to_string(dens.density), to_string(dens.expected),
                 std::to_string(dens.max_tile_hits), b(pass)});
      }
    return {csv.str(), ok};
  }
  if (o.table == "defects") {
    const FiniteSubset F = box(o.primes, o.depth);
    Csv csv("folner-defects", {{"primes", blocks}, {"N", std::to_string(o.depth)}},
            {"block", "coordinate", "defect", "expected", "pass"});
    for (std::size_t j = 0; j < o.primes.size(); ++j)
      for (std::uint64_t coord = 1; coord <= o.depth + 2; ++coord) {
        FiniteSubset K(o.primes);
        K.insert(GroupElt::basis(o.primes, j, coord));
        const Rational d = invariance_defect(K, F);
        const Rational expected = coord <= o.depth ? Rational(0) : Rational(2);
        ok = ok && d == expected;
        csv.row({std::to_string(j), std::to_string(coord), to_string(d), to_string(expected), b(d == expected)});
      }
    return {csv.str(), ok};
  }
  if (o.table == "interval") {
    Csv csv("folner-interval", {}, {"j", "N", "shifts", "disjoint", "leftover", "defect_K1"});
    for (unsigned n = 0; n <= o.max_depth; ++n)
      for (unsigned j = 0; j <= n; ++j) {
        const IntervalTiling t = interval_self_tiling(j, n);
        const std::int64_t one[] = {1};
        ok = ok && t.disjoint && t.leftover == 0;
        csv.row({std::to_string(j), std::to_string(n), std::to_string(t.shifts.size()), b(t.disjoint),
                 std::to_string(t.leftover), to_string(interval_invariance_defect(one, 1, std::int64_t{1} << n))});
      }
    return {csv.str(), ok};
  }
  throw ValidationError("--table must be tiles, defects or interval");
}

// ------------------------------------------------------------ recurrence

std::vector<std::uint64_t> parse_R(const std::string& spec, const FiniteAbelian& G) {
  std::vector<std::uint64_t> R;
  if (spec == "empty") return R;
  if (spec == "nonzero" || spec == "weight-one") {
    for (std::uint64_t x = 1; x < G.order(); ++x) {
      const auto v = G.decode(x);
      const auto nz = std::count_if(v.begin(), v.end(), [](std::uint32_t t) { return t != 0; });
      if (spec == "nonzero" || (nz == 1 && std::count(v.begin(), v.end(), 1u) == 1)) R.push_back(x);
    }
    return R;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::vector<std::uint32_t> coords;
    std::stringstream es(tok);
    std::string part;
    while (std::getline(es, part, ':')) {
      const std::int64_t v = int_arg("R", part);
      if (v < 0) throw ValidationError("--R coordinates must be nonnegative");
      coords.push_back(static_cast<std::uint32_t>(v));
    }
    if (coords.size() != G.moduli().size())
      throw ValidationError("R element '" + tok + "' does not have one coordinate per factor");
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] >= G.moduli()[i]) throw ValidationError("R element '" + tok + "' has a coordinate out of range");
    R.push_back(G.encode(coords));
  }
  return R;
}

json coords_json(const FiniteAbelian& G, const std::vector<std::uint64_t>& xs) {
  json out = json::array();
  for (auto x : xs) out.push_back(G.decode(x));
  return out;
}

Result cmd_recurrence(const RecurrenceOpts& o, const Common& c) {
  if (o.moduli.empty()) throw ValidationError("--moduli needs at least one factor");
  for (auto m : o.moduli)
    if (m < 2) throw ValidationError("--moduli entries must be at least 2");
  const Rational delta = rational_arg("delta", o.delta);
  if (delta <= Rational(0) || delta > Rational(1)) throw ValidationError("--delta must lie in (0, 1]");
  FiniteModel model{FiniteAbelian(o.moduli), {}, delta};
  model.R = parse_R(o.R, model.group);
  const RecurrenceVerdict v = delta_recurrence_bruteforce(model, o.budget);

  json j = header("recurrence");
  j["group"] = o.moduli;
  j["R"] = coords_json(model.group, model.R);
  j["delta"] = to_string(delta);
  j["subset_size"] = v.subset_size;
  j["verdict"] = v.pass ? "pass" : "counterexample";
  j["counterexample"] = v.counterexample ? coords_json(model.group, *v.counterexample) : json(nullptr);
  j["nodes"] = v.nodes;
  bool ok = true;
  if (c.reverify && v.counterexample) {
    // the difference set must avoid R
    bool avoids = true;
    for (auto x : *v.counterexample)
      for (auto y : *v.counterexample)
        avoids = avoids && std::find(model.R.begin(), model.R.end(), model.group.sub(x, y)) == model.R.end();
    j["reverified"] = avoids;
    ok = avoids;
  }
  return {j.dump(2) + "\n", ok};
}

// ------------------------------------------------------------ cubes

Result cmd_cubes(const CubesOpts& o, const Common& c) {
  CubeInstance inst{o.k, o.d, rational_arg("delta", o.delta), rational_arg("eps", o.eps)};
  CubeMode mode;
  if (o.mode == "exhaustive")
    mode = CubeMode::Exhaustive;
  else if (o.mode == "sampled")
    mode = CubeMode::Sampled;
  else
    throw ValidationError("--mode must be exhaustive or sampled");
  for (auto k : o.k)
    if (k < 2) throw ValidationError("--k entries must be at least 2");
  if (o.d < 1) throw ValidationError("--d must be at least 1");
  if (inst.delta <= Rational(0) || inst.delta > Rational(1)) throw ValidationError("--delta must lie in (0, 1]");
  if (inst.eps <= Rational(0)) throw ValidationError("--eps must be positive");

  // past the exhaustive budget the search falls back to sampling and says so
  std::string fallback;
  const CubeVerdict v = [&] {
    if (mode == CubeMode::Exhaustive) {
      try {
        return cube_lemma_check(inst, mode, o.samples, c.seed, c.threads, o.budget);
      } catch (const BudgetExceeded& e) {
        fallback = e.what();
      }
    }
    return cube_lemma_check(inst, CubeMode::Sampled, o.samples, c.seed, c.threads, o.budget);
  }();
  const FiniteAbelian G = cube_group(inst);
  const std::uint64_t bound = mcdiarmid_bound(to_double(inst.delta), to_double(inst.eps));

  json j = header("cubes");
  j["params"] = {{"k", o.k}, {"d", o.d}, {"delta", to_string(inst.delta)}, {"eps", to_string(inst.eps)}, {"mode", o.mode}};
  j["verdict"] = CubeVerdict::name(v.status);
  j["sampled"] = v.sampled;
  if (!fallback.empty()) j["fallback"] = fallback;
  j["sets_checked"] = v.sets_checked;
  j["worst_distance"] = v.worst_distance;
  j["worst_set"] = coords_json(G, v.worst_set);
  j["target"] = G.decode(v.worst_target);
  j["witness"] = {{"a", G.decode(v.witness_a)}, {"b", G.decode(v.witness_b)}};
  j["mcdiarmid_bound"] = bound;
  j["d_exceeds_bound"] = o.d > bound;
  bool ok = v.status == CubeVerdict::Status::Pass;
  if (c.reverify && !v.worst_set.empty()) {
    const double direct = cube_metric(inst, G.sub(v.witness_a, v.witness_b), v.worst_target);
    const bool agree = std::abs(direct - v.worst_distance) < kCubeGuard;
    j["reverified"] = agree;
    ok = ok && agree;
  }
  return {j.dump(2) + "\n", ok};
}

// ------------------------------------------------------------ dispatch

std::string error_json(const std::string& type, const std::string& message) {
  json j = {{"schema_version", kSchemaVersion}};
  j["error"] = {{"type", type}, {"message", message}};
  return j.dump() + "\n";
}

void load_config(const std::string& path, const std::string& command, const Registry& global, const Registry& local) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot read config file " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") {
      if (value != command) throw ValidationError("config file is for '" + value.dump() + "', not '" + command + "'");
      continue;
    }
    if (key == "config") throw ValidationError("config files cannot nest");
    if (!local.apply(key, value) && !global.apply(key, value))
      throw ValidationError("unknown config key '" + key + "' for " + command);
  }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigidity sequences, PV elements and recurrence checks over F_p[t] and its dual"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "rigidseq 0.1.0");

  Common common;
  Registry global;
  global.option(&app, "output", common.output, "Write results to this file instead of stdout");
  global.option(&app, "seed", common.seed, "Seed for every random choice");
  global.option(&app, "threads", common.threads, "Worker threads for sampled searches")->check(CLI::PositiveNumber);
  app.add_option("--config", common.config, "JSON config file; command-line flags win");
  global.flag(&app, "reverify", common.reverify, "Recheck results along an independent path");

  std::map<std::string, Registry> regs;
  CfracOpts cfrac;
  PisotOpts pisot;
  RigidityOpts rigidity;
  PairingOpts pairing;
  FolnerOpts folner;
  RecurrenceOpts recurrence;
  CubesOpts cubes;

  auto* sc = app.add_subcommand("cfrac", "Continued fraction expansion and convergent checks");
  {
    auto& r = regs["cfrac"];
    r.option(sc, "alpha", cfrac.alpha, "fibonacci | rational | series");
    r.option(sc, "p", cfrac.p, "Prime p");
    r.option(sc, "n", cfrac.n, "Number of partial quotients after a_0");
    r.option(sc, "precision", cfrac.precision, "Series precision (0 = automatic)");
    r.option(sc, "num", cfrac.num, "Numerator for --alpha rational, e.g. t^3+1");
    r.option(sc, "den", cfrac.den, "Denominator for --alpha rational");
    r.option(sc, "series", cfrac.series, "Series for --alpha series, e.g. 't+t^-1 mod 2 ; prec 40'");
  }
  auto* sp = app.add_subcommand("pisot", "PV elements: floors of powers and norm decay");
  {
    auto& r = regs["pisot"];
    r.option(sp, "example", pisot.example, "fibonacci | custom | random | golden | plastic | real");
    r.option(sp, "p", pisot.p, "Prime p");
    r.option(sp, "n", pisot.n, "Largest power");
    r.option(sp, "precision", pisot.precision, "Root precision (0 = automatic)");
    r.option(sp, "coeffs", pisot.coeffs, "c_{d-1};...;c_0 of x^d = sum c_i x^i, for --example custom");
    r.option(sp, "degree", pisot.degree, "Degree for --example random");
    r.option(sp, "slope", pisot.slope, "Dominant slope for --example random");
    r.option(sp, "real-coeffs", pisot.real_coeffs, "c_{d-1},...,c_0 over Z, for --example real");
  }
  auto* sr = app.add_subcommand("rigidity", "Build a weakly mixing measure and its certificate");
  {
    auto& r = regs["rigidity"];
    r.option(sr, "example", rigidity.example, "geometric | indexset | monomial");
    r.option(sr, "p", rigidity.p, "Prime p");
    r.option(sr, "depth", rigidity.depth, "Induction depth P");
    r.option(sr, "horizon", rigidity.horizon, "Largest sequence index checked");
    r.option(sr, "index-set", rigidity.index_set, "Index set I as period:residues, e.g. 2:0");
    r.option(sr, "schedule", rigidity.schedule, "Starting agreement depth per level")->delimiter(',');
    r.option(sr, "step", rigidity.step, "Agreement depth increment after a rejected pick");
    r.option(sr, "certificate", rigidity.certificate, "Also write the certificate as JSON lines here");
  }
  auto* sa = app.add_subcommand("pairing", "Pairings <x, a> between series and polynomials");
  {
    auto& r = regs["pairing"];
    r.option(sa, "example", pairing.example, "geometric | indexset");
    r.option(sa, "p", pairing.p, "Prime p");
    r.option(sa, "samples", pairing.samples, "Random elements of C_0");
    r.option(sa, "n-max", pairing.n_max, "Largest sequence index");
    r.option(sa, "index-set", pairing.index_set, "Index set I as period:residues");
    r.option(sa, "x", pairing.x, "Single pairing: series, e.g. 't^-1 mod 2 ; prec 4'");
    r.option(sa, "a", pairing.a, "Single pairing: polynomial, e.g. 't+1 mod 2'");
  }
  auto* sf = app.add_subcommand("folner", "Box tilings, tile densities and invariance defects");
  {
    auto& r = regs["folner"];
    r.option(sf, "table", folner.table, "tiles | defects | interval");
    r.option(sf, "primes", folner.primes, "Block primes, e.g. 2 or 2,3")->delimiter(',');
    r.option(sf, "min-depth", folner.min_depth, "Smallest tile depth N");
    r.option(sf, "max-depth", folner.max_depth, "Largest window depth M");
    r.option(sf, "depth", folner.depth, "Box depth for --table defects");
  }
  auto* sy = app.add_subcommand("recurrence", "Brute-force delta-recurrence in a finite group");
  {
    auto& r = regs["recurrence"];
    r.option(sy, "moduli", recurrence.moduli, "Cyclic factors, e.g. 2,2,2")->delimiter(',');
    r.option(sy, "R", recurrence.R, "weight-one | nonzero | empty | explicit list like 0:0:1,0:1:0");
    r.option(sy, "delta", recurrence.delta, "Density threshold, e.g. 1/2");
    r.option(sy, "budget", recurrence.budget, "Largest number of subsets to consider");
  }
  auto* sk = app.add_subcommand("cubes", "Cube lemma search and concentration bounds");
  {
    auto& r = regs["cubes"];
    r.option(sk, "k", cubes.k, "Orders k_1,...,k_M")->delimiter(',');
    r.option(sk, "d", cubes.d, "Dimension d");
    r.option(sk, "delta", cubes.delta, "Density of A");
    r.option(sk, "eps", cubes.eps, "Distance threshold");
    r.option(sk, "mode", cubes.mode, "exhaustive | sampled");
    r.option(sk, "samples", cubes.samples, "Samples in sampled mode");
    r.option(sk, "budget", cubes.budget, "Largest number of sets in exhaustive mode");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << error_json("ValidationError", e.what());
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Result result;
  try {
    if (!common.config.empty()) load_config(common.config, command, global, regs.at(command));
    if (command == "cfrac")
      result = cmd_cfrac(cfrac, common);
    else if (command == "pisot")
      result = cmd_pisot(pisot, common);
    else if (command == "rigidity")
      result = cmd_rigidity(rigidity, common);
    else if (command == "pairing")
      result = cmd_pairing(pairing, common);
    else if (command == "folner")
      result = cmd_folner(folner, common);
    else if (command == "recurrence")
      result = cmd_recurrence(recurrence, common);
    else
      result = cmd_cubes(cubes, common);
  } catch (const ValidationError& e) {
    err << error_json("ValidationError", e.what());
    return 2;
  } catch (const ParseError& e) {
    err << error_json("ParseError", e.what());
    return 2;
  } catch (const PrecisionError& e) {
    err << error_json("PrecisionError", e.what());
    return 1;
  } catch (const WindowError& e) {
    err << error_json("WindowError", e.what());
    return 1;
  } catch (const BudgetExceeded& e) {
    err << error_json("BudgetExceeded", e.what());
    return 1;
  } catch (const CertificateFailure& e) {
    err << error_json("CertificateFailure", e.what());
    return 1;
  } catch (const ConstructionError& e) {
    err << error_json("ConstructionError", e.what());
    return 1;
  } catch (const std::exception& e) {
    err << error_json("ComputationError", e.what());
    return 1;
  }

  if (common.output.empty()) {
    out << result.text;
  } else {
    std::ofstream f(common.output, std::ios::binary);
    if (!f) {
      err << error_json("IOError", "cannot write " + common.output);
      return 1;
    }
    f << result.text;
  }
  if (!result.ok) err << error_json("CheckFailed", "one or more checks failed; see the output");
  return result.ok ? 0 : 1;
}

} // namespace rigidseq::cli
