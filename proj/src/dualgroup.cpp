#include "rigidseq/dualgroup.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

// ------------------------------------------------------------ RootOfUnity

RootOfUnity::RootOfUnity(std::uint64_t r, std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("root of unity of order 0");
  r %= m;
  const std::uint64_t g = std::gcd(r, m);
  r_ = r / g;
  m_ = m / g;
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  const std::uint64_t g = std::gcd(m_, o.m_);
  if (m_ / g > (std::uint64_t{1} << 62) / o.m_) throw std::overflow_error("root of unity order overflows");
  const std::uint64_t l = m_ / g * o.m_;
  // each term is below l < 2^62, so the sum cannot wrap
  return RootOfUnity(r_ * (l / m_) + o.r_ * (l / o.m_), l);
}

double RootOfUnity::distance_to_one() const {
  if (r_ == 0) return 0.0;
  if (2 * r_ == m_) return 2.0;
  return 2.0 * std::abs(std::sin(std::numbers::pi * static_cast<double>(r_) / static_cast<double>(m_)));
}

std::complex<double> RootOfUnity::value() const {
  if (r_ == 0) return {1.0, 0.0};
  if (2 * r_ == m_) return {-1.0, 0.0};
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r_) / static_cast<double>(m_));
}

std::string RootOfUnity::str() const { return "e(" + std::to_string(r_) + "/" + std::to_string(m_) + ")"; }

// ------------------------------------------------------------ helpers

namespace {

void check_primes(const std::vector<std::uint32_t>& primes) {
  for (auto p : primes)
    if (!is_prime(p)) throw std::invalid_argument("block modulus " + std::to_string(p) + " is not prime");
}

void require_same_blocks(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  if (a != b) throw ModulusMismatch("group elements live in different block structures");
}

void trim_vec(std::vector<std::uint32_t>& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

std::uint32_t reduce(std::int64_t v, std::uint32_t p) {
  const std::int64_t r = v % static_cast<std::int64_t>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

void put(std::vector<std::uint32_t>& block, std::uint64_t coord, std::uint32_t value) {
  if (coord == 0) throw std::out_of_range("coordinates are numbered from 1");
  if (value == 0 && coord > block.size()) return;
  if (coord > block.size()) block.resize(coord, 0);
  block[coord - 1] = value;
  trim_vec(block);
}

std::vector<std::uint32_t> combine(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                                   std::uint32_t p, bool subtract) {
  std::vector<std::uint32_t> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint32_t x = i < a.size() ? a[i] : 0;
    const std::uint32_t y = i < b.size() ? b[i] : 0;
    out[i] = subtract ? (x + p - y) % p : (x + y) % p;
  }
  trim_vec(out);
  return out;
}

std::vector<std::uint32_t> negate(const std::vector<std::uint32_t>& a, std::uint32_t p) {
  std::vector<std::uint32_t> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] == 0 ? 0 : p - a[i];
  return out;
}

} // namespace

// ------------------------------------------------------------ GroupElt

GroupElt::GroupElt(std::vector<std::uint32_t> primes) : primes_(std::move(primes)), entries_(primes_.size()) {
  check_primes(primes_);
}

GroupElt GroupElt::from_poly(const Poly& a) {
  GroupElt g({a.modulus().value()});
  g.entries_[0] = a.coeffs();
  return g;
}

GroupElt GroupElt::basis(std::vector<std::uint32_t> primes, std::size_t block, std::uint64_t coord,
                         std::uint32_t value) {
  GroupElt g(std::move(primes));
  g.set(block, coord, value);
  return g;
}

std::uint32_t GroupElt::get(std::size_t block, std::uint64_t coord) const {
  const auto& b = entries_.at(block);
  return coord >= 1 && coord <= b.size() ? b[coord - 1] : 0;
}

void GroupElt::set(std::size_t block, std::uint64_t coord, std::int64_t value) {
  put(entries_.at(block), coord, reduce(value, primes_.at(block)));
}

bool GroupElt::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& b) { return b.empty(); });
}

GroupElt GroupElt::operator+(const GroupElt& o) const {
  require_same_blocks(primes_, o.primes_);
  GroupElt out(*this);
  for (std::size_t j = 0; j < blocks(); ++j) out.entries_[j] = combine(entries_[j], o.entries_[j], primes_[j], false);
  return out;
}

GroupElt GroupElt::operator-(const GroupElt& o) const {
  require_same_blocks(primes_, o.primes_);
  GroupElt out(*this);
  for (std::size_t j = 0; j < blocks(); ++j) out.entries_[j] = combine(entries_[j], o.entries_[j], primes_[j], true);
  return out;
}

GroupElt GroupElt::operator-() const {
  GroupElt out(*this);
  for (std::size_t j = 0; j < blocks(); ++j) out.entries_[j] = negate(entries_[j], primes_[j]);
  return out;
}

void GroupElt::trim(std::size_t block) { trim_vec(entries_[block]); }

// ------------------------------------------------------------ Character

Character::Character(std::vector<std::uint32_t> primes, std::vector<std::uint64_t> window)
    : primes_(std::move(primes)), window_(std::move(window)), entries_(primes_.size()) {
  check_primes(primes_);
  if (window_.size() != primes_.size()) throw std::invalid_argument("one window bound per block required");
}

Character Character::from_laurent(const Laurent& x, std::uint64_t window) {
  const auto p = x.modulus().value();
  if (x.has_known_nonzero() && x.top() >= 0)
    throw std::invalid_argument("characters come from elements of t^{-1}F_p[[1/t]]");
  if (x.precision() && static_cast<std::int64_t>(window) > *x.precision())
    throw PrecisionError("window " + std::to_string(window) + " exceeds the known precision " +
                         std::to_string(*x.precision()));
  Character chi({p}, {window});
  for (std::uint64_t n = 1; n <= window; ++n) {
    const std::uint32_t c = x.coeff(-static_cast<std::int64_t>(n));
    if (c != 0) chi.set(0, n, c);
  }
  return chi;
}

std::uint32_t Character::exponent(std::size_t block, std::uint64_t coord) const {
  if (coord > window_.at(block))
    throw WindowError("coordinate " + std::to_string(coord) + " of block " + std::to_string(block) +
                      " lies outside the character window " + std::to_string(window_[block]));
  const auto& b = entries_[block];
  return coord >= 1 && coord <= b.size() ? b[coord - 1] : 0;
}

void Character::set(std::size_t block, std::uint64_t coord, std::int64_t value) {
  if (coord > window_.at(block))
    throw WindowError("cannot set coordinate " + std::to_string(coord) + " beyond the window " +
                      std::to_string(window_[block]));
  put(entries_[block], coord, reduce(value, primes_[block]));
}

bool Character::is_trivial() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const auto& b) { return b.empty(); });
}

Character Character::operator*(const Character& o) const {
  require_same_blocks(primes_, o.primes_);
  if (window_ != o.window_) throw WindowError("characters with different windows");
  Character out(*this);
  for (std::size_t j = 0; j < blocks(); ++j) out.entries_[j] = combine(entries_[j], o.entries_[j], primes_[j], false);
  return out;
}

Character Character::inverse() const {
  Character out(*this);
  for (std::size_t j = 0; j < blocks(); ++j) out.entries_[j] = negate(entries_[j], primes_[j]);
  return out;
}

bool Character::agrees_with(const Character& o, std::uint64_t depth) const {
  require_same_blocks(primes_, o.primes_);
  for (std::size_t j = 0; j < blocks(); ++j) {
    const auto& a = entries_[j];
    const auto& b = o.entries_[j];
    const std::size_t lim = static_cast<std::size_t>(std::min<std::uint64_t>(depth, std::max(a.size(), b.size())));
    for (std::size_t i = 0; i < lim; ++i)
      if ((i < a.size() ? a[i] : 0) != (i < b.size() ? b[i] : 0)) return false;
  }
  return true;
}

std::uint64_t Character::first_difference(const Character& o) const {
  require_same_blocks(primes_, o.primes_);
  std::uint64_t best = 0;
  for (std::size_t j = 0; j < blocks(); ++j) {
    const auto& a = entries_[j];
    const auto& b = o.entries_[j];
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
      if ((i < a.size() ? a[i] : 0) != (i < b.size() ? b[i] : 0)) {
        if (best == 0 || i + 1 < best) best = i + 1;
        break;
      }
    }
  }
  return best;
}

void Character::trim(std::size_t block) { trim_vec(entries_[block]); }

// ------------------------------------------------------------ pairings

RootOfUnity char_eval(const Character& chi, const GroupElt& g) {
  require_same_blocks(chi.primes(), g.primes());
  RootOfUnity out;
  for (std::size_t j = 0; j < g.blocks(); ++j) {
    const std::uint64_t bound = g.support_bound(j);
    if (bound > chi.window()[j])
      throw WindowError("group element reaches coordinate " + std::to_string(bound) + " of block " +
                        std::to_string(j) + ", past the character window " + std::to_string(chi.window()[j]));
    const auto& gb = g.block(j);
    const auto& xb = chi.block(j);
    const std::uint64_t p = chi.primes()[j];
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < std::min(gb.size(), xb.size()); ++i) acc = (acc + std::uint64_t{gb[i]} * xb[i]) % p;
    out = out * RootOfUnity(acc, p);
  }
  return out;
}

RootOfUnity poly_pair(const Laurent& x, const Poly& a) {
  require_same_modulus(x.modulus(), a.modulus());
  if (x.has_known_nonzero() && x.top() >= 0)
    throw std::invalid_argument("poly_pair expects x in t^{-1}F_p[[1/t]]");
  if (a.is_zero()) return RootOfUnity::one();
  if (x.precision() && *x.precision() < a.degree() + 1)
    throw PrecisionError("pairing with a polynomial of degree " + std::to_string(a.degree()) +
                         " needs precision " + std::to_string(a.degree() + 1) + ", have " +
                         std::to_string(*x.precision()));
  // c_{-1}(a x) = sum_k a_k x_{-(k+1)}
  const std::uint32_t p = a.modulus().value();
  std::uint64_t acc = 0;
  for (int k = 0; k <= a.degree(); ++k) {
    const std::uint32_t ak = a.coeff(static_cast<std::size_t>(k));
    if (ak != 0) acc = (acc + std::uint64_t{ak} * x.coeff(-(k + 1))) % p;
  }
  return RootOfUnity(acc, p);
}

// ------------------------------------------------------------ examples

Poly example_sequence_geometric(std::uint64_t n, PrimeModulus p) {
  if (n == 0) throw std::invalid_argument("the geometric example starts at n = 1");
  return Poly(p, std::vector<std::uint32_t>(n * p.value(), 1));
}

Laurent c0_sample_geometric(std::span<const std::int64_t> block_values, PrimeModulus p) {
  const std::size_t len = block_values.size() * p.value();
  std::vector<std::uint32_t> coeffs(len);
  for (std::size_t i = 0; i < len; ++i) coeffs[i] = p.reduce(block_values[i / p.value()]);
  return Laurent::from_coeffs(p, -1, std::move(coeffs), static_cast<std::int64_t>(len));
}

Laurent c0_random_geometric(PrimeModulus p, std::size_t blocks, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, p.value() - 1);
  std::vector<std::int64_t> values(blocks);
  for (auto& v : values) v = dist(rng);
  return c0_sample_geometric(values, p);
}

IndexSet::IndexSet(std::uint64_t period_, std::vector<std::uint64_t> residues_)
    : period(period_), residues(std::move(residues_)) {
  if (period == 0) throw std::invalid_argument("index set period must be positive");
  for (auto& r : residues) {
    if (r >= period) throw std::invalid_argument("residue " + std::to_string(r) + " not below the period");
  }
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  if (residues.empty() || residues.size() == period)
    throw std::invalid_argument("index set and its complement must both be infinite");
}

bool IndexSet::contains(std::uint64_t n) const {
  return std::binary_search(residues.begin(), residues.end(), n % period);
}

std::uint64_t IndexSet::element(std::uint64_t k) const {
  return (k / residues.size()) * period + residues[k % residues.size()];
}

std::string IndexSet::str() const {
  std::string out = std::to_string(period) + ":";
  for (std::size_t i = 0; i < residues.size(); ++i) out += (i ? "," : "") + std::to_string(residues[i]);
  return out;
}

IndexSet IndexSet::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw ParseError("index set must look like 'period:r1,r2'");
  try {
    const std::uint64_t period = std::stoull(std::string(text.substr(0, colon)));
    std::vector<std::uint64_t> residues;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      residues.push_back(std::stoull(std::string(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return IndexSet(period, std::move(residues));
  } catch (const std::logic_error& e) {
    throw ParseError("bad index set '" + std::string(text) + "': " + e.what());
  }
}

Poly example_sequence_indexset(const IndexSet& I, std::span<const std::uint64_t> F,
                               std::span<const std::int64_t> c, PrimeModulus p) {
  if (F.empty()) throw std::invalid_argument("F must be nonempty");
  if (F.size() != c.size()) throw std::invalid_argument("one coefficient per element of F");
  std::vector<std::int64_t> dense;
  bool any = false;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!I.contains(F[i])) throw std::invalid_argument(std::to_string(F[i]) + " is not in the index set");
    if (dense.size() <= F[i]) dense.resize(F[i] + 1, 0);
    dense[F[i]] += c[i];
    any = any || p.reduce(c[i]) != 0;
  }
  if (!any) throw std::invalid_argument("coefficients must not all vanish");
  return Poly::from_ints(p, dense);
}

Laurent c0_sample_indexset(const IndexSet& I, std::span<const std::int64_t> coeffs, PrimeModulus p) {
  std::vector<std::uint32_t> out(coeffs.size());
  for (std::size_t k = 1; k <= coeffs.size(); ++k) out[k - 1] = I.contains(k - 1) ? 0 : p.reduce(coeffs[k - 1]);
  return Laurent::from_coeffs(p, -1, std::move(out), static_cast<std::int64_t>(coeffs.size()));
}

Laurent c0_random_indexset(const IndexSet& I, PrimeModulus p, std::size_t depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> dist(0, p.value() - 1);
  std::vector<std::int64_t> coeffs(depth);
  for (auto& v : coeffs) v = dist(rng);
  return c0_sample_indexset(I, coeffs, p);
}

GroupSequence monomial_sequence(PrimeModulus p) {
  return {"t^n", {p.value()}, 0, [p](std::uint64_t n) { return GroupElt::basis({p.value()}, 0, n + 1); }};
}

GroupSequence geometric_sequence(PrimeModulus p) {
  return {"geometric", {p.value()}, 1,
          [p](std::uint64_t n) { return GroupElt::from_poly(example_sequence_geometric(n, p)); }};
}

GroupSequence indexset_sequence(const IndexSet& I, PrimeModulus p) {
  return {"indexset " + I.str(), {p.value()}, 1, [I, p](std::uint64_t n) {
            if (n == 0) throw std::invalid_argument("the index-set enumeration starts at n = 1");
            GroupElt g({p.value()});
            for (std::uint64_t k = 0; n > 0; ++k, n /= p.value()) g.set(0, I.element(k) + 1, n % p.value());
            return g;
          }};
}

// ------------------------------------------------------------ JSON

namespace {

nlohmann::json blocks_json(const std::vector<std::uint32_t>& primes,
                           const std::vector<std::vector<std::uint32_t>>& entries) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t j = 0; j < primes.size(); ++j) {
    nlohmann::json e = nlohmann::json::object();
    for (std::size_t i = 0; i < entries[j].size(); ++i)
      if (entries[j][i] != 0) e[std::to_string(i + 1)] = entries[j][i];
    blocks.push_back({{"p", primes[j]}, {"entries", e}});
  }
  return blocks;
}

std::vector<std::uint32_t> read_primes(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array())
    throw ParseError("expected an object with a \"blocks\" array");
  std::vector<std::uint32_t> primes;
  for (const auto& b : j["blocks"]) primes.push_back(b.at("p").get<std::uint32_t>());
  return primes;
}

template <class T>
void fill_entries(T& target, const nlohmann::json& j) {
  std::size_t idx = 0;
  for (const auto& b : j["blocks"]) {
    const nlohmann::json entries = b.value("entries", nlohmann::json::object());
    for (const auto& [key, value] : entries.items()) {
      std::uint64_t coord = 0;
      try {
        coord = std::stoull(key);
      } catch (const std::logic_error&) {
        throw ParseError("coordinate key '" + key + "' is not a number");
      }
      target.set(idx, coord, value.template get<std::int64_t>());
    }
    ++idx;
  }
}

} // namespace

nlohmann::json to_json(const GroupElt& g) {
  std::vector<std::vector<std::uint32_t>> entries;
  for (std::size_t j = 0; j < g.blocks(); ++j) entries.push_back(g.block(j));
  return {{"blocks", blocks_json(g.primes(), entries)}};
}

nlohmann::json to_json(const Character& chi) {
  std::vector<std::vector<std::uint32_t>> entries;
  for (std::size_t j = 0; j < chi.blocks(); ++j) entries.push_back(chi.block(j));
  return {{"blocks", blocks_json(chi.primes(), entries)}, {"window", chi.window()}};
}

GroupElt group_elt_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::uint32_t> primes = read_primes(j);
    GroupElt g(primes);
    fill_entries(g, j);
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("group element JSON: ") + e.what());
  }
}

Character character_from_json(const nlohmann::json& j) {
  try {
    std::vector<std::uint32_t> primes = read_primes(j);
    const auto window = j.at("window").get<std::vector<std::uint64_t>>();
    Character chi(primes, window);
    fill_entries(chi, j);
    return chi;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("character JSON: ") + e.what());
  }
}

} // namespace rigidseq
