#include "rigidseq/rational.hpp"

#include <charconv>
#include <stdexcept>

#include "rigidseq/errors.hpp"

namespace rigidseq {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_i64(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("not a rational number: '" + std::string(whole) + "'");
  return v;
}

} // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto den = parse_i64(text.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_i64(text.substr(0, slash), text), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17) throw ParseError("too many decimal places in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const bool negative = !text.empty() && text.front() == '-';
    std::string_view ip = text.substr(0, dot);
    if (negative) ip.remove_prefix(1);
    const std::int64_t whole = ip.empty() ? 0 : parse_i64(ip, text);
    const std::int64_t part = frac.empty() ? 0 : parse_i64(frac, text);
    if (part < 0) throw ParseError("not a rational number: '" + std::string(text) + "'");
    Rational r = Rational(whole) + Rational(part, scale);
    return negative ? -r : r;
  }
  return Rational(parse_i64(text, text));
}

Rational dyadic(int k) {
  if (k >= 62 || k <= -62) throw std::out_of_range("dyadic exponent out of range");
  const std::int64_t pow = std::int64_t{1} << (k >= 0 ? k : -k);
  return k >= 0 ? Rational(1, pow) : Rational(pow);
}

} // namespace rigidseq
