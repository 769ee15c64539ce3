#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <string_view>

namespace rigidseq {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// "3/16", or "2" for integers.
std::string to_string(const Rational& r);

/// Accepts "3/4", "2", or a terminating decimal such as "0.75".
Rational parse_rational(std::string_view text);

/// 2^{-k} for k >= 0, 2^{|k|} for k < 0.
Rational dyadic(int k);

} // namespace rigidseq
