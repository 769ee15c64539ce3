#pragma once

// Shared reader/writer for the "c*t^e+..." term syntax used by Poly and Laurent.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rigidseq::detail {

struct Term {
  std::int64_t coeff;
  std::int64_t exponent;
};

std::vector<Term> parse_terms(std::string_view text);

/// Appends one term to `out`, with a leading '+' unless it is the first.
void append_term(std::string& out, std::uint32_t coeff, std::int64_t exponent);

std::string_view trim(std::string_view s);

/// Splits "body mod p" into the body and p.
std::pair<std::string_view, std::uint32_t> split_modulus(std::string_view text);

std::int64_t parse_int(std::string_view s);

} // namespace rigidseq::detail
