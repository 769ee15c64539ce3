#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace rigidseq {

/// Non-archimedean absolute value |x| = p^N, stored by its exponent N.
/// The zero value sits below every finite exponent.
class AbsValue {
public:
  static AbsValue zero() { return AbsValue{}; }
  static AbsValue from_exponent(std::int64_t n) { return AbsValue{n}; }

  bool is_zero() const { return !exponent_.has_value(); }
  /// Throws std::logic_error for the zero value.
  std::int64_t exponent() const;

  std::strong_ordering operator<=>(const AbsValue& other) const;
  bool operator==(const AbsValue& other) const = default;

  /// |xy| = |x||y|.
  friend AbsValue operator*(const AbsValue& a, const AbsValue& b);
  friend AbsValue operator/(const AbsValue& a, const AbsValue& b);

  /// "0" or "p^N".
  std::string str() const;

private:
  AbsValue() = default;
  explicit AbsValue(std::int64_t n) : exponent_(n) {}
  std::optional<std::int64_t> exponent_;
};

} // namespace rigidseq
