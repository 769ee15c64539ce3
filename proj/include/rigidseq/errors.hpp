#pragma once

#include <stdexcept>
#include <string>

namespace rigidseq {

// Operands live over different prime fields.
class ModulusMismatch : public std::invalid_argument {
public:
  explicit ModulusMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class DivisionByZero : public std::domain_error {
public:
  explicit DivisionByZero(const std::string& what) : std::domain_error(what) {}
};

// A truncated series cannot certify the requested coefficient or sign.
class PrecisionError : public std::runtime_error {
public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// A group element escapes the coordinate window of a character.
class WindowError : public std::out_of_range {
public:
  explicit WindowError(const std::string& what) : std::out_of_range(what) {}
};

class BudgetExceeded : public std::runtime_error {
public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::invalid_argument {
public:
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised by constructions whose own certificate rows fail; always a bug or a
// too-small horizon, never a recoverable condition.
class CertificateFailure : public std::runtime_error {
public:
  explicit CertificateFailure(const std::string& what) : std::runtime_error(what) {}
};

// The character family ran out of candidates, or the horizon is too short to
// place the next cutoff.
class ConstructionError : public std::runtime_error {
public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace rigidseq
