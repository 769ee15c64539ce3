#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace rigidseq {

/// One checked inequality.  `left` and `bound` are human-readable values
/// (exact rationals or exponents where the check is exact); `relation` names
/// the comparison that was evaluated, e.g. "<" or "==".
struct CertificateRow {
  std::string id;
  nlohmann::json params;
  std::string left;
  std::string relation;
  std::string bound;
  bool pass = false;

  bool operator==(const CertificateRow&) const = default;
};

struct Certificate {
  std::vector<CertificateRow> rows;

  bool passed() const;
  std::size_t failures() const;
  void add(CertificateRow row) { rows.push_back(std::move(row)); }
  void append(const Certificate& other);
  /// First failing row, or nullptr.
  const CertificateRow* first_failure() const;
};

nlohmann::json to_json(const CertificateRow& row);
CertificateRow row_from_json(const nlohmann::json& j);

/// One JSON object per line.
std::string to_json_lines(const Certificate& cert);

} // namespace rigidseq
