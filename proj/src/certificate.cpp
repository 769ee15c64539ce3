#include "rigidseq/certificate.hpp"

#include <algorithm>

namespace rigidseq {

bool Certificate::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const CertificateRow& r) { return r.pass; });
}

std::size_t Certificate::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const CertificateRow& r) { return !r.pass; }));
}

void Certificate::append(const Certificate& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

const CertificateRow* Certificate::first_failure() const {
  auto it = std::find_if(rows.begin(), rows.end(), [](const CertificateRow& r) { return !r.pass; });
  return it == rows.end() ? nullptr : &*it;
}

nlohmann::json to_json(const CertificateRow& row) {
  return {{"id", row.id},       {"params", row.params.is_null() ? nlohmann::json::object() : row.params},
          {"left", row.left},   {"relation", row.relation},
          {"bound", row.bound}, {"pass", row.pass}};
}

CertificateRow row_from_json(const nlohmann::json& j) {
  CertificateRow row;
  row.id = j.at("id").get<std::string>();
  row.params = j.value("params", nlohmann::json::object());
  row.left = j.at("left").get<std::string>();
  row.relation = j.at("relation").get<std::string>();
  row.bound = j.at("bound").get<std::string>();
  row.pass = j.at("pass").get<bool>();
  return row;
}

std::string to_json_lines(const Certificate& cert) {
  std::string out;
  for (const auto& row : cert.rows) {
    out += to_json(row).dump();
    out += '\n';
  }
  return out;
}

} // namespace rigidseq
