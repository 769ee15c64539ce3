#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rigidseq::cli {

inline constexpr int kSchemaVersion = 1;

/// Runs one command line (without the program name).  Results go to `out`
/// unless --output names a file; diagnostics and error JSON go to `err`.
/// Returns 0 on success, 1 on a computation error or failed check, 2 on an
/// invalid command line or config file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace rigidseq::cli
