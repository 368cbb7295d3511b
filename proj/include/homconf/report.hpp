#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homconf/check.hpp"

namespace homconf {

// Machine-readable run report: ordered key/value lines, one per line, so
// golden-file diffs need no parser. The same bytes go to stdout and to the
// --report file. Nothing time- or locale-dependent may enter a line; timing
// is the caller's business and goes to stderr.
struct RunReport {
  std::vector<std::pair<std::string, std::string>> lines;
  bool all_pass = true;

  void add(const std::string& key, const std::string& value) { lines.emplace_back(key, value); }

  // check.<label>: status, then one line per witness, per undecided entry and
  // per note. A failure or an inconclusive outcome clears all_pass: only a
  // clean pass keeps exit code 0.
  void add_check(const std::string& label, const CheckReport& r);

  // Appends the final result line reflecting all_pass.
  void finish() { add("result", all_pass ? "pass" : "fail"); }

  std::string str() const;
};

// FNV-1a over raw bytes; the input digest printed in reports.
std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

} // namespace homconf
