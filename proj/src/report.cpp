#include "homconf/report.hpp"

namespace homconf {

void RunReport::add_check(const std::string& label, const CheckReport& r) {
  add("check." + label, r.status());
  if (!r.pass()) all_pass = false;
  std::size_t n = 0;
  for (const auto& [witness, residual] : r.residuals)
    add("witness." + label + "." + std::to_string(++n), witness + " -> " + residual);
  n = 0;
  for (const auto& open : r.inconclusive) add("open." + label + "." + std::to_string(++n), open);
  n = 0;
  for (const auto& note : r.notes) add("note." + label + "." + std::to_string(++n), note);
}

std::string RunReport::str() const {
  std::string out;
  for (const auto& [k, v] : lines) {
    out += k;
    out += ": ";
    out += v;
    out += "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string digest_hex(std::string_view bytes) {
  static const char* hexdig = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = hexdig[h & 0xf];
    h >>= 4;
  }
  return out;
}

} // namespace homconf
