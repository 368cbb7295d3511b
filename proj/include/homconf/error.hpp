#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace homconf {

// Engine-wide error carrying a stable code string. `kind` maps onto the CLI
// exit-code contract: parse/usage -> 2, structural precondition -> 3.
class Error : public std::runtime_error {
public:
  enum class Kind { parse, usage, structural };

  Error(Kind k, std::string c, const std::string& what)
      : std::runtime_error(what), kind(k), code(std::move(c)) {}

  Kind kind;
  std::string code;
};

[[noreturn]] inline void fail_parse(const std::string& msg) {
  throw Error(Error::Kind::parse, "SyntaxError", msg);
}

[[noreturn]] inline void fail_usage(const std::string& msg) {
  throw Error(Error::Kind::usage, "UsageError", msg);
}

// Structural precondition failures (NotInvertible, NotRegular, ...).
[[noreturn]] inline void fail(const std::string& code, const std::string& msg) {
  throw Error(Error::Kind::structural, code, msg);
}

} // namespace homconf
