#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homconf/rational.hpp"

namespace homconf {

// A Context is the ordered list of lambda-slot names a polynomial may use in
// addition to the translation generator `d`. Slot order is canonical (stem,
// then numeric suffix), so l < l1 < l2 < ... < m < t < z1 < ..., which makes
// the graded-lex monomial order and all printed output deterministic.
class Context {
public:
  Context();
  static Context empty();
  static Context of(std::vector<std::string> slots);

  std::size_t size() const { return slots_->size(); }
  const std::vector<std::string>& slots() const { return *slots_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  Context with(const std::string& slot) const;
  Context without(std::string_view slot) const;
  Context united(const Context& other) const;
  bool contains_all(const Context& other) const;

  // A slot name of the form `prefixN` unused in this context.
  std::string fresh(const std::string& prefix = "z") const;

  bool operator==(const Context& o) const;
  bool operator!=(const Context& o) const { return !(*this == o); }

private:
  explicit Context(std::vector<std::string> slots);
  std::shared_ptr<const std::vector<std::string>> slots_;
};

// Canonical slot comparison used by Context (exposed for tests).
bool slot_less(const std::string& a, const std::string& b);

// Exponent vector layout: one entry per context slot, `d` last.
using Exponents = std::vector<std::uint32_t>;

struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const {
    unsigned long long ta = std::accumulate(a.begin(), a.end(), 0ull);
    unsigned long long tb = std::accumulate(b.begin(), b.end(), 0ull);
    if (ta != tb) return ta < tb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

// Sparse multivariate polynomial over Rational in the context slots plus `d`.
// Immutable in spirit: all operations return new values.
class Poly {
public:
  using TermMap = std::map<Exponents, Rational, GrlexLess>;

  explicit Poly(Context ctx);
  static Poly zero(const Context& ctx) { return Poly(ctx); }
  static Poly constant(const Context& ctx, const Rational& c);
  // `name` is a context slot or "d".
  static Poly var(const Context& ctx, std::string_view name);

  const Context& ctx() const { return ctx_; }
  const TermMap& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const; // 0 for zero, the coefficient otherwise

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  bool operator==(const Poly& o) const;
  bool operator!=(const Poly& o) const { return !(*this == o); }

  Poly scaled(const Rational& c) const;
  Poly pow(std::uint32_t k) const;

  // Degree in one variable ("d" or a slot name); -1 for the zero polynomial.
  int deg_in(std::string_view name) const;
  int total_deg() const; // -1 for zero

  // Context embedding / restriction. Restriction requires the dropped slots
  // to be unused and is an internal invariant (logic_error on violation).
  Poly lifted(const Context& target) const;
  Poly restricted(const Context& target) const;

  // Substitute a variable ("d" or a slot) by `image`, which must live in the
  // same context. Plain polynomial composition; the module-level ops build
  // their -lambda-d images out of this.
  Poly substituted(std::string_view name, const Poly& image) const;

  // Coefficient of name^k, viewed in the same context (exponent zeroed).
  Poly coeff_of(std::string_view name, std::uint32_t k) const;

  // Simultaneous substitution: every listed variable ("d" or a slot) is
  // replaced by its image at once; unlisted slots map to their namesakes in
  // the target context (which must contain them).
  Poly substituted_many(const std::map<std::string, Poly>& images, const Context& target) const;

  std::string str() const;

private:
  std::size_t var_index(std::string_view name) const; // slot index or size() for "d"
  void add_term(const Exponents& e, const Rational& c);

  Context ctx_;
  TermMap terms_;
};

// Parse the polynomial grammar: integers, rationals p/q, `d`, context slots,
// + - * ^, parentheses; whitespace insignificant; `^` takes a nonnegative
// integer exponent. Errors carry the offending offset.
Poly parse_poly(const std::string& text, const Context& ctx);

} // namespace homconf
