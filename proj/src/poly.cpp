#include "homconf/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "homconf/error.hpp"

namespace homconf {

/* ---- slot ordering ---- */

// Split a trailing decimal suffix: "l12" -> ("l", 12), "m" -> ("m", -1).
static std::pair<std::string, long> split_slot(const std::string& s) {
  std::size_t i = s.size();
  while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
  if (i == s.size()) return {s, -1};
  return {s.substr(0, i), std::stol(s.substr(i))};
}

bool slot_less(const std::string& a, const std::string& b) {
  auto [sa, na] = split_slot(a);
  auto [sb, nb] = split_slot(b);
  if (sa != sb) return sa < sb;
  if (na != nb) return na < nb;
  return a < b;
}

/* ---- Context ---- */

Context::Context() : slots_(std::make_shared<const std::vector<std::string>>()) {}

Context::Context(std::vector<std::string> slots)
    : slots_(std::make_shared<const std::vector<std::string>>(std::move(slots))) {}

Context Context::empty() { return Context(); }

Context Context::of(std::vector<std::string> slots) {
  std::sort(slots.begin(), slots.end(), slot_less);
  for (std::size_t i = 0; i + 1 < slots.size(); ++i)
    if (slots[i] == slots[i + 1]) fail_usage("duplicate slot '" + slots[i] + "' in context");
  for (const auto& s : slots)
    if (s == "d" || s.empty()) fail_usage("'d' is not a slot name");
  return Context(std::move(slots));
}

std::optional<std::size_t> Context::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < slots_->size(); ++i)
    if ((*slots_)[i] == name) return i;
  return std::nullopt;
}

Context Context::with(const std::string& slot) const {
  if (contains(slot)) return *this;
  auto v = *slots_;
  v.push_back(slot);
  return Context::of(std::move(v));
}

Context Context::without(std::string_view slot) const {
  std::vector<std::string> v;
  for (const auto& s : *slots_)
    if (s != slot) v.push_back(s);
  return Context(std::move(v)); // already sorted
}

Context Context::united(const Context& other) const {
  auto v = *slots_;
  for (const auto& s : *other.slots_)
    if (!contains(s)) v.push_back(s);
  return Context::of(std::move(v));
}

bool Context::contains_all(const Context& other) const {
  for (const auto& s : *other.slots_)
    if (!contains(s)) return false;
  return true;
}

std::string Context::fresh(const std::string& prefix) const {
  for (long n = 1;; ++n) {
    std::string cand = prefix + std::to_string(n);
    if (!contains(cand)) return cand;
  }
}

bool Context::operator==(const Context& o) const {
  return slots_ == o.slots_ || *slots_ == *o.slots_;
}

/* ---- Poly ---- */

Poly::Poly(Context ctx) : ctx_(std::move(ctx)) {}

Poly Poly::constant(const Context& ctx, const Rational& c) {
  Poly p(ctx);
  if (c != 0) p.terms_.emplace(Exponents(ctx.size() + 1, 0), c);
  return p;
}

Poly Poly::var(const Context& ctx, std::string_view name) {
  Poly p(ctx);
  Exponents e(ctx.size() + 1, 0);
  e[p.var_index(name)] = 1;
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

std::size_t Poly::var_index(std::string_view name) const {
  if (name == "d") return ctx_.size();
  auto idx = ctx_.index_of(name);
  if (!idx) throw std::logic_error("variable '" + std::string(name) + "' not in context");
  return *idx;
}

bool Poly::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Exponents(ctx_.size() + 1, 0);
}

Rational Poly::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("constant_value on non-constant poly");
  return terms_.begin()->second;
}

void Poly::add_term(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Poly Poly::operator-() const {
  Poly r(ctx_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r = *this;
  r += o;
  return r;
}

Poly Poly::operator-(const Poly& o) const {
  Poly r = *this;
  r -= o;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  if (ctx_ != o.ctx_) throw std::logic_error("poly context mismatch in +");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (ctx_ != o.ctx_) throw std::logic_error("poly context mismatch in -");
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly Poly::operator*(const Poly& o) const {
  if (ctx_ != o.ctx_) throw std::logic_error("poly context mismatch in *");
  Poly r(ctx_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool Poly::operator==(const Poly& o) const {
  return ctx_ == o.ctx_ &&
         std::equal(terms_.begin(), terms_.end(), o.terms_.begin(), o.terms_.end(),
                    [](const auto& a, const auto& b) { return a.first == b.first && a.second == b.second; }) &&
         terms_.size() == o.terms_.size();
}

Poly Poly::scaled(const Rational& c) const {
  Poly r(ctx_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

Poly Poly::pow(std::uint32_t k) const {
  Poly r = Poly::constant(ctx_, Rational(1));
  for (std::uint32_t i = 0; i < k; ++i) r = r * *this;
  return r;
}

int Poly::deg_in(std::string_view name) const {
  if (terms_.empty()) return -1;
  std::size_t vi = var_index(name);
  std::uint32_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[vi]);
  return static_cast<int>(d);
}

int Poly::total_deg() const {
  if (terms_.empty()) return -1;
  unsigned long long d = 0;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0ull));
  return static_cast<int>(d);
}

Poly Poly::lifted(const Context& target) const {
  if (ctx_ == target) return *this;
  if (!target.contains_all(ctx_)) throw std::logic_error("lift target misses slots");
  std::vector<std::size_t> remap(ctx_.size() + 1);
  for (std::size_t i = 0; i < ctx_.size(); ++i) remap[i] = *target.index_of(ctx_.slots()[i]);
  remap[ctx_.size()] = target.size();
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Exponents ne(target.size() + 1, 0);
    for (std::size_t i = 0; i < e.size(); ++i) ne[remap[i]] = e[i];
    r.terms_.emplace(std::move(ne), c);
  }
  return r;
}

Poly Poly::restricted(const Context& target) const {
  if (ctx_ == target) return *this;
  if (!ctx_.contains_all(target)) throw std::logic_error("restrict target not a subset");
  std::vector<std::optional<std::size_t>> remap(ctx_.size() + 1);
  for (std::size_t i = 0; i < ctx_.size(); ++i) remap[i] = target.index_of(ctx_.slots()[i]);
  remap[ctx_.size()] = target.size();
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Exponents ne(target.size() + 1, 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!remap[i]) {
        if (e[i] != 0) throw std::logic_error("restricted(): slot still in use");
      } else {
        ne[*remap[i]] = e[i];
      }
    }
    r.terms_.emplace(std::move(ne), c);
  }
  return r;
}

Poly Poly::substituted(std::string_view name, const Poly& image) const {
  if (image.ctx() != ctx_) throw std::logic_error("substitution image context mismatch");
  std::size_t vi = var_index(name);
  int maxe = deg_in(name);
  if (maxe <= 0 && !(maxe == 0)) return *this; // zero poly
  // Precompute image powers up to the max exponent actually used.
  std::vector<Poly> powers;
  powers.push_back(Poly::constant(ctx_, Rational(1)));
  for (int k = 1; k <= maxe; ++k) powers.push_back(powers.back() * image);
  Poly r(ctx_);
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    std::uint32_t k = rest[vi];
    rest[vi] = 0;
    Poly mono(ctx_);
    mono.terms_.emplace(rest, c);
    r += mono * powers[k];
  }
  return r;
}

Poly Poly::substituted_many(const std::map<std::string, Poly>& images,
                            const Context& target) const {
  // Per-variable image: listed variables get their image (lifted), the rest
  // map to the same-named variable of the target.
  std::vector<Poly> image_of;
  std::vector<std::string> names(ctx_.slots());
  names.push_back("d");
  image_of.reserve(names.size());
  for (const std::string& n : names) {
    auto it = images.find(n);
    if (it != images.end())
      image_of.push_back(it->second.lifted(target));
    else
      image_of.push_back(Poly::var(target, n));
  }
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Poly mono = Poly::constant(target, c);
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) mono = mono * image_of[i].pow(e[i]);
    r += mono;
  }
  return r;
}

Poly Poly::coeff_of(std::string_view name, std::uint32_t k) const {
  std::size_t vi = var_index(name);
  Poly r(ctx_);
  for (const auto& [e, c] : terms_) {
    if (e[vi] != k) continue;
    Exponents ne = e;
    ne[vi] = 0;
    r.terms_.emplace(std::move(ne), c);
  }
  return r;
}

/* ---- printing ---- */

static std::string mono_str(const Context& ctx, const Exponents& e) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (e[i] == 0) continue;
    std::string p = ctx.slots()[i];
    if (e[i] > 1) p += "^" + std::to_string(e[i]);
    parts.push_back(p);
  }
  if (e[ctx.size()] > 0) {
    std::string p = "d";
    if (e[ctx.size()] > 1) p += "^" + std::to_string(e[ctx.size()]);
    parts.push_back(p);
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

std::string Poly::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  // Leading term first: iterate descending graded-lex.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const Rational& c = it->second;
    bool neg = c < 0;
    Rational mag = neg ? Rational(-c) : c;
    std::string mono = mono_str(ctx_, it->first);
    std::string body;
    if (mono.empty()) {
      body = to_string(mag);
    } else if (mag == 1) {
      body = mono;
    } else {
      body = to_string(mag) + "*" + mono;
    }
    if (first) {
      out += (neg ? "-" : "") + body;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + body;
    }
  }
  return out;
}

/* ---- parser ---- */

namespace {

struct Lexer {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail_parse(msg + " at offset " + std::to_string(pos) + " in \"" + s + "\"");
  }
  bool accept(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) error(std::string("expected '") + c + "'");
  }
  BigInt integer() {
    skip_ws();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) error("expected integer");
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return BigInt(s.substr(start, pos - start));
  }
  std::string ident() {
    skip_ws();
    if (pos >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      error("expected name");
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }
};

class PolyParser {
public:
  PolyParser(const std::string& text, const Context& ctx) : lex_{text}, ctx_(ctx) {}

  Poly parse() {
    Poly p = expr();
    if (!lex_.eof()) lex_.error("trailing input");
    return p;
  }

private:
  Poly expr() {
    bool neg = false;
    if (lex_.accept('-')) neg = true;
    else lex_.accept('+');
    Poly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      if (lex_.accept('+')) acc += term();
      else if (lex_.accept('-')) acc -= term();
      else break;
    }
    return acc;
  }

  Poly term() {
    Poly acc = factor();
    while (lex_.accept('*')) acc = acc * factor();
    return acc;
  }

  Poly factor() {
    Poly base = primary();
    if (lex_.accept('^')) {
      BigInt e = lex_.integer();
      if (e < 0 || e > 64) lex_.error("exponent out of range");
      base = base.pow(static_cast<std::uint32_t>(e));
    }
    return base;
  }

  Poly primary() {
    char c = lex_.peek();
    if (c == '(') {
      lex_.expect('(');
      Poly p = expr();
      lex_.expect(')');
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt n = lex_.integer();
      if (lex_.accept('/')) {
        BigInt d = lex_.integer();
        if (d == 0) lex_.error("zero denominator");
        return Poly::constant(ctx_, Rational(n, d));
      }
      return Poly::constant(ctx_, Rational(n));
    }
    std::string name = lex_.ident();
    if (name == "d") return Poly::var(ctx_, "d");
    if (!ctx_.contains(name)) lex_.error("unknown slot '" + name + "'");
    return Poly::var(ctx_, name);
  }

  Lexer lex_;
  const Context& ctx_;
};

} // namespace

Poly parse_poly(const std::string& text, const Context& ctx) {
  return PolyParser(text, ctx).parse();
}

} // namespace homconf
