#include "homconf/module.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "homconf/error.hpp"

namespace homconf {

std::optional<std::size_t> GradedModule::index_of(std::string_view n) const {
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (gens[i].first == n) return i;
  return std::nullopt;
}

ModulePtr make_module(std::vector<std::pair<std::string, Parity>> gens) {
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (gens[i].first == gens[j].first)
        fail_usage("duplicate generator name '" + gens[i].first + "'");
  auto m = std::make_shared<GradedModule>();
  m->gens = std::move(gens);
  return m;
}

/* ---- Element ---- */

Element::Element(ModulePtr mod, Context ctx) : mod_(std::move(mod)), ctx_(std::move(ctx)) {}

Element Element::generator(ModulePtr mod, const Context& ctx, std::size_t i) {
  Element e(std::move(mod), ctx);
  e.coeffs_.emplace(i, Poly::constant(ctx, Rational(1)));
  return e;
}

Poly Element::coeff(std::size_t i) const {
  auto it = coeffs_.find(i);
  return it == coeffs_.end() ? Poly::zero(ctx_) : it->second;
}

bool Element::operator==(const Element& o) const {
  return same_module(mod_, o.mod_) && ctx_ == o.ctx_ && coeffs_ == o.coeffs_;
}

Element Element::operator-() const {
  Element r(mod_, ctx_);
  for (const auto& [i, p] : coeffs_) r.coeffs_.emplace(i, -p);
  return r;
}

Element& Element::operator+=(const Element& o) {
  if (!same_module(mod_, o.mod_)) throw std::logic_error("element module mismatch");
  if (ctx_ != o.ctx_) throw std::logic_error("element context mismatch");
  for (const auto& [i, p] : o.coeffs_) {
    auto it = coeffs_.find(i);
    if (it == coeffs_.end()) {
      coeffs_.emplace(i, p);
    } else {
      it->second += p;
      if (it->second.is_zero()) coeffs_.erase(it);
    }
  }
  return *this;
}

Element& Element::operator-=(const Element& o) { return *this += -o; }

Element Element::operator+(const Element& o) const {
  Element r = *this;
  r += o;
  return r;
}

Element Element::operator-(const Element& o) const {
  Element r = *this;
  r -= o;
  return r;
}

Element Element::scaled(const Rational& c) const {
  Element r(mod_, ctx_);
  if (c == 0) return r;
  for (const auto& [i, p] : coeffs_) r.coeffs_.emplace(i, p.scaled(c));
  return r;
}

Element Element::scaled(const Poly& p) const {
  Context target = ctx_.united(p.ctx());
  Poly pl = p.lifted(target);
  Element r(mod_, target);
  if (pl.is_zero()) return r;
  for (const auto& [i, q] : coeffs_) {
    Poly prod = q.lifted(target) * pl;
    if (!prod.is_zero()) r.coeffs_.emplace(i, std::move(prod));
  }
  return r;
}

bool Element::has_parity(Parity p) const {
  for (const auto& [i, q] : coeffs_)
    if (mod_->parity(i) != p) return false;
  return true;
}

std::optional<Parity> Element::parity() const {
  if (coeffs_.empty()) return std::nullopt;
  Parity p = mod_->parity(coeffs_.begin()->first);
  return has_parity(p) ? std::optional<Parity>(p) : std::nullopt;
}

Element Element::lifted(const Context& target) const {
  if (ctx_ == target) return *this;
  Element r(mod_, target);
  for (const auto& [i, p] : coeffs_) r.coeffs_.emplace(i, p.lifted(target));
  return r;
}

Element Element::restricted(const Context& target) const {
  if (ctx_ == target) return *this;
  Element r(mod_, target);
  for (const auto& [i, p] : coeffs_) r.coeffs_.emplace(i, p.restricted(target));
  return r;
}

Element Element::substituted(std::string_view name, const Poly& image) const {
  Context target = ctx_.united(image.ctx());
  Poly img = image.lifted(target);
  Element r(mod_, target);
  for (const auto& [i, p] : coeffs_) {
    Poly q = p.lifted(target).substituted(name, img);
    if (!q.is_zero()) r.coeffs_.emplace(i, std::move(q));
  }
  return r;
}

void Element::set_coeff(std::size_t i, Poly p) {
  if (i >= mod_->rank()) throw std::logic_error("generator index out of range");
  if (p.ctx() != ctx_) p = p.lifted(ctx_);
  if (p.is_zero())
    coeffs_.erase(i);
  else
    coeffs_.insert_or_assign(i, std::move(p));
}

std::string Element::str() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [i, p] : coeffs_) {
    if (!first) out += " + ";
    out += "(" + p.str() + ") " + mod_->name(i);
    first = false;
  }
  return out;
}

Element rename_slot(const Element& e, const std::string& from, const std::string& to) {
  if (from == to) return e;
  if (e.ctx().contains(to))
    throw std::logic_error("rename_slot: target '" + to + "' already present");
  if (!e.ctx().contains(from)) return e;
  Context big = e.ctx().with(to);
  Element mid = e.lifted(big).substituted(from, Poly::var(big, to));
  return mid.restricted(big.without(from));
}

Element subst_out(const Element& e, const std::string& slot, const Poly& image) {
  if (image.ctx().contains(slot))
    throw std::logic_error("subst_out: image involves the substituted slot");
  Element mid = e.substituted(slot, image.lifted(image.ctx().with(slot)));
  return mid.restricted(mid.ctx().without(slot));
}

/* ---- element parsing ---- */

Element parse_element(const std::string& text, const ModulePtr& mod, const Context& ctx) {
  // Grammar: 0 | term ((+|-) term)* with term = '(' poly ')' GEN | RATIONAL GEN | GEN.
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto err = [&](const std::string& msg) -> void {
    fail_parse(msg + " at offset " + std::to_string(pos) + " in \"" + text + "\"");
  };

  skip();
  if (pos < text.size() && text[pos] == '0') {
    std::size_t save = pos++;
    skip();
    if (pos >= text.size()) return Element::zero(mod, ctx);
    pos = save;
  }

  Element acc = Element::zero(mod, ctx);
  bool first = true;
  for (;;) {
    skip();
    bool neg = false;
    if (!first) {
      if (pos >= text.size()) break;
      if (text[pos] == '+') {
        ++pos;
      } else if (text[pos] == '-') {
        neg = true;
        ++pos;
      } else {
        err("expected '+' or '-'");
      }
    } else if (pos < text.size() && text[pos] == '-') {
      neg = true;
      ++pos;
    }
    skip();
    if (pos >= text.size()) err("expected term");

    Poly coeff = Poly::zero(ctx);
    if (text[pos] == '(') {
      // find matching paren
      int depth = 0;
      std::size_t start = pos;
      for (; pos < text.size(); ++pos) {
        if (text[pos] == '(') ++depth;
        if (text[pos] == ')' && --depth == 0) break;
      }
      if (pos >= text.size()) err("unbalanced '('");
      coeff = parse_poly(text.substr(start + 1, pos - start - 1), ctx);
      ++pos;
    } else if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      BigInt n(text.substr(start, pos - start));
      BigInt d(1);
      if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::size_t ds = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (ds == pos) err("expected denominator");
        d = BigInt(text.substr(ds, pos - ds));
        if (d == 0) err("zero denominator");
      }
      coeff = Poly::constant(ctx, Rational(n, d));
    } else {
      coeff = Poly::constant(ctx, Rational(1));
    }

    skip();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
            text[pos] == '\''))
      ++pos;
    if (start == pos) err("expected generator name");
    std::string gname = text.substr(start, pos - start);
    auto gi = mod->index_of(gname);
    if (!gi) err("unknown generator '" + gname + "'");

    Element term = Element::generator(mod, ctx, *gi).scaled(coeff);
    if (neg) term = -term;
    acc += term.lifted(ctx);
    first = false;

    skip();
    if (pos >= text.size()) break;
  }
  return acc;
}

/* ---- ModuleMap ---- */

ModuleMap::ModuleMap(ModulePtr dom, ModulePtr cod, Parity parity, Context ctx)
    : dom_(std::move(dom)), cod_(std::move(cod)), parity_(parity), ctx_(std::move(ctx)) {
  m_.assign(cod_->rank(), std::vector<Poly>(dom_->rank(), Poly::zero(ctx_)));
}

ModuleMap ModuleMap::zero(ModulePtr dom, ModulePtr cod, Parity parity, const Context& ctx) {
  return ModuleMap(std::move(dom), std::move(cod), parity, ctx);
}

ModuleMap ModuleMap::identity(ModulePtr mod, const Context& ctx) {
  ModuleMap f(mod, mod, Parity::even, ctx);
  for (std::size_t i = 0; i < mod->rank(); ++i)
    f.m_[i][i] = Poly::constant(ctx, Rational(1));
  return f;
}

ModuleMap ModuleMap::diagonal(ModulePtr mod, const std::vector<Rational>& diag) {
  if (diag.size() != mod->rank()) fail_usage("diagonal size mismatch");
  ModuleMap f(mod, mod, Parity::even, Context::empty());
  for (std::size_t i = 0; i < mod->rank(); ++i)
    f.m_[i][i] = Poly::constant(f.ctx_, diag[i]);
  return f;
}

void ModuleMap::set_entry(std::size_t i, std::size_t j, Poly p) {
  if (p.ctx() != ctx_) p = p.lifted(ctx_);
  m_[i][j] = std::move(p);
}

bool ModuleMap::operator==(const ModuleMap& o) const {
  if (!same_module(dom_, o.dom_) || !same_module(cod_, o.cod_) || parity_ != o.parity_)
    return false;
  if (ctx_ != o.ctx_) return false;
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      if (m_[i][j] != o.m_[i][j]) return false;
  return true;
}

ModuleMap ModuleMap::operator+(const ModuleMap& o) const {
  if (parity_ != o.parity_) throw std::logic_error("map parity mismatch in +");
  Context target = ctx_.united(o.ctx_);
  ModuleMap a = lifted(target), b = o.lifted(target);
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      a.m_[i][j] += b.m_[i][j];
  return a;
}

ModuleMap ModuleMap::operator-(const ModuleMap& o) const { return *this + o.scaled(Poly::constant(o.ctx(), Rational(-1))); }

ModuleMap ModuleMap::scaled(const Poly& p) const {
  Context target = ctx_.united(p.ctx());
  ModuleMap r = lifted(target);
  Poly pl = p.lifted(target);
  for (auto& row : r.m_)
    for (auto& e : row) e = e * pl;
  return r;
}

ModuleMap ModuleMap::lifted(const Context& target) const {
  if (ctx_ == target) return *this;
  ModuleMap r(dom_, cod_, parity_, target);
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      r.m_[i][j] = m_[i][j].lifted(target);
  return r;
}

void ModuleMap::validate(const std::string& what) const {
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      if (!m_[i][j].is_zero() && cod_->parity(i) != dom_->parity(j) + parity_)
        fail("ParityViolation", what + ": entry (" + cod_->name(i) + "," + dom_->name(j) +
                                    ") breaks the declared parity " + parity_name(parity_));
}

std::string ModuleMap::str() const {
  std::string out;
  for (std::size_t j = 0; j < dom_->rank(); ++j) {
    if (j) out += "; ";
    out += dom_->name(j) + " -> ";
    bool first = true;
    std::string img;
    for (std::size_t i = 0; i < cod_->rank(); ++i) {
      if (m_[i][j].is_zero()) continue;
      if (!first) img += " + ";
      img += "(" + m_[i][j].str() + ") " + cod_->name(i);
      first = false;
    }
    out += first ? "0" : img;
  }
  return out;
}

Element map_apply(const ModuleMap& f, const Element& x) {
  if (!same_module(f.dom(), x.mod())) throw std::logic_error("map_apply domain mismatch");
  Context target = x.ctx().united(f.ctx());
  Element r(f.cod(), target);
  for (const auto& [j, p] : x.coeffs()) {
    Poly pl = p.lifted(target);
    for (std::size_t i = 0; i < f.cod()->rank(); ++i) {
      const Poly& e = f.entry(i, j);
      if (e.is_zero()) continue;
      Element term(f.cod(), target);
      term.set_coeff(i, pl * e.lifted(target));
      r += term;
    }
  }
  return r;
}

ModuleMap map_compose(const ModuleMap& f, const ModuleMap& g) {
  if (!same_module(f.dom(), g.cod())) throw std::logic_error("map_compose shape mismatch");
  Context target = f.ctx().united(g.ctx());
  ModuleMap a = f.lifted(target), b = g.lifted(target);
  ModuleMap r(g.dom(), f.cod(), f.parity() + g.parity(), target);
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < g.dom()->rank(); ++j) {
      Poly acc = Poly::zero(target);
      for (std::size_t k = 0; k < f.dom()->rank(); ++k) acc += a.entry(i, k) * b.entry(k, j);
      r.set_entry(i, j, std::move(acc));
    }
  return r;
}

// Determinant by expansion over column subsets (rank is small everywhere in
// this engine, so the 2^n memo table is cheap).
Poly map_det(const ModuleMap& f) {
  if (!f.is_square()) throw std::logic_error("det of non-square map");
  std::size_t n = f.dom()->rank();
  if (n == 0) return Poly::constant(f.ctx(), Rational(1));
  if (n > 20) fail_usage("determinant rank too large");
  std::map<std::uint64_t, Poly> memo; // mask of available columns, row = n - popcount
  std::function<Poly(std::uint64_t)> det = [&](std::uint64_t mask) -> Poly {
    if (mask == 0) return Poly::constant(f.ctx(), Rational(1));
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    std::size_t row = n - static_cast<std::size_t>(__builtin_popcountll(mask));
    Poly acc = Poly::zero(f.ctx());
    int sign = 1;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(mask & (1ull << j))) continue;
      if (!f.entry(row, j).is_zero())
        acc += f.entry(row, j).scaled(Rational(sign)) * det(mask & ~(1ull << j));
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return det((1ull << n) - 1);
}

ModuleMap map_power(const ModuleMap& f, int k) {
  if (!f.is_square()) throw std::logic_error("power of non-square map");
  if (f.parity() != Parity::even) fail("ParityViolation", "power of an odd map");
  ModuleMap base = f;
  if (k < 0) {
    Poly d = map_det(f);
    if (!d.is_constant() || d.is_zero())
      fail("NotInvertible", "map determinant " + d.str() + " is not a nonzero constant");
    Rational dc = d.constant_value();
    std::size_t n = f.dom()->rank();
    // adjugate: adj[i][j] = (-1)^{i+j} det(minor with row j, column i removed)
    ModuleMap inv(f.dom(), f.cod(), Parity::even, f.ctx());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ModuleMap minor(f.dom(), f.cod(), Parity::even, f.ctx());
        // Build the (n-1)x(n-1) minor in the top-left block of a same-rank
        // map, padding with an identity tail so map_det sees a square matrix.
        std::vector<std::size_t> rows, cols;
        for (std::size_t r = 0; r < n; ++r)
          if (r != j) rows.push_back(r);
        for (std::size_t c = 0; c < n; ++c)
          if (c != i) cols.push_back(c);
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) {
            if (r < rows.size() && c < cols.size())
              minor.set_entry(r, c, f.entry(rows[r], cols[c]));
            else
              minor.set_entry(r, c, Poly::constant(f.ctx(), Rational(r == c ? 1 : 0)));
          }
        Poly md = map_det(minor);
        int sgn = ((i + j) % 2 == 0) ? 1 : -1;
        inv.set_entry(i, j, md.scaled(Rational(sgn) / dc));
      }
    base = inv;
    k = -k;
  }
  ModuleMap acc = ModuleMap::identity(f.dom(), f.ctx());
  for (int i = 0; i < k; ++i) acc = map_compose(base, acc);
  return acc;
}

bool regularity_check(const ModuleMap& f) {
  if (!f.is_square()) return false;
  Poly d = map_det(f);
  return d.is_constant() && !d.is_zero();
}

} // namespace homconf
