#include "homconf/conformal_map.hpp"

#include "homconf/error.hpp"

namespace homconf {

ConformalMap::ConformalMap(ModulePtr dom, ModulePtr cod, Parity parity, Context ctx)
    : dom_(std::move(dom)), cod_(std::move(cod)), parity_(parity), ctx_(ctx.with("l")) {
  m_.assign(cod_->rank(), std::vector<Poly>(dom_->rank(), Poly::zero(ctx_)));
}

ConformalMap ConformalMap::zero(ModulePtr dom, ModulePtr cod, Parity parity, const Context& ctx) {
  return ConformalMap(std::move(dom), std::move(cod), parity, ctx);
}

ConformalMap ConformalMap::from_matrix(const ModuleMap& m) {
  ConformalMap f(m.dom(), m.cod(), m.parity(), m.ctx());
  for (std::size_t i = 0; i < m.cod()->rank(); ++i)
    for (std::size_t j = 0; j < m.dom()->rank(); ++j)
      f.m_[i][j] = m.entry(i, j).lifted(f.ctx_);
  return f;
}

void ConformalMap::set_entry(std::size_t i, std::size_t j, Poly p) {
  if (p.ctx() != ctx_) p = p.lifted(ctx_);
  m_[i][j] = std::move(p);
}

bool ConformalMap::is_zero() const {
  for (const auto& row : m_)
    for (const Poly& e : row)
      if (!e.is_zero()) return false;
  return true;
}

bool ConformalMap::operator==(const ConformalMap& o) const {
  if (!same_module(dom_, o.dom_) || !same_module(cod_, o.cod_) || parity_ != o.parity_)
    return false;
  Context target = ctx_.united(o.ctx_);
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      if (m_[i][j].lifted(target) != o.m_[i][j].lifted(target)) return false;
  return true;
}

ConformalMap ConformalMap::operator+(const ConformalMap& o) const {
  if (parity_ != o.parity_) throw std::logic_error("conformal map parity mismatch in +");
  Context target = ctx_.united(o.ctx_);
  ConformalMap r = lifted(target);
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      r.m_[i][j] += o.m_[i][j].lifted(target);
  return r;
}

ConformalMap ConformalMap::operator-(const ConformalMap& o) const {
  return *this + o.scaled(Rational(-1));
}

ConformalMap ConformalMap::scaled(const Poly& p) const {
  Context target = ctx_.united(p.ctx());
  ConformalMap r = lifted(target);
  Poly pl = p.lifted(target);
  for (auto& row : r.m_)
    for (Poly& e : row) e = e * pl;
  return r;
}

ConformalMap ConformalMap::scaled(const Rational& c) const {
  ConformalMap r = *this;
  for (auto& row : r.m_)
    for (Poly& e : row) e = e.scaled(c);
  return r;
}

ConformalMap ConformalMap::lifted(const Context& target) const {
  if (ctx_ == target) return *this;
  ConformalMap r(dom_, cod_, parity_, target);
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      r.m_[i][j] = m_[i][j].lifted(target);
  return r;
}

void ConformalMap::validate(const std::string& what) const {
  for (std::size_t i = 0; i < cod_->rank(); ++i)
    for (std::size_t j = 0; j < dom_->rank(); ++j)
      if (!m_[i][j].is_zero() && cod_->parity(i) != dom_->parity(j) + parity_)
        fail("ParityViolation", what + ": entry (" + cod_->name(i) + "," + dom_->name(j) +
                                    ") breaks the declared parity " + parity_name(parity_));
}

std::string ConformalMap::str() const {
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

Element cmap_apply(const ConformalMap& f, const Element& x, const std::string& out_slot) {
  if (!same_module(f.dom(), x.mod())) fail("ModuleMismatch", "conformal map domain mismatch");
  auto uses_out = [&](const Element& e) {
    if (!e.ctx().contains(out_slot)) return false;
    for (const auto& [i, p] : e.coeffs())
      if (p.deg_in(out_slot) > 0) return true;
    return false;
  };
  if (out_slot == "d" || uses_out(x))
    fail("SlotCollision", "output slot '" + out_slot + "' already used by the argument");
  if (f.passives().contains(out_slot))
    fail("SlotCollision", "output slot '" + out_slot + "' is a passive symbol of the map");

  Context target = x.ctx().united(f.passives()).with(out_slot);
  Poly out = Poly::var(target, out_slot);
  Poly d = Poly::var(target, "d");

  Element r = Element::zero(f.cod(), target);
  for (const auto& [j, p] : x.coeffs()) {
    Poly pf = p.lifted(target).substituted("d", d + out);
    for (std::size_t i = 0; i < f.cod()->rank(); ++i) {
      const Poly& e = f.entry(i, j);
      if (e.is_zero()) continue;
      Element term(f.cod(), target);
      term.set_coeff(i, pf * e.substituted_many({{"l", out}}, target));
      r += term;
    }
  }
  return r;
}

ConformalMap cmap_subst_slot(const ConformalMap& f, const std::string& name, const Poly& image,
                             bool drop) {
  if (drop && name == "d") throw std::logic_error("cmap_subst_slot: cannot drop 'd'");
  Context target = f.ctx().united(image.ctx());
  Poly img = image.lifted(target);
  if (drop) {
    if (img.deg_in(name) > 0)
      throw std::logic_error("cmap_subst_slot: image uses the dropped slot");
    target = target.without(name);
    img = img.restricted(target);
  }
  ConformalMap r(f.dom(), f.cod(), f.parity(), target);
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < f.dom()->rank(); ++j)
      r.set_entry(i, j, f.entry(i, j).substituted_many({{name, img}}, target));
  return r;
}

ConformalMap cmap_compose_at(const ConformalMap& f, const ConformalMap& g, const Poly& sf,
                             const Poly& sg) {
  if (!same_module(f.dom(), g.cod())) fail("ModuleMismatch", "conformal composition mismatch");
  Context target =
      sf.ctx().united(sg.ctx()).united(f.passives()).united(g.passives());
  Poly d = Poly::var(target, "d");
  Poly sfl = sf.lifted(target);
  Poly sgl = sg.lifted(target);

  ConformalMap r(g.dom(), f.cod(), f.parity() + g.parity(), target);
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < g.dom()->rank(); ++j) {
      Poly acc = Poly::zero(target);
      for (std::size_t k = 0; k < f.dom()->rank(); ++k) {
        if (f.entry(i, k).is_zero() || g.entry(k, j).is_zero()) continue;
        Poly fe = f.entry(i, k).substituted_many({{"l", sfl}}, target);
        Poly ge = g.entry(k, j).substituted_many({{"l", sgl}, {"d", d + sfl}}, target);
        acc += fe * ge;
      }
      r.set_entry(i, j, std::move(acc));
    }
  return r;
}

ConformalMap cmap_commutator(const ConformalMap& f, const ConformalMap& g,
                             const std::string& passive) {
  if (!same_module(f.dom(), f.cod()) || !same_module(g.dom(), g.cod()) ||
      !same_module(f.dom(), g.dom()))
    fail("ModuleMismatch", "commutator needs endomorphisms of one module");
  if (passive == "l" || passive == "d" || f.passives().contains(passive) ||
      g.passives().contains(passive))
    fail("SlotCollision", "passive slot '" + passive + "' collides");

  Context out = f.passives().united(g.passives()).with("l").with(passive);
  Poly p = Poly::var(out, passive);
  Poly rest = Poly::var(out, "l") - p;

  ConformalMap t1 = cmap_compose_at(f, g, p, rest);
  ConformalMap t2 = cmap_compose_at(g, f, rest, p);
  return (t1 - t2.scaled(Rational(koszul(f.parity(), g.parity())))).lifted(out);
}

bool cmap_alpha_commutes(const ConformalMap& f, const ModuleMap& alpha) {
  if (!same_module(f.dom(), f.cod()) || !same_module(alpha.dom(), f.dom()) ||
      !same_module(alpha.cod(), f.dom()))
    fail("ModuleMismatch", "alpha-commutation needs endomorphisms of one module");
  Context target = f.ctx().united(alpha.ctx());
  Poly d = Poly::var(target, "d");
  Poly l = Poly::var(target, "l");
  std::size_t n = f.dom()->rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // f_l(alpha(g_j)): alpha's output coefficients get d -> d+l
      Poly lhs = Poly::zero(target);
      // alpha(f_l(g_j))
      Poly rhs = Poly::zero(target);
      for (std::size_t k = 0; k < n; ++k) {
        lhs += f.entry(i, k).lifted(target) *
               alpha.entry(k, j).lifted(target).substituted("d", d + l);
        rhs += alpha.entry(i, k).lifted(target) * f.entry(k, j).lifted(target);
      }
      if (lhs != rhs) return false;
    }
  return true;
}

std::optional<std::vector<Rational>> cmap_flatten(const ConformalMap& f, int deg_l, int deg_d) {
  if (deg_l < 0 || deg_d < 0) fail_usage("degree bounds must be non-negative");
  const Context& c = f.ctx();
  std::size_t li = *c.index_of("l");
  std::size_t di = c.size(); // d is last in the exponent layout
  std::size_t wl = static_cast<std::size_t>(deg_l) + 1;
  std::size_t wd = static_cast<std::size_t>(deg_d) + 1;
  std::vector<Rational> out;
  out.reserve(f.cod()->rank() * f.dom()->rank() * wl * wd);
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < f.dom()->rank(); ++j) {
      std::vector<Rational> grid(wl * wd, Rational(0));
      for (const auto& [e, coef] : f.entry(i, j).terms()) {
        std::uint32_t el = e[li], ed = e[di];
        if (el >= wl || ed >= wd) return std::nullopt;
        for (std::size_t s = 0; s < c.size(); ++s)
          if (s != li && e[s] != 0) return std::nullopt; // passive symbol in use
        grid[el * wd + ed] = coef;
      }
      out.insert(out.end(), grid.begin(), grid.end());
    }
  return out;
}

} // namespace homconf
