#include "homconf/deriv.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "homconf/error.hpp"
#include "homconf/linsolve.hpp"
#include "homconf/rep.hpp"

namespace homconf {

namespace {

// Integer-signed sum of elements living in different contexts.
Element signed_sum(const std::vector<std::pair<int, Element>>& terms) {
  Context target = terms.front().second.ctx();
  for (const auto& [s, e] : terms) target = target.united(e.ctx());
  Element acc = Element::zero(terms.front().second.mod(), target);
  for (const auto& [s, e] : terms) {
    if (s == 0) continue;
    Element x = e.lifted(target);
    if (s != 1) x = x.scaled(rational_of(s));
    acc += x;
  }
  return acc;
}

std::string pair_str(const ModulePtr& mod, std::size_t i, std::size_t j) {
  return "(" + mod->name(i) + "," + mod->name(j) + ")";
}

using ResidualList = std::vector<std::pair<std::string, Element>>;

// f_l(alpha(g)) - alpha(f_l(g)) per generator; zero exactly when f lies in
// Omega. `label` distinguishes the operator from its companions.
void omega_residuals(const ConformalAlgebra& A, const ConformalMap& f, const std::string& label,
                     ResidualList& out) {
  for (std::size_t j = 0; j < A.mod->rank(); ++j) {
    Element g = Element::generator(A.mod, Context::empty(), j);
    Element lhs = cmap_apply(f, map_apply(A.alpha, g), "l");
    Element rhs = map_apply(A.alpha, cmap_apply(f, g, "l"));
    out.emplace_back("alpha" + label + "@" + A.mod->name(j), signed_sum({{1, lhs}, {-1, rhs}}));
  }
}

// Residuals of the class identities on every ordered generator pair, in the
// slots l (bracket) and m (operator), plus the Omega rows. Companions needed
// by the class must already be present (class_check guards; the solver
// installs them).
void class_residuals(const ConformalAlgebra& A, const Representation& ad,
                     const DerivationCandidate& c, ResidualList& out) {
  const ConformalMap& D = c.map;
  omega_residuals(A, D, "", out);
  if (c.comp_arg) omega_residuals(A, *c.comp_arg, "'", out);
  if (c.comp_out) omega_residuals(A, *c.comp_out, "''", out);

  ModuleMap ak = map_power(A.alpha, c.k);
  Context sc = Context::of({"l", "m"});
  Poly l = Poly::var(sc, "l"), m = Poly::var(sc, "m");

  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    for (std::size_t j = 0; j < A.mod->rank(); ++j) {
      Element a = Element::generator(A.mod, Context::empty(), i);
      Element b = Element::generator(A.mod, Context::empty(), j);
      Element aka = map_apply(ak, a), akb = map_apply(ak, b);
      int sg = koszul(D.parity(), A.mod->parity(i));

      // [(D_m a)_(l+m) a^k(b)]
      Element t_bra = rho_apply(ad, cmap_apply(D, a, "m"), akb, l + m);
      // [a^k(a)_l (f_m b)]
      auto t_arg = [&](const ConformalMap& f) {
        return rho_apply(ad, aka, cmap_apply(f, b, "m"), l);
      };
      // f_m([a_l b])
      auto t_out = [&](const ConformalMap& f) { return cmap_apply(f, A.entry(i, j), "m"); };

      std::string w = pair_str(A.mod, i, j);
      if (c.klass == "Der") {
        out.emplace_back(w, signed_sum({{1, t_out(D)}, {-1, t_bra}, {-sg, t_arg(D)}}));
      } else if (c.klass == "GDer") {
        out.emplace_back(
            w, signed_sum({{1, t_bra}, {sg, t_arg(*c.comp_arg)}, {-1, t_out(*c.comp_out)}}));
      } else if (c.klass == "QDer") {
        out.emplace_back(w,
                         signed_sum({{1, t_bra}, {sg, t_arg(D)}, {-1, t_out(*c.comp_out)}}));
      } else if (c.klass == "C") {
        out.emplace_back(w + " left", signed_sum({{1, t_bra}, {-1, t_out(D)}}));
        out.emplace_back(w + " right", signed_sum({{sg, t_arg(D)}, {-1, t_out(D)}}));
      } else if (c.klass == "QC") {
        out.emplace_back(w, signed_sum({{1, t_bra}, {-sg, t_arg(D)}}));
      } else { // ZDer
        out.emplace_back(w + " left", t_bra);
        out.emplace_back(w + " value", t_out(D));
      }
    }
}

bool known_class(const std::string& k) {
  const auto& n = deriv_class_names();
  return std::find(n.begin(), n.end(), k) != n.end();
}

int blocks_for(const std::string& klass) {
  if (klass == "GDer") return 3;
  if (klass == "QDer") return 2;
  return 1;
}

// Deterministic unknown layout for the ansatz maps: block-major (operator
// first, then companions), then codomain generator, domain generator, l-power,
// d-power. Only parity-legal entries get unknowns.
struct AnsatzSlot {
  int block;
  std::size_t i, j;
  std::uint32_t a, b;
};

std::vector<AnsatzSlot> ansatz_layout(const ModulePtr& mod, Parity par, int blocks, int deg_l,
                                      int deg_d) {
  std::vector<AnsatzSlot> slots;
  for (int blk = 0; blk < blocks; ++blk)
    for (std::size_t i = 0; i < mod->rank(); ++i)
      for (std::size_t j = 0; j < mod->rank(); ++j) {
        if (mod->parity(i) != mod->parity(j) + par) continue;
        for (std::uint32_t a = 0; a + 0u <= static_cast<std::uint32_t>(deg_l); ++a)
          for (std::uint32_t b = 0; b + 0u <= static_cast<std::uint32_t>(deg_d); ++b)
            slots.push_back({blk, i, j, a, b});
      }
  return slots;
}

std::vector<ConformalMap> maps_from(const std::vector<AnsatzSlot>& slots, const ModulePtr& mod,
                                    Parity par, int blocks, const std::vector<Rational>& x) {
  std::vector<ConformalMap> maps;
  for (int blk = 0; blk < blocks; ++blk) maps.emplace_back(mod, mod, par, Context::empty());
  const Context& c = maps.front().ctx();
  Poly l = Poly::var(c, "l"), d = Poly::var(c, "d");
  for (std::size_t t = 0; t < slots.size(); ++t) {
    if (x[t] == 0) continue;
    const AnsatzSlot& s = slots[t];
    Poly mono = l.pow(s.a) * d.pow(s.b);
    maps[s.block].set_entry(s.i, s.j, maps[s.block].entry(s.i, s.j) + mono.scaled(x[t]));
  }
  return maps;
}

DerivationCandidate candidate_from(const std::vector<AnsatzSlot>& slots, const ModulePtr& mod,
                                   Parity par, const std::string& klass, int k,
                                   const std::vector<Rational>& x) {
  std::vector<ConformalMap> maps = maps_from(slots, mod, par, blocks_for(klass), x);
  DerivationCandidate cand{std::move(maps[0]), k, klass, std::nullopt, std::nullopt};
  if (klass == "GDer") {
    cand.comp_arg = std::move(maps[1]);
    cand.comp_out = std::move(maps[2]);
  } else if (klass == "QDer") {
    cand.comp_out = std::move(maps[1]);
  }
  return cand;
}

// Stable coordinate key for one monomial of one component of one residual
// stream. Residual contexts are input-shaped, so keys agree across probes.
std::string coord_key(const std::string& witness, std::size_t gi, const Poly& p,
                      const Exponents& e) {
  std::string key = witness + "|" + std::to_string(gi) + "|";
  const auto& names = p.ctx().slots();
  for (std::size_t s = 0; s < e.size(); ++s) {
    if (e[s] == 0) continue;
    key += (s < names.size() ? names[s] : std::string("d")) + "^" + std::to_string(e[s]) + " ";
  }
  return key;
}

void collect_coords(const ResidualList& rs, std::map<std::string, Rational>& into) {
  for (const auto& [w, r] : rs)
    for (const auto& [gi, p] : r.coeffs())
      for (const auto& [e, cf] : p.terms()) into[coord_key(w, gi, p, e)] = cf;
}

std::optional<std::vector<Rational>> flat_of(const DerivationCandidate& c, int deg_l, int deg_d) {
  return cmap_flatten(c.map, deg_l, deg_d);
}

// Coefficient maps of each power of `passive` in a commutator family, so a
// slot-parameterized map can be tested for span membership componentwise.
std::vector<ConformalMap> passive_components(const ConformalMap& f, const std::string& passive) {
  int top = -1;
  for (std::size_t i = 0; i < f.cod()->rank(); ++i)
    for (std::size_t j = 0; j < f.dom()->rank(); ++j)
      top = std::max(top, f.entry(i, j).deg_in(passive));
  std::vector<ConformalMap> parts;
  for (int e = 0; e <= top; ++e) {
    ConformalMap part(f.dom(), f.cod(), f.parity(), f.ctx());
    for (std::size_t i = 0; i < f.cod()->rank(); ++i)
      for (std::size_t j = 0; j < f.dom()->rank(); ++j)
        part.set_entry(i, j, f.entry(i, j).coeff_of(passive, static_cast<std::uint32_t>(e)));
    if (!part.is_zero()) parts.push_back(std::move(part));
  }
  return parts;
}

// Is `img` a combination of center elements with polynomial multipliers?
// Bounded decision: multiplier degrees are capped by the image's own degrees
// (d gets the center coefficients' degree as margin), so a positive answer is
// exact while a negative one only says "not within this ansatz".
bool center_membership(const std::vector<Element>& center, const Element& img) {
  if (img.is_zero()) return true;
  if (center.empty()) return false;
  Context ctx = img.ctx();
  for (const auto& z : center) ctx = ctx.united(z.ctx());
  Element target = img.lifted(ctx);

  int zmargin = 0;
  for (const auto& z : center)
    for (const auto& [gi, p] : z.coeffs()) zmargin = std::max(zmargin, p.deg_in("d"));

  std::vector<std::string> vars = ctx.slots();
  vars.push_back("d");
  std::vector<int> caps;
  for (const auto& v : vars) {
    int cap = 0;
    for (const auto& [gi, p] : target.coeffs()) cap = std::max(cap, p.deg_in(v));
    if (v == "d") cap += zmargin;
    caps.push_back(cap);
  }

  std::vector<Poly> monos{Poly::constant(ctx, Rational(1))};
  for (std::size_t v = 0; v < vars.size(); ++v) {
    std::vector<Poly> next;
    for (const Poly& m : monos)
      for (int e = 0; e <= caps[v]; ++e)
        next.push_back(m * Poly::var(ctx, vars[v]).pow(static_cast<std::uint32_t>(e)));
    monos = std::move(next);
  }

  std::map<std::string, std::size_t> row_of;
  auto coords = [&](const Element& e) {
    std::map<std::string, Rational> c;
    for (const auto& [gi, p] : e.coeffs())
      for (const auto& [ex, cf] : p.terms()) c[coord_key("", gi, p, ex)] = cf;
    return c;
  };

  std::vector<std::map<std::string, Rational>> cols;
  for (const auto& z : center)
    for (const Poly& m : monos) cols.push_back(coords(z.lifted(ctx).scaled(m)));
  std::map<std::string, Rational> b = coords(target);

  std::set<std::string> keys;
  for (const auto& c : cols)
    for (const auto& [k, v] : c) keys.insert(k);
  for (const auto& [k, v] : b) keys.insert(k);
  std::size_t r = 0;
  for (const auto& k : keys) row_of[k] = r++;

  RationalMatrix M(keys.size(), cols.size());
  for (std::size_t u = 0; u < cols.size(); ++u)
    for (const auto& [k, v] : cols[u]) M.at(row_of[k], u) = v;
  std::vector<Rational> bb(keys.size(), Rational(0));
  for (const auto& [k, v] : b) bb[row_of[k]] = v;
  std::vector<Rational> x;
  return solve(M, bb, x);
}

} // namespace

const std::vector<std::string>& deriv_class_names() {
  static const std::vector<std::string> names = {"Der", "GDer", "QDer", "C", "QC", "ZDer"};
  return names;
}

CheckReport class_check(const ConformalAlgebra& A, const DerivationCandidate& cand) {
  if (!known_class(cand.klass)) fail_usage("unknown derivation class '" + cand.klass + "'");
  if (cand.k < 0) fail_usage("negative twist power");
  auto check_endo = [&](const ConformalMap& f, const std::string& what) {
    if (!same_module(f.dom(), A.mod) || !same_module(f.cod(), A.mod))
      fail("ModuleMismatch", what + " is not an endomorphism of the algebra module");
    f.validate(what);
    if (f.parity() != cand.map.parity())
      fail("ParityViolation", what + " must share the operator's parity");
  };
  check_endo(cand.map, "class candidate");
  bool need_arg = cand.klass == "GDer";
  bool need_out = cand.klass == "GDer" || cand.klass == "QDer";
  if ((need_arg && !cand.comp_arg) || (need_out && !cand.comp_out))
    fail("MissingCompanions",
         cand.klass + (cand.klass == "GDer" ? " needs both companions" : " needs the right-hand companion"));
  if (need_arg) check_endo(*cand.comp_arg, "argument companion");
  if (need_out) check_endo(*cand.comp_out, "bracket companion");

  Representation ad = adjoint(A);
  CheckReport rep;
  rep.check = "deriv." + cand.klass;
  ResidualList rs;
  class_residuals(A, ad, cand, rs);
  for (const auto& [w, r] : rs)
    if (!r.is_zero()) rep.add(w, r.str());
  if (rep.pass())
    rep.notes.push_back("identity holds on every generator pair at power " +
                        std::to_string(cand.k));
  return rep;
}

DerivationCandidate inner_derivation(const ConformalAlgebra& A, const Element& a, int k) {
  if (k < 0) fail_usage("negative twist power");
  if (!same_module(a.mod(), A.mod)) fail("ModuleMismatch", "anchor lives in a different module");
  std::optional<Parity> pa = a.parity();
  if (!pa && !a.is_zero())
    fail("ParityViolation", "inner derivation anchor must be parity-homogeneous");
  {
    Context t = a.ctx().united(A.alpha.ctx());
    if (map_apply(A.alpha, a).lifted(t) != a.lifted(t))
      fail("NotAlphaFixed", "inner derivation anchor is not fixed by alpha");
  }
  ModuleMap ak1 = map_power(A.alpha, k + 1);
  std::vector<Element> cols;
  Context mctx = Context::of({"l"});
  for (std::size_t j = 0; j < A.mod->rank(); ++j) {
    Element b = map_apply(ak1, Element::generator(A.mod, Context::empty(), j));
    cols.push_back(bracket_eval(A, a, b, "l"));
    mctx = mctx.united(cols.back().ctx());
  }
  ConformalMap f(A.mod, A.mod, a.is_zero() ? Parity::even : *pa, mctx);
  for (std::size_t j = 0; j < A.mod->rank(); ++j)
    for (const auto& [i, p] : cols[j].coeffs()) f.set_entry(i, j, p.lifted(mctx));
  return {std::move(f), k + 1, "Der", std::nullopt, std::nullopt};
}

DerivationCandidate der_commutator(const DerivationCandidate& c1, const DerivationCandidate& c2,
                                   const std::string& passive) {
  if (c1.k < 0 || c2.k < 0) fail_usage("negative twist power");
  return {cmap_commutator(c1.map, c2.map, passive), c1.k + c2.k, "Der", std::nullopt,
          std::nullopt};
}

ConformalAlgebra derivation_extension(const ConformalAlgebra& A, const ConformalMap& D,
                                      const std::string& gen_name) {
  if (!same_module(D.dom(), A.mod) || !same_module(D.cod(), A.mod))
    fail("ModuleMismatch", "extension operator is not an endomorphism of the algebra module");
  D.validate("extension operator");

  std::vector<std::pair<std::string, Parity>> gens = A.mod->gens;
  std::string nm = gen_name.empty() ? "D" : gen_name;
  while (A.mod->index_of(nm)) nm += "'";
  gens.emplace_back(nm, D.parity());
  ModulePtr M = make_module(std::move(gens));
  std::size_t n = A.mod->rank();

  Context tctx = A.table_ctx.united(D.ctx());
  Poly l = Poly::var(tctx, "l"), d = Poly::var(tctx, "d");

  auto embed = [&](const Element& e) {
    Element up = e.lifted(tctx);
    Element r = Element::zero(M, tctx);
    for (const auto& [i, p] : up.coeffs()) r.set_coeff(i, p);
    return r;
  };

  std::vector<std::vector<Element>> table(n + 1,
                                          std::vector<Element>(n + 1, Element::zero(M, tctx)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table[i][j] = embed(A.entry(i, j));
  for (std::size_t j = 0; j < n; ++j) {
    Element g = Element::generator(A.mod, Context::empty(), j);
    Element v = cmap_apply(D, g, "l").lifted(tctx);
    table[n][j] = embed(v);
    // [a_l D] = -(-1)^{|a||D|} D_(-l-d)(a): fold the operator slot against the
    // output translation, as in the skew axiom.
    Element folded = v.substituted("l", -(l + d));
    table[j][n] = embed(folded).scaled(rational_of(-koszul(A.mod->parity(j), D.parity())));
  }

  ModuleMap ap(M, M, Parity::even, A.alpha.ctx());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) ap.set_entry(i, j, A.alpha.entry(i, j));
  ap.set_entry(n, n, Poly::constant(A.alpha.ctx(), Rational(1)));

  return make_algebra(M, std::move(ap), std::move(table));
}

SolutionBasis solve_class(const ConformalAlgebra& A, const std::string& klass, int k, int deg_l,
                          int deg_d) {
  if (!known_class(klass)) fail_usage("unknown derivation class '" + klass + "'");
  if (k < 0) fail_usage("negative twist power");
  if (deg_l < 0 || deg_d < 0) fail_usage("degree bounds must be non-negative");

  SolutionBasis out{klass, k, deg_l, deg_d, {},
                    "complete within maxdeg l=" + std::to_string(deg_l) +
                        ", maxdeg d=" + std::to_string(deg_d) + " only"};
  Representation ad = adjoint(A);
  int blocks = blocks_for(klass);

  for (Parity par : {Parity::even, Parity::odd}) {
    std::vector<AnsatzSlot> slots = ansatz_layout(A.mod, par, blocks, deg_l, deg_d);
    if (slots.empty()) continue;
    std::size_t dcount = slots.size() / static_cast<std::size_t>(blocks);

    // One linear column per unknown, assembled by probing unit candidates.
    std::vector<std::map<std::string, Rational>> cols(slots.size());
    std::set<std::string> keys;
    for (std::size_t u = 0; u < slots.size(); ++u) {
      std::vector<Rational> x(slots.size(), Rational(0));
      x[u] = 1;
      DerivationCandidate cand = candidate_from(slots, A.mod, par, klass, k, x);
      ResidualList rs;
      class_residuals(A, ad, cand, rs);
      collect_coords(rs, cols[u]);
      for (const auto& [key, v] : cols[u]) keys.insert(key);
    }

    std::map<std::string, std::size_t> row_of;
    std::size_t r = 0;
    for (const auto& key : keys) row_of[key] = r++;
    RationalMatrix M(keys.size(), slots.size());
    for (std::size_t u = 0; u < slots.size(); ++u)
      for (const auto& [key, v] : cols[u]) M.at(row_of[key], u) = v;

    // Nullspace, then keep one candidate per independent projection to the
    // operator block (the leading dcount coordinates).
    std::vector<std::vector<Rational>> kept;
    for (const auto& v : nullspace(M)) {
      std::vector<Rational> proj(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(dcount));
      bool zero = std::all_of(proj.begin(), proj.end(), [](const Rational& q) { return q == 0; });
      if (zero) continue;
      RationalMatrix t(kept.size() + 1, dcount);
      for (std::size_t i = 0; i < kept.size(); ++i)
        for (std::size_t j = 0; j < dcount; ++j) t.at(i, j) = kept[i][j];
      for (std::size_t j = 0; j < dcount; ++j) t.at(kept.size(), j) = proj[j];
      if (rank(t) != kept.size() + 1) continue;
      kept.push_back(std::move(proj));
      DerivationCandidate cand = candidate_from(slots, A.mod, par, klass, k, v);
      CheckReport recheck = class_check(A, cand);
      if (!recheck.pass())
        throw std::logic_error("solve_class produced an element failing its own class check");
      out.basis.push_back(std::move(cand));
    }
  }
  return out;
}

std::optional<ConformalMap> companion_solve(const ConformalAlgebra& A, const ConformalMap& D,
                                            int k, int deg_l, int deg_d) {
  if (k < 0) fail_usage("negative twist power");
  if (deg_l < 0 || deg_d < 0) fail_usage("degree bounds must be non-negative");
  if (!same_module(D.dom(), A.mod) || !same_module(D.cod(), A.mod))
    fail("ModuleMismatch", "companion target is not an endomorphism of the algebra module");
  D.validate("companion target");

  Representation ad = adjoint(A);
  ModuleMap ak = map_power(A.alpha, k);
  Context sc = Context::of({"l", "m"});
  Poly l = Poly::var(sc, "l"), m = Poly::var(sc, "m");

  // Fixed left-hand side per pair: [(D_m a)_(l+m) a^k b] + sign [a^k a_l (D_m b)].
  ResidualList fixed;
  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    for (std::size_t j = 0; j < A.mod->rank(); ++j) {
      Element a = Element::generator(A.mod, Context::empty(), i);
      Element b = Element::generator(A.mod, Context::empty(), j);
      int sg = koszul(D.parity(), A.mod->parity(i));
      Element lhs = signed_sum({{1, rho_apply(ad, cmap_apply(D, a, "m"), map_apply(ak, b), l + m)},
                                {sg, rho_apply(ad, map_apply(ak, a), cmap_apply(D, b, "m"), l)}});
      fixed.emplace_back(pair_str(A.mod, i, j), lhs);
    }

  std::vector<AnsatzSlot> slots = ansatz_layout(A.mod, D.parity(), 1, deg_l, deg_d);
  std::vector<std::map<std::string, Rational>> cols(slots.size());
  for (std::size_t u = 0; u < slots.size(); ++u) {
    std::vector<Rational> x(slots.size(), Rational(0));
    x[u] = 1;
    ConformalMap X = maps_from(slots, A.mod, D.parity(), 1, x)[0];
    ResidualList rs;
    for (std::size_t i = 0; i < A.mod->rank(); ++i)
      for (std::size_t j = 0; j < A.mod->rank(); ++j)
        rs.emplace_back(pair_str(A.mod, i, j), cmap_apply(X, A.entry(i, j), "m"));
    omega_residuals(A, X, "''", rs);
    collect_coords(rs, cols[u]);
  }
  std::map<std::string, Rational> b;
  collect_coords(fixed, b);

  std::set<std::string> keys;
  for (const auto& c : cols)
    for (const auto& [key, v] : c) keys.insert(key);
  for (const auto& [key, v] : b) keys.insert(key);
  std::map<std::string, std::size_t> row_of;
  std::size_t r = 0;
  for (const auto& key : keys) row_of[key] = r++;

  RationalMatrix M(keys.size(), slots.size());
  for (std::size_t u = 0; u < slots.size(); ++u)
    for (const auto& [key, v] : cols[u]) M.at(row_of[key], u) = v;
  std::vector<Rational> bb(keys.size(), Rational(0));
  for (const auto& [key, v] : b) bb[row_of[key]] = v;

  std::vector<Rational> x;
  if (!solve(M, bb, x)) return std::nullopt;
  return maps_from(slots, A.mod, D.parity(), 1, x)[0];
}

GderDecomposition gder_decompose(const ConformalAlgebra& A, const DerivationCandidate& cand) {
  if (cand.klass != "GDer") fail_usage("gder_decompose expects a GDer-tagged candidate");
  if (!cand.comp_arg || !cand.comp_out)
    fail("MissingCompanions", "GDer decomposition needs both companions");
  if (cand.comp_arg->parity() != cand.map.parity())
    fail("ParityViolation", "argument companion must share the operator's parity");

  Rational half = rational_of(1, 2);
  DerivationCandidate q{(cand.map + *cand.comp_arg).scaled(half), cand.k, "QDer", std::nullopt,
                        cand.comp_out};
  DerivationCandidate z{(cand.map - *cand.comp_arg).scaled(half), cand.k, "QC", std::nullopt,
                        std::nullopt};
  CheckReport g = class_check(A, cand);
  CheckReport rq = class_check(A, q);
  CheckReport rz = class_check(A, z);
  return {std::move(q), std::move(z), std::move(g), std::move(rq), std::move(rz)};
}

CheckReport inclusion_audit(const ConformalAlgebra& A, const SolutionBasis& zder,
                            const SolutionBasis& der, const SolutionBasis& qder,
                            const SolutionBasis& gder, const SolutionBasis& c,
                            const SolutionBasis& qc) {
  const SolutionBasis* bases[6] = {&zder, &der, &qder, &gder, &c, &qc};
  const char* want[6] = {"ZDer", "Der", "QDer", "GDer", "C", "QC"};
  for (int i = 0; i < 6; ++i)
    if (bases[i]->klass != want[i])
      fail_usage(std::string("bases must arrive in the order ZDer, Der, QDer, GDer, C, QC (got '") +
                 bases[i]->klass + "' where " + want[i] + " was expected)");
  for (int i = 1; i < 6; ++i)
    if (bases[i]->k != zder.k || bases[i]->deg_l != zder.deg_l || bases[i]->deg_d != zder.deg_d)
      fail("BoundMismatch", "all bases must share one power and degree window");

  int dl = zder.deg_l, dd = zder.deg_d;
  std::string passive = A.table_ctx.fresh("p");
  CheckReport rep;
  rep.check = "deriv.audit";
  {
    std::string sizes = "bases:";
    for (int i = 0; i < 6; ++i)
      sizes += " " + std::string(want[i]) + "=" + std::to_string(bases[i]->basis.size());
    rep.notes.push_back(sizes);
  }

  auto flats = [&](const SolutionBasis& b) {
    std::vector<std::vector<Rational>> v;
    for (const auto& cand : b.basis) {
      auto f = flat_of(cand, dl, dd);
      if (!f) fail("BoundMismatch", b.klass + " basis element lies outside the declared window");
      v.push_back(std::move(*f));
    }
    return v;
  };
  std::vector<std::vector<Rational>> fl[6];
  for (int i = 0; i < 6; ++i) fl[i] = flats(*bases[i]);

  // chain: ZDer <= Der <= QDer <= GDer and C <= QC <= GDer
  const std::pair<int, int> chain[5] = {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 3}};
  for (const auto& [sub, super] : chain)
    for (std::size_t i = 0; i < fl[sub].size(); ++i)
      if (!in_span(fl[super], fl[sub][i]))
        rep.add("chain: " + std::string(want[sub]) + "[" + std::to_string(i) + "] in " +
                    want[super],
                "outside the solved span");

  // lemma: [Der C] lands in C, [QDer QC] in QC, [QC QC] in QDer
  auto lemma_pairs = [&](const SolutionBasis& x, const SolutionBasis& y,
                         const std::string& target) {
    for (std::size_t i = 0; i < x.basis.size(); ++i)
      for (std::size_t j = 0; j < y.basis.size(); ++j) {
        DerivationCandidate cm = der_commutator(x.basis[i], y.basis[j], passive);
        cm.klass = target;
        std::string label = "lemma: [" + x.klass + "[" + std::to_string(i) + "] " + y.klass +
                            "[" + std::to_string(j) + "]] as " + target;
        if (target == "QDer") {
          cm.comp_out = ConformalMap::zero(A.mod, A.mod, cm.map.parity(), Context::empty());
          CheckReport r = class_check(A, cm);
          if (r.pass()) continue;
          auto comp = companion_solve(A, cm.map, cm.k, 2 * dl, 2 * dd);
          if (!comp) {
            rep.inconclusive.push_back(label + ": companion undecided at the window");
            continue;
          }
          cm.comp_out = std::move(comp);
          r = class_check(A, cm);
          for (const auto& [w, res] : r.residuals) rep.add(label + " " + w, res);
          continue;
        }
        CheckReport r = class_check(A, cm);
        for (const auto& [w, res] : r.residuals) rep.add(label + " " + w, res);
      }
  };
  lemma_pairs(der, c, "C");
  lemma_pairs(qder, qc, "QC");
  lemma_pairs(qc, qc, "QDer");

  // ideal: [ZDer Der] stays in ZDer, exactly as a class and spanwise per
  // component of the commutator's parameter slot
  if (zder.basis.empty() || der.basis.empty())
    rep.notes.push_back("ideal: no ZDer x Der pairs within the window");
  for (std::size_t i = 0; i < zder.basis.size(); ++i)
    for (std::size_t j = 0; j < der.basis.size(); ++j)
      for (int order = 0; order < 2; ++order) {
        const DerivationCandidate& first = order ? der.basis[j] : zder.basis[i];
        const DerivationCandidate& second = order ? zder.basis[i] : der.basis[j];
        DerivationCandidate cm = der_commutator(first, second, passive);
        cm.klass = "ZDer";
        std::string label = order ? "ideal: [Der[" + std::to_string(j) + "] ZDer[" +
                                        std::to_string(i) + "]]"
                                  : "ideal: [ZDer[" + std::to_string(i) + "] Der[" +
                                        std::to_string(j) + "]]";
        CheckReport r = class_check(A, cm);
        for (const auto& [w, res] : r.residuals) rep.add(label + " as ZDer " + w, res);
        int e = 0;
        for (const auto& part : passive_components(cm.map, passive)) {
          auto f = cmap_flatten(part, dl, dd);
          if (!f)
            rep.inconclusive.push_back(label + " component " + std::to_string(e) +
                                       " exceeds the window");
          else if (!in_span(fl[0], *f))
            rep.add(label + " component " + std::to_string(e), "outside the ZDer span");
          ++e;
        }
      }

  // sum: every GDer element is QDer + QC, constructively and spanwise
  std::vector<std::vector<Rational>> qsum = fl[2];
  qsum.insert(qsum.end(), fl[5].begin(), fl[5].end());
  for (std::size_t i = 0; i < gder.basis.size(); ++i) {
    if (!in_span(qsum, fl[3][i]))
      rep.add("sum: GDer[" + std::to_string(i) + "]", "outside span(QDer) + span(QC)");
    GderDecomposition dec = gder_decompose(A, gder.basis[i]);
    for (const auto& [w, res] : dec.qder_report.residuals)
      rep.add("sum: GDer[" + std::to_string(i) + "] qder-part " + w, res);
    for (const auto& [w, res] : dec.qc_report.residuals)
      rep.add("sum: GDer[" + std::to_string(i) + "] qc-part " + w, res);
  }

  if (rep.pass()) rep.notes.push_back("inclusions, lemma containments, ideal and sum all verified");
  return rep;
}

CheckReport center_interaction_check(const ConformalAlgebra& A, const SolutionBasis& c,
                                     const SolutionBasis& qc) {
  if (c.klass != "C" || qc.klass != "QC") fail_usage("expected the C and QC bases, in that order");
  if (c.k != qc.k || c.deg_l != qc.deg_l || c.deg_d != qc.deg_d)
    fail("BoundMismatch", "C and QC bases must share one power and degree window");
  if (!regularity_check(A.alpha)) fail("NotRegular", "center interplay needs an invertible twist");

  std::string passive = A.table_ctx.fresh("p");
  CheckReport rep;
  rep.check = "center.interaction";
  std::vector<Element> center = center_solve(A, c.deg_l, c.deg_d);
  rep.notes.push_back("center basis size: " + std::to_string(center.size()));
  if (center.empty() && !c.basis.empty() && !qc.basis.empty())
    rep.notes.push_back("empty center: C x QC commutators must vanish exactly");

  for (std::size_t i = 0; i < c.basis.size(); ++i)
    for (std::size_t j = 0; j < qc.basis.size(); ++j) {
      DerivationCandidate cm = der_commutator(c.basis[i], qc.basis[j], passive);
      for (std::size_t g = 0; g < A.mod->rank(); ++g) {
        Element img =
            cmap_apply(cm.map, Element::generator(A.mod, Context::empty(), g), "m");
        std::string w = "CxQC(" + std::to_string(i) + "," + std::to_string(j) + ")@" +
                        A.mod->name(g);
        if (center.empty()) {
          if (!img.is_zero()) rep.add(w, img.str());
        } else if (!center_membership(center, img)) {
          rep.inconclusive.push_back(w + ": center membership undecided at the window");
        }
      }
    }

  std::string first_nonzero;
  std::size_t nonzero = 0, pairs = 0;
  for (std::size_t i = 0; i < qc.basis.size(); ++i)
    for (std::size_t j = 0; j < qc.basis.size(); ++j) {
      ++pairs;
      ConformalMap y = cmap_commutator(qc.basis[i].map, qc.basis[j].map, passive);
      if (!y.is_zero()) {
        ++nonzero;
        if (first_nonzero.empty())
          first_nonzero = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      }
    }
  if (pairs == 0)
    rep.notes.push_back("QC x QC: no pairs within the window");
  else if (nonzero == 0)
    rep.notes.push_back("QC x QC: all " + std::to_string(pairs) +
                        " commutators vanish (closure criterion holds)");
  else
    rep.notes.push_back("QC x QC: " + std::to_string(nonzero) + " of " + std::to_string(pairs) +
                        " commutators nonzero, first at " + first_nonzero +
                        " (reported outcome, not a failure)");
  if (rep.pass() && !center.empty())
    rep.notes.push_back("every C x QC commutator image lies in the center span");
  return rep;
}

} // namespace homconf
