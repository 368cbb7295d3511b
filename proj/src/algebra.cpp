#include "homconf/algebra.hpp"

#include "homconf/error.hpp"
#include "homconf/linsolve.hpp"

namespace homconf {

namespace {

std::string pair_witness(const ModulePtr& m, std::size_t i, std::size_t j) {
  return "(" + m->name(i) + "," + m->name(j) + ")";
}

} // namespace

ConformalAlgebra make_algebra(ModulePtr mod, ModuleMap alpha,
                              std::vector<std::vector<Element>> table) {
  if (!same_module(alpha.dom(), mod) || !same_module(alpha.cod(), mod))
    fail("ModuleMismatch", "alpha is not an endomorphism of the algebra module");
  if (alpha.parity() != Parity::even) fail("ParityViolation", "alpha must be even");
  alpha.validate("alpha");
  std::size_t n = mod->rank();
  if (table.size() != n) fail("TableShape", "bracket table must have one row per generator");
  Context ctx = Context::of({"l"});
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) fail("TableShape", "bracket table row has wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (!same_module(table[i][j].mod(), mod))
        fail("ModuleMismatch", "table entry " + pair_witness(mod, i, j) +
                                   " lives in a different module");
      ctx = ctx.united(table[i][j].ctx());
    }
  }
  // alpha may bring its own passive symbols (e.g. a symbolic scalar twist),
  // but never the bracket slot; it stays in its own context so applying it
  // to slot-free elements cannot smuggle `l` into them.
  if (alpha.ctx().contains("l"))
    fail("SlotCollision", "alpha entries may not use the bracket slot 'l'");
  ctx = ctx.united(alpha.ctx());
  ConformalAlgebra A{std::move(mod), std::move(alpha), ctx, std::move(table)};
  for (auto& row : A.table)
    for (auto& e : row) e = e.lifted(ctx);
  return A;
}

Element bracket_eval(const ConformalAlgebra& A, const Element& x, const Element& y,
                     const std::string& out_slot) {
  if (!same_module(x.mod(), A.mod) || !same_module(y.mod(), A.mod))
    fail("ModuleMismatch", "bracket arguments must live in the algebra module");
  // A slot merely present in an argument's context is harmless; one actually
  // used by a coefficient would be captured.
  auto uses_out = [&](const Element& e) {
    if (!e.ctx().contains(out_slot)) return false;
    for (const auto& [i, p] : e.coeffs())
      if (p.deg_in(out_slot) > 0) return true;
    return false;
  };
  if (out_slot == "d" || uses_out(x) || uses_out(y))
    fail("SlotCollision", "output slot '" + out_slot + "' already used by an argument");
  Context passive = A.passives();
  if (passive.contains(out_slot))
    fail("SlotCollision", "output slot '" + out_slot + "' is a passive symbol of the table");

  Context target = x.ctx().united(y.ctx()).united(passive).with(out_slot);
  Poly out = Poly::var(target, out_slot);
  Poly d = Poly::var(target, "d");

  Element acc = Element::zero(A.mod, target);
  for (const auto& [i, p] : x.coeffs()) {
    Poly pf = p.lifted(target).substituted("d", -out);
    for (const auto& [j, q] : y.coeffs()) {
      const Element& t = A.table[i][j];
      if (t.is_zero()) continue;
      Poly qf = q.lifted(target).substituted("d", d + out);
      Element base = out_slot == "l" ? t : rename_slot(t, "l", out_slot);
      acc += base.lifted(target).scaled(pf * qf);
    }
  }
  return acc;
}

CheckReport check_grading(const ConformalAlgebra& A) {
  CheckReport rep;
  rep.check = "grading";
  std::size_t n = A.mod->rank();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Parity want = A.mod->parity(i) + A.mod->parity(j);
      const Element& t = A.table[i][j];
      if (t.has_parity(want)) continue;
      // report only the offending components
      Element bad(A.mod, t.ctx());
      for (const auto& [g, c] : t.coeffs())
        if (A.mod->parity(g) != want) bad.set_coeff(g, c);
      rep.add(pair_witness(A.mod, i, j), bad.str());
    }
  return rep;
}

CheckReport check_skew(const ConformalAlgebra& A) {
  CheckReport rep;
  rep.check = "skew";
  std::size_t n = A.mod->rank();
  Poly shift = -Poly::var(A.table_ctx, "l") - Poly::var(A.table_ctx, "d");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      // predicted [g_i g_j] from the transposed entry via l -> -l-d and the
      // Koszul sign
      Element pred = A.table[j][i].substituted("l", shift).scaled(
          Rational(-koszul(A.mod->parity(i), A.mod->parity(j))));
      Element residual = pred - A.table[i][j];
      if (!residual.is_zero()) rep.add(pair_witness(A.mod, i, j), residual.str());
    }
  return rep;
}

CheckReport check_hom_jacobi(const ConformalAlgebra& A) {
  CheckReport rep;
  rep.check = "hom_jacobi";
  std::size_t n = A.mod->rank();
  Context empty = A.passives();
  for (std::size_t i = 0; i < n; ++i) {
    Element a = Element::generator(A.mod, empty, i);
    Element aa = map_apply(A.alpha, a);
    for (std::size_t j = 0; j < n; ++j) {
      Element b = Element::generator(A.mod, empty, j);
      Element ab = map_apply(A.alpha, b);
      int sign = koszul(A.mod->parity(i), A.mod->parity(j));
      for (std::size_t k = 0; k < n; ++k) {
        Element c = Element::generator(A.mod, empty, k);
        Element ac = map_apply(A.alpha, c);

        Element lhs = bracket_eval(A, aa, bracket_eval(A, b, c, "m"), "l");
        Element inner = bracket_eval(A, a, b, "l");
        Context two = lhs.ctx();
        std::string s = two.fresh();
        Element rhs1 = subst_out(bracket_eval(A, inner, ac, s), s,
                                 Poly::var(two, "l") + Poly::var(two, "m"));
        Element rhs2 = bracket_eval(A, ab, bracket_eval(A, a, c, "l"), "m");

        Element residual = lhs - rhs1 - rhs2.scaled(Rational(sign));
        if (!residual.is_zero())
          rep.add("(" + A.mod->name(i) + "," + A.mod->name(j) + "," + A.mod->name(k) + ")",
                  residual.str());
      }
    }
  }
  return rep;
}

CheckReport check_multiplicative(const ConformalAlgebra& A) {
  CheckReport rep;
  rep.check = "multiplicative";
  std::size_t n = A.mod->rank();
  Context empty = A.passives();
  for (std::size_t i = 0; i < n; ++i) {
    Element ai = map_apply(A.alpha, Element::generator(A.mod, empty, i));
    for (std::size_t j = 0; j < n; ++j) {
      Element aj = map_apply(A.alpha, Element::generator(A.mod, empty, j));
      Element lhs = map_apply(A.alpha, A.table[i][j]);
      Element rhs = bracket_eval(A, ai, aj, "l");
      Element residual = lhs.lifted(rhs.ctx()) - rhs;
      if (!residual.is_zero()) rep.add(pair_witness(A.mod, i, j), residual.str());
    }
  }
  return rep;
}

std::vector<CheckReport> check_suite(const ConformalAlgebra& A) {
  return {check_grading(A), check_skew(A), check_hom_jacobi(A), check_multiplicative(A)};
}

ConformalAlgebra cur_algebra(ModulePtr basis, ModuleMap alpha,
                             const std::vector<std::vector<Element>>& lie_table) {
  std::size_t n = basis->rank();
  if (lie_table.size() != n) fail("TableShape", "structure table must be square");
  Context ctx = Context::of({"l"});
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n, Element::zero(basis, ctx)));
  for (std::size_t i = 0; i < n; ++i) {
    if (lie_table[i].size() != n) fail("TableShape", "structure table must be square");
    for (std::size_t j = 0; j < n; ++j) {
      for (const auto& [g, c] : lie_table[i][j].coeffs())
        if (!c.is_constant())
          fail("NotConstant", "structure constants must be scalars, got " + c.str());
      table[i][j] = lie_table[i][j].lifted(ctx);
    }
  }
  for (std::size_t i = 0; i < basis->rank(); ++i)
    for (std::size_t j = 0; j < basis->rank(); ++j)
      if (!alpha.entry(i, j).is_constant())
        fail("NotConstant", "the superalgebra twist must be a scalar matrix");
  return make_algebra(std::move(basis), std::move(alpha), std::move(table));
}

ConformalAlgebra from_hom_associative(ModulePtr mod, ModuleMap alpha,
                                      const std::vector<std::vector<Element>>& assoc_table) {
  std::size_t n = mod->rank();
  if (assoc_table.size() != n) fail("TableShape", "associative table must be square");
  Context ctx = Context::of({"l"});
  for (const auto& row : assoc_table) {
    if (row.size() != n) fail("TableShape", "associative table must be square");
    for (const Element& e : row) ctx = ctx.united(e.ctx());
  }
  Poly shift = -Poly::var(ctx, "l") - Poly::var(ctx, "d");
  std::vector<std::vector<Element>> table(n, std::vector<Element>(n, Element::zero(mod, ctx)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Element ab = assoc_table[i][j].lifted(ctx);
      Element ba = assoc_table[j][i].lifted(ctx).substituted("l", shift);
      table[i][j] = ab - ba.scaled(Rational(koszul(mod->parity(i), mod->parity(j))));
    }
  return make_algebra(std::move(mod), std::move(alpha), std::move(table));
}

std::vector<Element> center_solve(const ConformalAlgebra& A, int deg_l, int deg_d) {
  if (deg_l < 0 || deg_d < 0) fail_usage("degree bounds must be non-negative");
  std::size_t n = A.mod->rank();
  std::size_t dpow = static_cast<std::size_t>(deg_d) + 1;
  std::size_t unknowns = n * dpow; // coefficient of d^e on generator g

  // Residual of [z_l g_j] for the unit candidate d^e g_i is linear in the
  // candidate, so probing units column by column assembles the exact system.
  Context ectx = A.passives();
  Poly d = Poly::var(ectx, "d");
  std::map<std::string, std::size_t> row_of; // (j, component, monomial) -> row
  std::vector<std::vector<std::pair<std::size_t, Rational>>> cols(unknowns);

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e = 0; e < dpow; ++e) {
      Element cand = Element::generator(A.mod, ectx, i).scaled(d.pow(static_cast<std::uint32_t>(e)));
      std::size_t col = i * dpow + e;
      for (std::size_t j = 0; j < n; ++j) {
        Element r = bracket_eval(A, cand, Element::generator(A.mod, ectx, j), "l");
        for (const auto& [g, poly] : r.coeffs())
          for (const auto& [expv, coef] : poly.terms()) {
            std::string key = std::to_string(j) + "." + std::to_string(g);
            for (std::uint32_t x : expv) key += "." + std::to_string(x);
            auto [it, fresh] = row_of.try_emplace(key, row_of.size());
            (void)fresh;
            cols[col].emplace_back(it->second, coef);
          }
      }
    }

  RationalMatrix m(row_of.size(), unknowns);
  for (std::size_t c = 0; c < unknowns; ++c)
    for (const auto& [r, v] : cols[c]) m.at(r, c) += v;

  std::vector<Element> basis;
  for (const auto& v : nullspace(m)) {
    Element z = Element::zero(A.mod, ectx);
    for (std::size_t i = 0; i < n; ++i) {
      Poly p = Poly::zero(ectx);
      for (std::size_t e = 0; e < dpow; ++e)
        if (v[i * dpow + e] != 0)
          p += d.pow(static_cast<std::uint32_t>(e)).scaled(v[i * dpow + e]);
      if (!p.is_zero()) z.set_coeff(i, p);
    }
    basis.push_back(std::move(z));
  }
  return basis;
}

} // namespace homconf
