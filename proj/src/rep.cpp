#include "homconf/rep.hpp"

#include "homconf/error.hpp"

namespace homconf {

Representation make_representation(ConformalAlgebra alg, ModulePtr mod, ModuleMap beta,
                                   std::vector<ConformalMap> rho) {
  if (!same_module(beta.dom(), mod) || !same_module(beta.cod(), mod))
    fail("ModuleMismatch", "beta must be an endomorphism of the module");
  if (beta.parity() != Parity::even) fail("ParityViolation", "beta must be even");
  if (beta.ctx().contains("l"))
    fail("SlotCollision", "beta must not use the bracket slot l");
  beta.validate("beta");
  if (rho.size() != alg.mod->rank())
    fail("ShapeMismatch", "rho needs one conformal operator per algebra generator");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!same_module(rho[i].dom(), mod) || !same_module(rho[i].cod(), mod))
      fail("ModuleMismatch", "rho(" + alg.mod->name(i) + ") must act on the module");
    if (rho[i].parity() != alg.mod->parity(i))
      fail("ParityViolation", "rho(" + alg.mod->name(i) + ") must have its generator's parity");
    rho[i].validate("rho(" + alg.mod->name(i) + ")");
  }
  return Representation{std::move(alg), std::move(mod), std::move(beta), std::move(rho)};
}

Element rho_apply(const Representation& rep, const Element& a, const Element& v,
                  const Poly& at) {
  if (!same_module(a.mod(), rep.alg.mod)) fail("ModuleMismatch", "rho argument not in the algebra");
  if (!same_module(v.mod(), rep.mod)) fail("ModuleMismatch", "rho target not in the module");
  Context u = a.ctx().united(v.ctx()).united(at.ctx());
  for (const ConformalMap& f : rep.rho) u = u.united(f.passives());
  std::string z = u.fresh("z");
  Context uz = u.with(z);
  Poly mz = Poly::var(uz, z).scaled(Rational(-1));

  Element acc = Element::zero(rep.mod, uz);
  for (const auto& [k, p] : a.coeffs()) {
    Element img = cmap_apply(rep.rho[k], v, z);
    acc += img.scaled(p.lifted(uz).substituted("d", mz));
  }
  return subst_out(acc, z, at);
}

std::vector<CheckReport> rep_check(const Representation& rep) {
  const ConformalAlgebra& A = rep.alg;
  std::size_t nA = A.mod->rank(), nM = rep.mod->rank();

  CheckReport sesqui;
  sesqui.check = "rho.sesquilinearity";
  {
    Context cm = Context::of({"m"});
    Poly m = Poly::var(cm, "m"), d = Poly::var(cm, "d");
    for (std::size_t j = 0; j < nA; ++j)
      for (std::size_t s = 0; s < nM; ++s) {
        Element gj = Element::generator(A.mod, cm, j);
        Element vs = Element::generator(rep.mod, cm, s);
        Element lhs = rho_apply(rep, gj.scaled(d), vs, m);
        Element rhs = rho_apply(rep, gj, vs, m).scaled(m.scaled(Rational(-1)));
        Element residual = lhs - rhs;
        if (!residual.is_zero())
          sesqui.add("(d" + A.mod->name(j) + "," + rep.mod->name(s) + ")", residual.str());
      }
  }

  CheckReport iden;
  iden.check = "rep.identity";
  {
    Context lm = Context::of({"l", "m"}).united(A.passives());
    Poly l = Poly::var(lm, "l"), m = Poly::var(lm, "m");
    for (std::size_t i = 0; i < nA; ++i)
      for (std::size_t j = 0; j < nA; ++j) {
        Element gi = Element::generator(A.mod, lm, i);
        Element gj = Element::generator(A.mod, lm, j);
        Element agi = map_apply(A.alpha, gi);
        Element agj = map_apply(A.alpha, gj);
        Rational kz(koszul(A.mod->parity(i), A.mod->parity(j)));
        for (std::size_t s = 0; s < nM; ++s) {
          Element vs = Element::generator(rep.mod, lm, s);
          Element lhs = rho_apply(rep, A.entry(i, j), map_apply(rep.beta, vs), l + m);
          Element r1 = rho_apply(rep, agi, rho_apply(rep, gj, vs, m), l);
          Element r2 = rho_apply(rep, agj, rho_apply(rep, gi, vs, l), m);
          Element residual = lhs - (r1 - r2.scaled(kz));
          if (!residual.is_zero())
            iden.add("(" + A.mod->name(i) + "," + A.mod->name(j) + ";" + rep.mod->name(s) + ")",
                     residual.str());
        }
      }
  }
  return {sesqui, iden};
}

Representation adjoint(const ConformalAlgebra& A) {
  std::size_t n = A.mod->rank();
  std::vector<ConformalMap> rho;
  rho.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ConformalMap f(A.mod, A.mod, A.mod->parity(i), A.table_ctx);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) f.set_entry(k, j, A.entry(i, j).coeff(k));
    rho.push_back(std::move(f));
  }
  return make_representation(A, A.mod, A.alpha, std::move(rho));
}

Representation rep_shift(const ConformalAlgebra& A, int s) {
  ModuleMap alpha_s = map_power(A.alpha, s);
  std::size_t n = A.mod->rank();
  Context cm = A.table_ctx.united(alpha_s.ctx());
  std::vector<ConformalMap> rho;
  rho.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Element as = map_apply(alpha_s, Element::generator(A.mod, alpha_s.ctx(), i));
    ConformalMap f(A.mod, A.mod, A.mod->parity(i), cm);
    for (std::size_t j = 0; j < n; ++j) {
      Element w = bracket_eval(A, as, Element::generator(A.mod, alpha_s.ctx(), j), "l");
      for (std::size_t k = 0; k < n; ++k) f.set_entry(k, j, w.coeff(k).lifted(cm.united(w.ctx())).restricted(cm));
    }
    rho.push_back(std::move(f));
  }
  return make_representation(A, A.mod, A.alpha, std::move(rho));
}

ConformalAlgebra semidirect(const ConformalAlgebra& A, const Representation& rep) {
  if (!same_module(rep.alg.mod, A.mod))
    fail("ModuleMismatch", "representation belongs to a different algebra");
  std::size_t nR = A.mod->rank(), nM = rep.mod->rank();

  std::vector<std::pair<std::string, Parity>> gens;
  for (std::size_t i = 0; i < nR; ++i) gens.emplace_back(A.mod->name(i), A.mod->parity(i));
  for (std::size_t s = 0; s < nM; ++s) {
    std::string nm = rep.mod->name(s);
    auto taken = [&] {
      for (const auto& [g, p] : gens)
        if (g == nm) return true;
      return false;
    };
    while (taken()) nm += "'";
    gens.emplace_back(nm, rep.mod->parity(s));
  }
  ModulePtr big = make_module(std::move(gens));

  Context actx = A.alpha.ctx().united(rep.beta.ctx());
  ModuleMap twist(big, big, Parity::even, actx);
  for (std::size_t i = 0; i < nR; ++i)
    for (std::size_t j = 0; j < nR; ++j) twist.set_entry(i, j, A.alpha.entry(i, j).lifted(actx));
  for (std::size_t s = 0; s < nM; ++s)
    for (std::size_t t = 0; t < nM; ++t)
      twist.set_entry(nR + s, nR + t, rep.beta.entry(s, t).lifted(actx));

  Context tctx = A.table_ctx;
  for (const ConformalMap& f : rep.rho) tctx = tctx.united(f.passives());

  auto embedR = [&](const Element& e) {
    Element out(big, e.ctx());
    for (const auto& [k, p] : e.coeffs()) out.set_coeff(k, p);
    return out;
  };
  auto embedM = [&](const Element& e) {
    Element out(big, e.ctx());
    for (const auto& [k, p] : e.coeffs()) out.set_coeff(nR + k, p);
    return out;
  };

  Poly l = Poly::var(tctx, "l"), d = Poly::var(tctx, "d");
  std::vector<std::vector<Element>> table(nR + nM,
                                          std::vector<Element>(nR + nM, Element::zero(big, tctx)));
  for (std::size_t i = 0; i < nR; ++i)
    for (std::size_t j = 0; j < nR; ++j) table[i][j] = embedR(A.entry(i, j).lifted(tctx));
  for (std::size_t i = 0; i < nR; ++i)
    for (std::size_t t = 0; t < nM; ++t) {
      Element u = Element::generator(rep.mod, tctx, t);
      Element gi = Element::generator(A.mod, tctx, i);
      table[i][nR + t] = embedM(rho_apply(rep, gi, u, l)).lifted(tctx);
    }
  for (std::size_t s = 0; s < nM; ++s)
    for (std::size_t j = 0; j < nR; ++j) {
      Element u = Element::generator(rep.mod, tctx, s);
      Element gj = Element::generator(A.mod, tctx, j);
      Element w = rho_apply(rep, gj, u, (l + d).scaled(Rational(-1)));
      table[nR + s][j] =
          embedM(w).scaled(Rational(-koszul(rep.mod->parity(s), A.mod->parity(j)))).lifted(tctx);
    }
  return make_algebra(big, std::move(twist), std::move(table));
}

CheckReport dual_rep_condition_check(const ConformalAlgebra& A, const Representation& rep) {
  if (!same_module(rep.alg.mod, A.mod))
    fail("ModuleMismatch", "representation belongs to a different algebra");
  CheckReport rep_out;
  rep_out.check = "rep.dual_criterion";
  std::size_t nA = A.mod->rank(), nM = rep.mod->rank();
  Context lm = Context::of({"l", "m"}).united(A.passives());
  Poly l = Poly::var(lm, "l"), m = Poly::var(lm, "m");
  for (std::size_t i = 0; i < nA; ++i)
    for (std::size_t j = 0; j < nA; ++j) {
      Element gi = Element::generator(A.mod, lm, i);
      Element gj = Element::generator(A.mod, lm, j);
      Element agi = map_apply(A.alpha, gi);
      Element agj = map_apply(A.alpha, gj);
      Rational kz(koszul(A.mod->parity(i), A.mod->parity(j)));
      for (std::size_t s = 0; s < nM; ++s) {
        Element vs = Element::generator(rep.mod, lm, s);
        Element lhs = map_apply(rep.beta, rho_apply(rep, A.entry(i, j), vs, l + m));
        Element r1 = rho_apply(rep, gi, rho_apply(rep, agj, vs, m), l).scaled(kz);
        Element r2 = rho_apply(rep, gj, rho_apply(rep, agi, vs, l), m);
        Element residual = lhs - (r1 - r2);
        if (!residual.is_zero())
          rep_out.add("(" + A.mod->name(i) + "," + A.mod->name(j) + ";" + rep.mod->name(s) + ")",
                      residual.str());
      }
    }
  return rep_out;
}

} // namespace homconf
