// Shared fixture builders for the unit tests. Everything is constructed
// in code so the tests do not depend on the file-format layer.
#pragma once

#include "homconf/algebra.hpp"

namespace homconf::testutil {

// Rank-2 superalgebra with one even generator L and one odd generator E:
//   [L l L] = (d + 2l) L
//   [L l E] = (d + 3/2 l) E
//   [E l L] = (1/2 d + 3/2 l) E
//   [E l E] = 0
// together with alpha = id. Passing `mutant_ll` replaces the (L,L) entry by
// (d + 3l) L, which breaks skew-symmetry and the Jacobi identity.
inline ConformalAlgebra ns_algebra(bool mutant_ll = false) {
  ModulePtr M = make_module({{"L", Parity::even}, {"E", Parity::odd}});
  Context c = Context::of({"l"});
  Poly d = Poly::var(c, "d");
  Poly l = Poly::var(c, "l");
  Element L = Element::generator(M, c, 0);
  Element E = Element::generator(M, c, 1);

  std::vector<std::vector<Element>> t(2, std::vector<Element>(2, Element::zero(M, c)));
  t[0][0] = L.scaled(d + l.scaled(Rational(mutant_ll ? 3 : 2)));
  t[0][1] = E.scaled(d + l.scaled(Rational(3, 2)));
  t[1][0] = E.scaled(d.scaled(Rational(1, 2)) + l.scaled(Rational(3, 2)));
  return make_algebra(M, ModuleMap::identity(M, Context::empty()), std::move(t));
}

// Variant of the rank-2 fixture with [E l E] = 2L (Neveu-Schwarz-type odd-odd
// bracket). Still a Hom-Lie conformal superalgebra with alpha = id; used where
// a nonzero odd-odd bracket changes an outcome.
inline ConformalAlgebra ns_super_algebra() {
  ModulePtr M = make_module({{"L", Parity::even}, {"E", Parity::odd}});
  Context c = Context::of({"l"});
  Poly d = Poly::var(c, "d");
  Poly l = Poly::var(c, "l");
  Element L = Element::generator(M, c, 0);
  Element E = Element::generator(M, c, 1);
  std::vector<std::vector<Element>> t(2, std::vector<Element>(2, Element::zero(M, c)));
  t[0][0] = L.scaled(d + l.scaled(Rational(2)));
  t[0][1] = E.scaled(d + l.scaled(Rational(3, 2)));
  t[1][0] = E.scaled(d.scaled(Rational(1, 2)) + l.scaled(Rational(3, 2)));
  t[1][1] = L.scaled(Rational(2));
  return make_algebra(M, ModuleMap::identity(M, Context::empty()), std::move(t));
}

// Abelian rank-2 current algebra (one even, one odd generator), twist
// diag(2,3): every table entry is zero.
inline ConformalAlgebra abelian_algebra() {
  ModulePtr M = make_module({{"a", Parity::even}, {"b", Parity::odd}});
  return cur_algebra(M, ModuleMap::diagonal(M, {Rational(2), Rational(3)}),
                     {{Element::zero(M, Context::empty()), Element::zero(M, Context::empty())},
                      {Element::zero(M, Context::empty()), Element::zero(M, Context::empty())}});
}

// Current algebra of the 2-dimensional even Lie algebra [x,y] = y. The twist
// alpha = diag(1,c0) is an endomorphism for any scalar c0.
inline ConformalAlgebra xy_algebra(const Rational& c0 = Rational(1)) {
  ModulePtr M = make_module({{"x", Parity::even}, {"y", Parity::even}});
  Context e = Context::empty();
  Element y = Element::generator(M, e, 1);
  std::vector<std::vector<Element>> sc(2, std::vector<Element>(2, Element::zero(M, e)));
  sc[0][1] = y;
  sc[1][0] = -y;
  return cur_algebra(M, ModuleMap::diagonal(M, {Rational(1), c0}), std::move(sc));
}

} // namespace homconf::testutil
