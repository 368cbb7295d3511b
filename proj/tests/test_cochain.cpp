#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homconf/cochain.hpp"
#include "homconf/error.hpp"
#include "test_util.hpp"

using namespace homconf;

namespace {

// Is every stored value identically zero?
bool all_values_zero(const Cochain& g) {
  for (const auto& [t, v] : g.values)
    if (!v.is_zero()) return false;
  return true;
}

// One-tuple lookup helpers so the checks below read like the formulas.
const Element& val(const Cochain& g, std::vector<std::size_t> t) { return g.values.at(t); }

Cochain zero_cochain(const Representation& target, int arity, Parity parity) {
  return make_cochain(target, arity, parity, {});
}

} // namespace

TEST_CASE("differential base case reproduces the bracket action") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  Context e = Context::empty();

  Cochain g = make_cochain(ad, 0, Parity::even, {{{}, Element::generator(A.mod, e, 0)}});
  CHECK(cochain_validate(g).pass());

  Cochain dg = differential(g);
  CHECK(dg.arity == 1);
  CHECK(dg.parity == Parity::even);

  Context c1 = Context::of({"l1"});
  Poly d = Poly::var(c1, "d");
  Poly l1 = Poly::var(c1, "l1");
  Element L = Element::generator(A.mod, c1, 0);
  Element E = Element::generator(A.mod, c1, 1);
  // (d gamma)_l(a) = [a_l L] for gamma = L: the module acts back on the value.
  CHECK(val(dg, {0}) == L.scaled(d + l1.scaled(Rational(2))));
  CHECK(val(dg, {1}) == E.scaled(d.scaled(Rational(1, 2)) + l1.scaled(Rational(3, 2))));

  CHECK(cochain_validate(dg).pass());
  CHECK(all_values_zero(differential(dg)));

  // Linearity in the stored value: the zero cochain stays zero at any arity.
  CHECK(all_values_zero(differential(zero_cochain(ad, 0, Parity::even))));
  CHECK(all_values_zero(differential(zero_cochain(ad, 1, Parity::odd))));
  CHECK(all_values_zero(differential(zero_cochain(ad, 2, Parity::even))));
}

TEST_CASE("differential base case carries the cochain-parity Koszul factor") {
  // gamma = E is odd, so (d gamma)_l(a) = (-1)^{|a|} [a_l E].
  ConformalAlgebra A = testutil::ns_super_algebra();
  Representation ad = adjoint(A);
  Cochain g = make_cochain(ad, 0, Parity::odd,
                           {{{}, Element::generator(A.mod, Context::empty(), 1)}});
  CHECK(cochain_validate(g).pass());

  Cochain dg = differential(g);
  Context c1 = Context::of({"l1"});
  Element L = Element::generator(A.mod, c1, 0);
  Element E = Element::generator(A.mod, c1, 1);
  CHECK(val(dg, {0}) == E.scaled(Poly::var(c1, "d") + Poly::var(c1, "l1").scaled(Rational(3, 2))));
  CHECK(val(dg, {1}) == L.scaled(Rational(-2))); // -[E_l E]
  CHECK(cochain_validate(dg).pass());
  CHECK(all_values_zero(differential(dg)));
}

TEST_CASE("evaluation is multilinear and conformally antilinear") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  Context c1 = Context::of({"l1"});
  Element L1 = Element::generator(A.mod, c1, 0);
  Element E1 = Element::generator(A.mod, c1, 1);
  // gamma(L) = l1^2 L, gamma(E) = 7 E
  Cochain g = make_cochain(
      ad, 1, Parity::even,
      {{{0}, L1.scaled(Poly::var(c1, "l1") * Poly::var(c1, "l1"))}, {{1}, E1.scaled(Rational(7))}});
  CHECK(cochain_validate(g).pass());

  Context cm = Context::of({"m"});
  Poly m = Poly::var(cm, "m");
  Poly d = Poly::var(cm, "d");
  Element Lm = Element::generator(A.mod, cm, 0);
  Element Em = Element::generator(A.mod, cm, 1);

  // gamma((d^2+3) L at m) = ((-m)^2+3) m^2 L
  Element got = cochain_eval(g, {Lm.scaled(d * d + Poly::constant(cm, Rational(3)))}, {m});
  CHECK(got == Lm.scaled((m * m + Poly::constant(cm, Rational(3))) * (m * m)));

  // additivity across generators
  Element mixed = cochain_eval(g, {Lm + Em.scaled(d)}, {m});
  CHECK(mixed == Lm.scaled(m * m) + Em.scaled((-m).scaled(Rational(7))));

  // zero argument gives zero
  CHECK(cochain_eval(g, {Element::zero(A.mod, cm)}, {m}).is_zero());
}

TEST_CASE("evaluation reorders arguments with the transposition sign") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  Context c2 = Context::of({"l1", "l2"});
  Element E2 = Element::generator(A.mod, c2, 1);
  // even cochain, only gamma(L,E) = (l1 - 2 l2) E nonzero
  Poly v = Poly::var(c2, "l1") - Poly::var(c2, "l2").scaled(Rational(2));
  Cochain g = make_cochain(ad, 2, Parity::even, {{{0, 1}, E2.scaled(v)}});
  CHECK(cochain_validate(g).pass());

  Context cab = Context::of({"r", "s"});
  Poly r = Poly::var(cab, "r"), s = Poly::var(cab, "s");
  Element La = Element::generator(A.mod, cab, 0);
  Element Ea = Element::generator(A.mod, cab, 1);

  Element fwd = cochain_eval(g, {La, Ea}, {r, s});
  CHECK(fwd == Ea.scaled(r - s.scaled(Rational(2))));
  // gamma(E at s, L at r) = -(-1)^{|E||L|} gamma(L at r, E at s)
  Element swp = cochain_eval(g, {Ea, La}, {s, r});
  CHECK(swp == fwd.scaled(Rational(-1)));
}

TEST_CASE("validation enforces the slot-swap rule on repeated generators") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  Context c2 = Context::of({"l1", "l2"});
  Poly l1 = Poly::var(c2, "l1"), l2 = Poly::var(c2, "l2");
  Element L2 = Element::generator(A.mod, c2, 0);

  // (L,L) is an even pair: the value must be antisymmetric in l1, l2.
  CHECK(cochain_validate(make_cochain(ad, 2, Parity::even, {{{0, 0}, L2.scaled(l1 - l2)}})).pass());
  CheckReport bad = cochain_validate(make_cochain(ad, 2, Parity::even, {{{0, 0}, L2.scaled(l1 + l2)}}));
  CHECK_FALSE(bad.pass());
  REQUIRE(!bad.residuals.empty());
  CHECK(bad.residuals[0].first.find("swap(L,L)") != std::string::npos);

  // (E,E) is an odd pair: the sign flips and the value must be symmetric.
  CHECK(cochain_validate(make_cochain(ad, 2, Parity::even, {{{1, 1}, L2.scaled(l1 + l2)}})).pass());
  CHECK_FALSE(
      cochain_validate(make_cochain(ad, 2, Parity::even, {{{1, 1}, L2.scaled(l1 - l2)}})).pass());
}

TEST_CASE("validation enforces twist commutation and parity homogeneity") {
  ConformalAlgebra A = testutil::xy_algebra(Rational(2)); // alpha = diag(1,2)
  Representation ad = adjoint(A);
  Context e = Context::empty();
  Element x = Element::generator(A.mod, e, 0);
  Element y = Element::generator(A.mod, e, 1);

  // arity 0: beta(gamma) == gamma picks out the alpha-fixed part
  CHECK(cochain_validate(make_cochain(ad, 0, Parity::even, {{{}, x}})).pass());
  CheckReport r = cochain_validate(make_cochain(ad, 0, Parity::even, {{{}, y}}));
  CHECK_FALSE(r.pass());
  REQUIRE(!r.residuals.empty());
  CHECK(r.residuals[0].first.find("commute") != std::string::npos);

  // arity 1: gamma(alpha a) == beta(gamma(a)); value y on tuple (y) scales the
  // same way on both sides, value y on tuple (x) does not.
  Context c1 = Context::of({"l1"});
  Element y1 = Element::generator(A.mod, c1, 1);
  CHECK(cochain_validate(make_cochain(ad, 1, Parity::even, {{{1}, y1}})).pass());
  CHECK_FALSE(cochain_validate(make_cochain(ad, 1, Parity::even, {{{0}, y1}})).pass());

  // parity violation is its own witness
  ConformalAlgebra N = testutil::ns_algebra();
  Representation nad = adjoint(N);
  CheckReport p = cochain_validate(make_cochain(
      nad, 1, Parity::even, {{{0}, Element::generator(N.mod, Context::of({"l1"}), 1)}}));
  CHECK_FALSE(p.pass());
  REQUIRE(!p.residuals.empty());
  CHECK(p.residuals[0].first.find("parity(L)") != std::string::npos);
}

TEST_CASE("constraint-solved cochain bases validate") {
  struct Shape {
    ConformalAlgebra alg;
    int arity;
    Parity parity;
  };
  std::vector<Shape> shapes;
  shapes.push_back({testutil::ns_algebra(), 0, Parity::even});
  shapes.push_back({testutil::ns_algebra(), 1, Parity::even});
  shapes.push_back({testutil::ns_algebra(), 1, Parity::odd});
  shapes.push_back({testutil::ns_super_algebra(), 2, Parity::even});
  shapes.push_back({testutil::xy_algebra(Rational(2)), 0, Parity::even});
  shapes.push_back({testutil::xy_algebra(Rational(2)), 1, Parity::even});
  shapes.push_back({testutil::abelian_algebra(), 1, Parity::even});

  for (const auto& sh : shapes) {
    Representation ad = adjoint(sh.alg);
    auto basis = cochain_space_basis(ad, sh.arity, sh.parity, 2);
    CHECK(!basis.empty());
    for (const auto& b : basis) CHECK(cochain_validate(b).pass());
  }

  // the twist constraint genuinely cuts the space down: over the xy current
  // algebra with alpha = diag(1,2) some raw coefficient grid entries are gone
  Representation free_ad = adjoint(testutil::xy_algebra(Rational(1))); // alpha = id
  Representation cut_ad = adjoint(testutil::xy_algebra(Rational(2)));
  CHECK(cochain_space_basis(cut_ad, 1, Parity::even, 2).size() <
        cochain_space_basis(free_ad, 1, Parity::even, 2).size());

  // and can cut it to nothing: odd 1-cochains over the abelian algebra would
  // need 2c = 3c on the diagonal twist, so only zero survives
  CHECK(cochain_space_basis(adjoint(testutil::abelian_algebra()), 1, Parity::odd, 2).empty());
}

TEST_CASE("applying the differential twice gives zero on random cochains") {
  struct Shape {
    ConformalAlgebra alg;
    int arity;
    Parity parity;
  };
  std::vector<Shape> shapes;
  shapes.push_back({testutil::ns_algebra(), 0, Parity::even});
  shapes.push_back({testutil::ns_algebra(), 0, Parity::odd});
  shapes.push_back({testutil::ns_algebra(), 1, Parity::even});
  shapes.push_back({testutil::ns_algebra(), 1, Parity::odd});
  shapes.push_back({testutil::xy_algebra(Rational(2)), 0, Parity::even});
  shapes.push_back({testutil::xy_algebra(Rational(2)), 1, Parity::even});
  shapes.push_back({testutil::abelian_algebra(), 1, Parity::even});

  for (const auto& sh : shapes) {
    Representation ad = adjoint(sh.alg);
    auto basis = cochain_space_basis(ad, sh.arity, sh.parity, 2);
    REQUIRE(!basis.empty());
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      Cochain g = random_cochain(basis, seed);
      CHECK(cochain_validate(g).pass());
      Cochain dg = differential(g);
      CHECK(cochain_validate(dg).pass());
      CHECK(all_values_zero(differential(dg)));
    }
  }
}

TEST_CASE("d^2 = 0 at arity 2 pins the second-sum Koszul exponent") {
  // With three arguments and odd generators in front, the prefix parity sum
  // enters the second-sum sign. The variant exponent that counts parities
  // only from position p (instead of from the start) fails exactly here,
  // while agreeing on every lower arity.
  ConformalAlgebra A = testutil::ns_super_algebra();
  Representation ad = adjoint(A);
  for (Parity par : {Parity::even, Parity::odd}) {
    auto basis = cochain_space_basis(ad, 2, par, 2);
    REQUIRE(!basis.empty());
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      Cochain g = random_cochain(basis, seed);
      CHECK(cochain_validate(g).pass());
      Cochain dg = differential(g);
      CHECK(cochain_validate(dg).pass());
      CHECK(all_values_zero(differential(dg)));
    }
  }
}

TEST_CASE("shifted differential: identity twist collapses all shifts") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  auto basis = cochain_space_basis(ad, 1, Parity::even, 2);
  Cochain g = random_cochain(basis, 11);

  Cochain d0 = differential(g);
  Cochain dplain = differential_s(g, 0);
  Cochain dneg = differential_s(g, -1);
  for (const auto& [t, v] : d0.values) {
    CHECK(dplain.values.at(t) == v);
    CHECK(dneg.values.at(t) == v);
  }
}

TEST_CASE("shifted differential squares to zero through a genuine inverse") {
  // alpha = diag(1,2) is invertible but not the identity, so d_{-1} really
  // routes through alpha^{-1}.
  ConformalAlgebra A = testutil::xy_algebra(Rational(2));
  Representation ad = adjoint(A);
  auto basis = cochain_space_basis(ad, 1, Parity::even, 2);
  REQUIRE(!basis.empty());
  for (std::uint64_t seed = 2; seed <= 4; ++seed) {
    Cochain g = random_cochain(basis, seed);
    Cochain dg = differential_s(g, -1);
    CHECK(cochain_validate(dg).pass());
    CHECK(all_values_zero(differential_s(dg, -1)));
  }
}

TEST_CASE("shifted differential error cases") {
  // s = -1 without an invertible twist
  ConformalAlgebra A0 = testutil::xy_algebra(Rational(0));
  Representation ad0 = adjoint(A0);
  Cochain g0 = zero_cochain(ad0, 1, Parity::even);
  CHECK_THROWS_AS(differential_s(g0, -1), Error);
  try {
    differential_s(g0, -1);
  } catch (const Error& e) {
    CHECK(e.code == "NotInvertible");
  }

  // target valued in a foreign module is not adjoint-type
  ConformalAlgebra A = testutil::ns_algebra();
  ModulePtr M = make_module({{"u", Parity::even}, {"w", Parity::odd}});
  std::vector<ConformalMap> rho;
  for (std::size_t i = 0; i < A.mod->rank(); ++i)
    rho.push_back(ConformalMap::zero(M, M, A.mod->parity(i), Context::empty()));
  Representation zr = make_representation(A, M, ModuleMap::diagonal(M, {Rational(1), Rational(1)}),
                                          std::move(rho));
  Cochain gz = zero_cochain(zr, 1, Parity::even);
  CHECK_THROWS_AS(differential_s(gz, -1), Error);
}

TEST_CASE("bracket viewed as a 2-cochain restricts back to the bracket") {
  for (ConformalAlgebra A : {testutil::ns_algebra(), testutil::ns_super_algebra()}) {
    Representation tgt = rep_shift(A, -1);
    Cochain psi = bracket_cochain(A, tgt);
    CHECK(cochain_validate(psi).pass());
    Poly back = -(Poly::var(Context::of({"l1"}), "d") + Poly::var(Context::of({"l1"}), "l1"));
    for (const auto& [t, v] : psi.values) {
      Element restored = subst_out(v, "l2", back);
      Element direct = bracket_eval(A, Element::generator(A.mod, Context::empty(), t[0]),
                                    Element::generator(A.mod, Context::empty(), t[1]), "l1");
      CHECK(restored == direct.lifted(restored.ctx()));
    }
  }
}

TEST_CASE("2-cocycle condition") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation tgt = rep_shift(A, -1);

  // the zero cochain is a cocycle
  CHECK(cocycle2_check(A, zero_cochain(tgt, 2, Parity::even)).pass());

  // the bracket itself is a cocycle: its condition is the Jacobi identity
  CHECK(cocycle2_check(A, bracket_cochain(A, tgt)).pass());

  // The full condition d_{-1} psi == 0 is strictly stronger than its
  // restriction to the diagonal l3 = -l1-l2-d (the form that governs
  // first-order deformations). With a nonzero odd-odd bracket the lifted
  // bracket separates the two: (d psi)(E,E,E) = 3(d+l1+l2+l3) E, nonzero as
  // a 3-cochain yet identically zero on the diagonal.
  ConformalAlgebra S = testutil::ns_super_algebra();
  Cochain spsi = bracket_cochain(S, rep_shift(S, -1));
  CheckReport sr = cocycle2_check(S, spsi);
  CHECK_FALSE(sr.pass());
  CHECK(sr.check == "cocycle2");
  Cochain sdq = differential_s(spsi, -1);
  Context c3 = Context::of({"l1", "l2"});
  Poly diag = -(Poly::var(c3, "d") + Poly::var(c3, "l1") + Poly::var(c3, "l2"));
  bool some_nonzero = false;
  for (const auto& [t, v] : sdq.values) {
    if (!v.is_zero()) some_nonzero = true;
    CHECK(subst_out(v, "l3", diag).is_zero());
  }
  CHECK(some_nonzero);

  // a generic valid 2-cochain is not a cocycle
  auto basis = cochain_space_basis(tgt, 2, Parity::even, 2);
  REQUIRE(!basis.empty());
  bool saw_failure = false;
  for (std::uint64_t seed = 1; seed <= 3 && !saw_failure; ++seed) {
    CheckReport r = cocycle2_check(A, random_cochain(basis, seed));
    if (!r.pass()) {
      saw_failure = true;
      CHECK(!r.residuals.empty());
      CHECK(r.check == "cocycle2");
    }
  }
  CHECK(saw_failure);

  // a parity-violating value is reported by validation, not the cocycle pass
  Context c2 = Context::of({"l1", "l2"});
  Cochain bad = make_cochain(tgt, 2, Parity::even,
                             {{{0, 0}, Element::generator(A.mod, c2, 1)}});
  CheckReport rb = cocycle2_check(A, bad);
  CHECK_FALSE(rb.pass());
  CHECK(rb.check == "cochain.validate");

  // a non-skew bracket table fails validation before the cocycle condition
  ConformalAlgebra M = testutil::ns_algebra(true);
  CheckReport rm = cocycle2_check(M, bracket_cochain(M, adjoint(M)));
  CHECK_FALSE(rm.pass());
  CHECK(rm.check == "cochain.validate");
}

TEST_CASE("random cochains are reproducible from the seed") {
  Representation ad = adjoint(testutil::ns_algebra());
  auto basis = cochain_space_basis(ad, 1, Parity::even, 2);
  Cochain a = random_cochain(basis, 42);
  Cochain b = random_cochain(basis, 42);
  Cochain c = random_cochain(basis, 43);
  bool same = true, differ = false;
  for (const auto& [t, v] : a.values) {
    if (!(b.values.at(t) == v)) same = false;
    if (!(c.values.at(t) == v)) differ = true;
  }
  CHECK(same);
  CHECK(differ);
}

TEST_CASE("cochain construction rejects malformed input") {
  ConformalAlgebra A = testutil::ns_algebra();
  Representation ad = adjoint(A);
  Context c1 = Context::of({"l1"});
  Element L1 = Element::generator(A.mod, c1, 0);

  CHECK_THROWS_AS(make_cochain(ad, -1, Parity::even, {}), Error);
  // unsorted tuple
  CHECK_THROWS_AS(make_cochain(ad, 2, Parity::even,
                               {{{1, 0}, Element::generator(A.mod, Context::of({"l1", "l2"}), 1)}}),
                  Error);
  // out-of-range index
  CHECK_THROWS_AS(make_cochain(ad, 1, Parity::even, {{{5}, L1}}), Error);
  // wrong tuple length
  CHECK_THROWS_AS(make_cochain(ad, 2, Parity::even, {{{0}, L1}}), Error);
  // value in a foreign slot
  CHECK_THROWS_AS(
      make_cochain(ad, 1, Parity::even, {{{0}, Element::generator(A.mod, Context::of({"m"}), 0)}}),
      Error);
  // reserved passive name
  CHECK_THROWS_AS(make_cochain(ad, 1, Parity::even, {}, Context::of({"l7"})), Error);
  // arity/slot-count mismatch at evaluation time
  Cochain g = zero_cochain(ad, 1, Parity::even);
  CHECK_THROWS_AS(cochain_eval(g, {}, {}), Error);
}
