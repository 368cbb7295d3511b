#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homconf/error.hpp"
#include "homconf/module.hpp"

using namespace homconf;

namespace {
ModulePtr ns_module() {
  return make_module({{"L", Parity::even}, {"E", Parity::odd}});
}
} // namespace

TEST_CASE("parity algebra") {
  CHECK(Parity::even + Parity::even == Parity::even);
  CHECK(Parity::even + Parity::odd == Parity::odd);
  CHECK(Parity::odd + Parity::odd == Parity::even);
  CHECK(koszul(Parity::odd, Parity::odd) == -1);
  CHECK(koszul(Parity::odd, Parity::even) == 1);
  CHECK(koszul(Parity::even, Parity::even) == 1);
}

TEST_CASE("elements: arithmetic, parity, substitution") {
  ModulePtr M = ns_module();
  Context c = Context::of({"l"});
  Element L = Element::generator(M, c, 0);
  Element E = Element::generator(M, c, 1);
  Poly d = Poly::var(c, "d");
  Poly l = Poly::var(c, "l");

  Element x = L.scaled(d + l.scaled(Rational(2)));
  CHECK(x.coeff(0) == d + l.scaled(Rational(2)));
  CHECK(x.coeff(1).is_zero());
  CHECK((x - x).is_zero());
  CHECK(x.has_parity(Parity::even));
  CHECK(!x.has_parity(Parity::odd));
  CHECK(x.parity() == Parity::even);
  CHECK(!(x + E).parity().has_value()); // mixed
  CHECK(Element::zero(M, c).has_parity(Parity::odd));

  // substitution happens in every coefficient
  Element y = x.substituted("l", -d);
  CHECK(y.coeff(0) == d - d.scaled(Rational(2)));

  // rename_slot moves l to m
  Element r = rename_slot(x, "l", "m");
  CHECK(r.ctx() == Context::of({"m"}));
  CHECK(r.coeff(0) == Poly::var(r.ctx(), "d") + Poly::var(r.ctx(), "m").scaled(Rational(2)));
  Element two = x.lifted(Context::of({"l", "l2"}));
  CHECK_THROWS_AS(rename_slot(two, "l", "l2"), std::logic_error);

  // subst_out drops the slot from the context
  Element s = subst_out(x, "l", Poly::var(Context::empty(), "d"));
  CHECK(s.ctx() == Context::empty());
  CHECK(s.coeff(0) == Poly::var(Context::empty(), "d").scaled(Rational(3)));
}

TEST_CASE("element parsing") {
  ModulePtr M = ns_module();
  Context c = Context::of({"l"});
  Poly d = Poly::var(c, "d");
  Poly l = Poly::var(c, "l");

  CHECK(parse_element("0", M, c).is_zero());
  CHECK(parse_element("L", M, c) == Element::generator(M, c, 0));
  CHECK(parse_element("-L", M, c) == -Element::generator(M, c, 0));
  CHECK(parse_element("2 L", M, c) == Element::generator(M, c, 0).scaled(Rational(2)));
  CHECK(parse_element("1/2 E", M, c) == Element::generator(M, c, 1).scaled(Rational(1, 2)));
  CHECK(parse_element("(d + 2*l) L", M, c) ==
        Element::generator(M, c, 0).scaled(d + l.scaled(Rational(2))));
  Element both = parse_element("(d) L - (l) E + L", M, c);
  CHECK(both.coeff(0) == d + Poly::constant(c, Rational(1)));
  CHECK(both.coeff(1) == -l);

  // printer round-trips
  CHECK(parse_element(both.str(), M, c) == both);
  CHECK(Element::zero(M, c).str() == "0");

  CHECK_THROWS_AS(parse_element("Q", M, c), Error);
  CHECK_THROWS_AS(parse_element("(d L", M, c), Error);
  CHECK_THROWS_AS(parse_element("L +", M, c), Error);
  CHECK_THROWS_AS(parse_element("", M, c), Error);
}

TEST_CASE("module maps: apply, compose, validate") {
  ModulePtr M = ns_module();
  Context empty = Context::empty();
  Poly d = Poly::var(empty, "d");

  // alpha = id
  ModuleMap id = ModuleMap::identity(M, empty);
  Element L = Element::generator(M, Context::of({"l"}), 0);
  CHECK(map_apply(id, L) == L.lifted(L.ctx()));

  // d-linear: f(L) = (d) L means f(p(d) L) = p(d) d L -- no shift
  ModuleMap f = ModuleMap::zero(M, M, Parity::even, empty);
  f.set_entry(0, 0, d);
  Element x = L.scaled(Poly::var(L.ctx(), "l"));
  Element fx = map_apply(f, x);
  CHECK(fx.coeff(0) == Poly::var(fx.ctx(), "l") * Poly::var(fx.ctx(), "d"));

  // composition is matrix product
  ModuleMap g = ModuleMap::diagonal(M, {Rational(2), Rational(3)});
  ModuleMap fg = map_compose(f, g);
  CHECK(fg.entry(0, 0) == d.scaled(Rational(2)));
  CHECK(fg.entry(1, 1).is_zero());

  // parity validation: an even map may not send even gen to odd gen
  ModuleMap bad = ModuleMap::zero(M, M, Parity::even, empty);
  bad.set_entry(1, 0, Poly::constant(empty, Rational(1)));
  CHECK_THROWS_AS(bad.validate("alpha"), Error);
  ModuleMap odd_ok = ModuleMap::zero(M, M, Parity::odd, empty);
  odd_ok.set_entry(1, 0, Poly::constant(empty, Rational(1)));
  odd_ok.validate("odd map"); // fine
}

TEST_CASE("determinant, powers, regularity") {
  ModulePtr M = ns_module();
  Context empty = Context::empty();
  Poly d = Poly::var(empty, "d");

  ModuleMap a = ModuleMap::diagonal(M, {Rational(2), Rational(3)});
  CHECK(map_det(a) == Poly::constant(empty, Rational(6)));
  CHECK(regularity_check(a));

  ModuleMap inv = map_power(a, -1);
  CHECK(inv.entry(0, 0) == Poly::constant(empty, Rational(1, 2)));
  CHECK(inv.entry(1, 1) == Poly::constant(empty, Rational(1, 3)));
  CHECK(map_compose(a, inv) == ModuleMap::identity(M, empty));

  CHECK(map_power(a, 0) == ModuleMap::identity(M, empty));
  CHECK(map_power(a, 2).entry(0, 0) == Poly::constant(empty, Rational(4)));
  CHECK(map_power(a, -2).entry(1, 1) == Poly::constant(empty, Rational(1, 9)));

  // d-dependent determinant is not a constant: not regular, power fails
  ModuleMap b = ModuleMap::identity(M, empty);
  b.set_entry(0, 0, d);
  CHECK(!regularity_check(b));
  CHECK_THROWS_AS(map_power(b, -1), Error);
  try {
    map_power(b, -1);
  } catch (const Error& e) {
    CHECK(e.code == "NotInvertible");
  }

  // non-diagonal: [[1,1],[0,1]] on an all-even module
  ModulePtr M2 = make_module({{"x", Parity::even}, {"y", Parity::even}});
  ModuleMap u = ModuleMap::identity(M2, empty);
  u.set_entry(0, 1, Poly::constant(empty, Rational(1)));
  CHECK(map_det(u) == Poly::constant(empty, Rational(1)));
  ModuleMap uinv = map_power(u, -1);
  CHECK(uinv.entry(0, 1) == Poly::constant(empty, Rational(-1)));
  CHECK(map_compose(u, uinv) == ModuleMap::identity(M2, empty));

  // 3x3 with d entries: det by hand
  ModulePtr M3 = make_module({{"a", Parity::even}, {"b", Parity::even}, {"c", Parity::even}});
  ModuleMap t = ModuleMap::zero(M3, M3, Parity::even, empty);
  t.set_entry(0, 0, d);
  t.set_entry(0, 2, Poly::constant(empty, Rational(1)));
  t.set_entry(1, 1, d + Poly::constant(empty, Rational(1)));
  t.set_entry(2, 0, Poly::constant(empty, Rational(1)));
  t.set_entry(2, 2, d);
  // det = (d+1) * (d*d - 1)
  CHECK(map_det(t) == (d + Poly::constant(empty, Rational(1))) * (d * d - Poly::constant(empty, Rational(1))));
}
