#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homconf/error.hpp"
#include "homconf/poly.hpp"

using namespace homconf;

TEST_CASE("context ordering and basics") {
  Context c = Context::of({"m", "l1", "l", "l2"});
  CHECK(c.slots() == std::vector<std::string>{"l", "l1", "l2", "m"});
  CHECK(c.contains("l2"));
  CHECK(!c.contains("d")); // d is implicit, never a slot
  CHECK(c.index_of("l1") == 1);
  CHECK(c.with("s").contains("s"));
  CHECK(!c.without("m").contains("m"));
  CHECK(c.fresh() == "z1");
  CHECK(c.with("z1").fresh() == "z2");

  Context a = Context::of({"l"});
  Context b = Context::of({"m"});
  CHECK(a.united(b) == Context::of({"l", "m"}));
  CHECK(a.united(b).contains_all(a));

  CHECK(slot_less("l2", "l10")); // numeric suffix compares as a number
  CHECK(slot_less("l", "l1"));
  CHECK(slot_less("l10", "m"));

  CHECK_THROWS_AS(Context::of({"d"}), Error);
  CHECK_THROWS_AS(Context::of({"l", "l"}), Error);
}

TEST_CASE("arithmetic and the lambda-shift products") {
  Context c = Context::of({"l", "m"});
  Poly d = Poly::var(c, "d");
  Poly l = Poly::var(c, "l");
  Poly m = Poly::var(c, "m");

  // (d + l)(d + 3/2 l) = d^2 + 5/2 l d + 3/2 l^2
  Poly prod = (d + l) * (d + l.scaled(Rational(3, 2)));
  Poly expect = d.pow(2) + (l * d).scaled(Rational(5, 2)) + l.pow(2).scaled(Rational(3, 2));
  CHECK(prod == expect);

  CHECK((prod - expect).is_zero());
  CHECK(prod.deg_in("d") == 2);
  CHECK(prod.deg_in("l") == 2);
  CHECK(prod.deg_in("m") == 0);
  CHECK(prod.total_deg() == 2);
  CHECK(Poly::zero(c).total_deg() == -1);

  // substitution m -> -l - d used by skew-symmetry
  Poly p = (d + m.scaled(Rational(2)));
  Poly q = p.substituted("m", -l - d);
  CHECK(q == -d - l.scaled(Rational(2)));

  // coefficient extraction
  CHECK(prod.coeff_of("d", 1) == l.scaled(Rational(5, 2)));
  CHECK(prod.coeff_of("l", 2) == Poly::constant(c, Rational(3, 2)));
  CHECK(prod.coeff_of("m", 1).is_zero());

  CHECK(Poly::constant(c, Rational(7)).is_constant());
  CHECK(Poly::constant(c, Rational(7)).constant_value() == 7);
  CHECK(!prod.is_constant());
}

TEST_CASE("lift and restrict between contexts") {
  Context small = Context::of({"l"});
  Context big = Context::of({"l", "m"});
  Poly p = Poly::var(small, "d") + Poly::var(small, "l");
  Poly up = p.lifted(big);
  CHECK(up.ctx() == big);
  CHECK(up.restricted(small) == p);

  Poly uses_m = Poly::var(big, "m");
  CHECK_THROWS_AS(uses_m.restricted(small), std::logic_error);
}

TEST_CASE("parsing round trips") {
  Context c = Context::of({"l", "m"});
  CHECK(parse_poly("d^2 + 5/2*l*d + 3/2*l^2", c) ==
        parse_poly("(d + l) * (d + 3/2*l)", c));
  CHECK(parse_poly("0", c).is_zero());
  CHECK(parse_poly("-l", c) == -Poly::var(c, "l"));
  CHECK(parse_poly("2", c) == Poly::constant(c, Rational(2)));
  CHECK(parse_poly("1/2", c) == Poly::constant(c, Rational(1, 2)));
  CHECK(parse_poly("l - m", c) == Poly::var(c, "l") - Poly::var(c, "m"));
  CHECK(parse_poly("(d+l)^3", c) == (Poly::var(c, "d") + Poly::var(c, "l")).pow(3));

  // printer output parses back to the same polynomial
  Poly p = parse_poly("3*d^2*l - 1/3*m + 7 - l*m*d", c);
  CHECK(parse_poly(p.str(), c) == p);
  CHECK(Poly::zero(c).str() == "0");

  CHECK_THROWS_AS(parse_poly("q + 1", c), Error);   // unknown slot
  CHECK_THROWS_AS(parse_poly("1/0", c), Error);     // zero denominator
  CHECK_THROWS_AS(parse_poly("l +", c), Error);     // dangling operator
  CHECK_THROWS_AS(parse_poly("l ^ l", c), Error);   // non-integer exponent
  CHECK_THROWS_AS(parse_poly("l / m", c), Error);   // no division operator
  CHECK_THROWS_AS(parse_poly("", c), Error);
}

TEST_CASE("printing is deterministic and reparses") {
  Context c = Context::of({"l1", "l2"});
  Poly p = parse_poly("l2^2 - 2*l1*l2 + d*l1 - 4", c);
  std::string s1 = p.str();
  std::string s2 = (p + Poly::zero(c)).str();
  CHECK(s1 == s2);
  CHECK(parse_poly(s1, c) == p);
}
