#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "solvshear/scalar.hpp"

using namespace solvshear;

TEST_CASE("parameter interning ignores underscores") {
  CHECK(Params::id("a_1") == Params::id("a1"));
  CHECK(Params::canonical("a_1") == "a1");
}

TEST_CASE("arithmetic") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  Scalar p = (a + b) * (a - b);
  CHECK(p == a * a - b * b);
  CHECK((p - p).is_zero());
  CHECK(Scalar(2) / Rational(4) == Scalar(Rational(1) / 2));
  CHECK((a * Rational(0)).is_zero());
  CHECK(p.degree() == 2);
  CHECK(Scalar(7).is_constant());
  CHECK(Scalar(7).constant_value() == 7);
  CHECK(!a.is_constant());
}

TEST_CASE("exact division") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  Scalar p = (a + b) * (a + b) * Rational(3);
  auto q = p.try_divide(a + b);
  REQUIRE(q.has_value());
  CHECK(*q == Rational(3) * (a + b));
  CHECK(!(a * a + b).try_divide(a + b).has_value());
  CHECK(!p.try_divide(Scalar(0)).has_value());
  auto c = p.try_divide(Scalar(3));
  REQUIRE(c.has_value());
  CHECK(*c == (a + b) * (a + b));
}

TEST_CASE("substitution is polynomial composition") {
  Scalar a = Scalar::param("a");
  Scalar b = Scalar::param("b");
  Scalar c = Scalar::param("c");
  Scalar p = Rational(2) * c * c + a;
  // c -> -(a+b)
  Scalar s = p.substitute(Params::id("c"), -(a + b));
  CHECK(s == Rational(2) * (a + b) * (a + b) + a);
  CHECK(p.instantiate({{Params::id("c"), 3}, {Params::id("a"), Rational(1) / 2}}) ==
        Scalar(Rational(37) / 2));
}

TEST_CASE("proportionality factor") {
  Scalar a = Scalar::param("a");
  std::vector<Scalar> u = {Rational(2) * a, -a, Scalar(0)};
  std::vector<Scalar> v = {Scalar(2), Scalar(-1), Scalar(0)};
  auto f = proportionality_factor(u, v);
  REQUIRE(f.has_value());
  CHECK(*f == a);
  std::vector<Scalar> w = {Scalar(2), Scalar(1), Scalar(0)};
  CHECK(!proportionality_factor(u, w).has_value());
  // zero slots on the right must force zero slots on the left
  std::vector<Scalar> x = {Rational(2) * a, -a, a};
  CHECK(!proportionality_factor(x, v).has_value());
}
