#include <doctest.h>

#include <cmath>

#include "plw/errors.hpp"
#include "plw/expression.hpp"

using plw::Expression;

TEST_CASE("arithmetic and precedence") {
  CHECK(Expression("1+2*3")(0, 0, 0, 0) == 7.0);
  CHECK(Expression("(1+2)*3")(0, 0, 0, 0) == 9.0);
  CHECK(Expression("2^3^2")(0, 0, 0, 0) == doctest::Approx(512.0));
  CHECK(Expression("-2^2")(0, 0, 0, 0) == doctest::Approx(-4.0));
  CHECK(Expression("8/4/2")(0, 0, 0, 0) == 1.0);
  CHECK(Expression("1.5e-1")(0, 0, 0, 0) == doctest::Approx(0.15));
}

TEST_CASE("variables and functions") {
  const Expression e("x^2 + y*z - t");
  CHECK(e(1.5, 2.0, 3.0, 0.5) == doctest::Approx(2.25 + 6.0 - 0.5));
  CHECK_FALSE(e.steady());
  CHECK(Expression("sin(x)+cos(y)")(0.3, 0.4, 0, 0) == doctest::Approx(std::sin(0.3) + std::cos(0.4)));
  CHECK(Expression("exp(abs(x))")(-1.0, 0, 0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(Expression("min(x, y) + max(x, y)")(2.0, -1.0, 0, 0) == doctest::Approx(1.0));
  CHECK(Expression("pi")(0, 0, 0, 0) == doctest::Approx(M_PI));
  CHECK(Expression("e")(0, 0, 0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(Expression("x*y").steady());
}

TEST_CASE("syntax errors") {
  for (const char* bad : {"", "1+", "(1", "foo(x)", "sin(x,y)", "min(x)", "x y", "2**3", "w"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(Expression{bad}, plw::InvalidArgument);
  }
}
