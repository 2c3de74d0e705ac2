#include "ecert/errors.hpp"
#include "ecert/expr.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ecert;
using doctest::Approx;

namespace {
double xy(const char* text, double x, double y) { return Expression::parse(text, {"x", "y"})(x, y); }
} // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(xy("1 + 2*3", 0, 0) == 7.0);
    CHECK(xy("(1 + 2)*3", 0, 0) == 9.0);
    CHECK(xy("2^3^2", 0, 0) == 512.0);
    CHECK(xy("-2^2", 0, 0) == -4.0);
    CHECK(xy("2^-1", 0, 0) == 0.5);
    CHECK(xy("8/4/2", 0, 0) == 1.0);
    CHECK(xy("10 - 4 - 3", 0, 0) == 3.0);
    CHECK(xy("+x - -y", 2, 3) == 5.0);
    CHECK(xy("1.5e-3*2E2", 0, 0) == Approx(0.3));
    CHECK(xy(".5 + 3.", 0, 0) == 3.5);
}

TEST_CASE("variables, constants and functions") {
    CHECK(xy("x*y", 2, 5) == 10.0);
    CHECK(xy("pi", 0, 0) == std::numbers::pi);
    CHECK(xy("sin(pi*x)*sin(pi*y)", 0.5, 0.5) == Approx(1.0));
    CHECK(xy("cos(0) + tan(0) + exp(0) + log(1)", 0, 0) == 2.0);
    CHECK(xy("sqrt(x^2 + y^2)", 3, 4) == 5.0);
    CHECK(xy("abs(x) + |y|", -1, -2) == 3.0);
    CHECK(xy("|x - 0.5|*|y|", 0.25, -2) == 0.5);
    CHECK(xy("pow(x, 3) + min(x, y) + max(x, y)", 2, 5) == 15.0);
    CHECK(xy("((x-2)^2 + (y-2)^2)^(-0.75)", 3, 2) == 1.0);
    auto e = Expression::parse("a + 2*b", {"a", "b"});
    const double v[] = {1.0, 4.0};
    CHECK(e(std::span<const double>(v, 2)) == 9.0);
    CHECK(e.text() == "a + 2*b");
    CHECK(evaluate("S*A + K", {{"S", 2}, {"A", 3}, {"K", 1}}) == 7.0);
}

TEST_CASE("parse errors carry the column") {
    CHECK_THROWS_WITH_AS(xy("1 + ", 0, 0), doctest::Contains("column 5"), ParseError);
    CHECK_THROWS_WITH_AS(xy("2*z", 0, 0), doctest::Contains("unknown identifier 'z' at column 3"),
                         ParseError);
    CHECK_THROWS_WITH_AS(xy("foo(x)", 0, 0), doctest::Contains("unknown function 'foo'"), ParseError);
    CHECK_THROWS_WITH_AS(xy("(x + 1", 0, 0), doctest::Contains("expected ')'"), ParseError);
    CHECK_THROWS_WITH_AS(xy("x y", 0, 0), doctest::Contains("trailing input"), ParseError);
    CHECK_THROWS_AS(xy("pow(x)", 0, 0), ParseError);
    CHECK_THROWS_AS(xy("x $ y", 0, 0), ParseError);
    CHECK_THROWS_AS(xy("1..2", 0, 0), ParseError);
    // ParseError is a ConfigurationError
    CHECK_THROWS_AS(xy("|x", 0, 0), ConfigurationError);
}

TEST_CASE("too few values") {
    auto e = Expression::parse("a + b", {"a", "b"});
    const double v[] = {1.0};
    CHECK_THROWS_AS(e(std::span<const double>(v, 1)), ConfigurationError);
}

TEST_CASE("free identifiers") {
    using V = std::vector<std::string>;
    CHECK(free_identifiers("sin(pi*x) + y*x") == V{"x", "y"});
    CHECK(free_identifiers("2.5e-3*C1 + sqrt(kappa)") == V{"C1", "kappa"});
    CHECK(free_identifiers("min + max(a, b)") == V{"min", "a", "b"});
    CHECK(free_identifiers("1e5").empty());
}

TEST_CASE("property: polynomial identities at random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto sq = Expression::parse("(x + y)^2", {"x", "y"});
    auto ex = Expression::parse("x^2 + 2*x*y + y^2", {"x", "y"});
    auto trig = Expression::parse("sin(x)^2 + cos(x)^2", {"x", "y"});
    for (int i = 0; i < 200; ++i) {
        double x = u(rng), y = u(rng);
        CHECK(sq(x, y) == Approx(ex(x, y)).epsilon(1e-12));
        CHECK(trig(x, y) == Approx(1.0).epsilon(1e-14));
    }
}
