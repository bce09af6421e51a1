#include <doctest.h>

#include <cmath>
#include <numbers>

#include "amoebakit/error.hpp"
#include "amoebakit/io.hpp"
#include "amoebakit/laurent.hpp"
#include "support/oracles.hpp"

using namespace amoebakit;

namespace {

const std::vector<std::string> kXY = {"x", "y"};

LogPolarPoint randomPoint(SplitMix64& rng, std::size_t dim, double qRange = 1.5) {
    std::vector<double> q(dim);
    std::vector<double> t(dim);
    for (auto& v : q) v = rng.uniform(-qRange, qRange);
    for (auto& v : t) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {q, t};
}

double relErr(Complex a, Complex b) {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
}

} // namespace

TEST_SUITE("laurent") {

TEST_CASE("parse reads the line") {
    const auto f = parse("1 + x + y", kXY);
    CHECK(f.size() == 3);
    CHECK(f.terms().at({0, 0}) == Complex(1.0, 0.0));
    CHECK(f.terms().at({1, 0}) == Complex(1.0, 0.0));
    CHECK(f.terms().at({0, 1}) == Complex(1.0, 0.0));
}

TEST_CASE("parse takes variables in order of appearance") {
    const auto f = parse("y^2 + 3*x");
    CHECK(f.numVars() == 2);
    CHECK(f.terms().count({2, 0}) == 1);
    CHECK(f.terms().count({0, 1}) == 1);
}

TEST_CASE("cancelling terms give an empty polynomial") {
    CHECK_THROWS_AS(parse("x*y^-1 - x*y^-1", kXY), EmptyPolynomial);
}

TEST_CASE("complex coefficient and negative exponent") {
    const auto f = parse("(2-1i)*x^2*y^-3", kXY);
    REQUIRE(f.size() == 1);
    CHECK(f.terms().at({2, -3}) == Complex(2.0, -1.0));
}

TEST_CASE("repeated factors and like terms merge") {
    const auto f = parse("x*x*y + 2*x^2*y - 0.5", kXY);
    CHECK(f.size() == 2);
    CHECK(f.terms().at({2, 1}) == Complex(3.0, 0.0));
    CHECK(f.terms().at({0, 0}) == Complex(-0.5, 0.0));
}

TEST_CASE("parse errors report line and column") {
    try {
        parse("1 + x + + y", kXY, {}, 4);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 9);
    }
    CHECK_THROWS_AS(parse("1 + w", kXY), ParseError);
    CHECK_THROWS_AS(parse("x^65", kXY), ParseError);
    CHECK_THROWS_AS(parse("1e13*x", kXY), ParseError);
    CHECK_THROWS_AS(parse("(1+2)*x", kXY), ParseError);
    CHECK_THROWS_AS(parse("", kXY), ParseError);
}

TEST_CASE("exponent limit is configurable") {
    ParseLimits wide;
    wide.maxExponent = 100;
    CHECK(parse("x^90", kXY, wide).terms().count({90, 0}) == 1);
}

TEST_CASE("format gives the canonical text") {
    CHECK(format(parse("y + x + 1", kXY), kXY) == "1 + x + y");
    CHECK(format(parse("(2-1i)*x^2*y^-3", kXY), kXY) == "(2-1i)*x^2*y^-3");
    CHECK(format(parse("-x - 0.25", kXY), kXY) == "-0.25 - x");
    CHECK(format(parse("(0+1i)*y", kXY), kXY) == "(0+1i)*y");
}

TEST_CASE("format then parse is the identity") {
    SplitMix64 rng(mixSeed(7, 1));
    for (int i = 0; i < 100; ++i) {
        const std::size_t dim = 2 + rng.next() % 3;
        auto f = oracle::randomLaurent(rng, dim, 1 + rng.next() % 8, 5);
        // Some coefficients with awkward binary expansions and pure reals.
        if (i % 3 == 0) {
            auto terms = f.terms();
            terms.begin()->second = Complex(0.1 * (i + 1), 0.0);
            f = LaurentPolynomial(dim, terms);
        }
        const auto names = defaultVarNames(dim);
        const auto text = format(f, names);
        CHECK_MESSAGE(parse(text, names) == f, text);
    }
}

TEST_CASE("evaluate in log-polar form") {
    const auto line = parse("1 + x + y", kXY);
    CHECK(std::abs(evaluate(line, LogPolarPoint({0, 0}, {0, 0})) - Complex(3.0, 0.0)) < 1e-15);
    const double pi = std::numbers::pi;
    CHECK(std::abs(evaluate(line, LogPolarPoint({0, 0}, {pi, pi})) - Complex(-1.0, 0.0)) < 1e-14);
    const auto ratio = parse("x*y^-1", kXY);
    CHECK(std::abs(evaluate(ratio, LogPolarPoint({std::log(2.0), std::log(4.0)}, {0, 0})) - 0.5) < 1e-15);
}

TEST_CASE("evaluate handles huge moduli and refuses overflow") {
    const auto f = parse("x^2 - x", kXY);
    const Complex v = evaluate(f, LogPolarPoint({340.0, 0.0}, {0, 0}));
    CHECK(std::isfinite(v.real()));
    CHECK(v.real() > 0);
    CHECK_THROWS_AS(evaluate(f, LogPolarPoint({351.0, 0.0}, {0, 0})), OverflowError);
    CHECK_THROWS_AS(evaluate(f, LogPolarPoint({0.0}, {0.0})), DimensionMismatch);
}

TEST_CASE("jacobian in log coordinates") {
    const PolySystem line({parse("1 + x + y", kXY)}, kXY);
    const auto j = jacobianW(line, LogPolarPoint::identity(2));
    CHECK(std::abs(j(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(j(0, 1) - 1.0) < 1e-15);

    const PolySystem square({parse("x^2", kXY)}, kXY);
    const auto j2 = jacobianW(square, LogPolarPoint({std::log(3.0), 0.0}, {0, 0}));
    CHECK(std::abs(j2(0, 0) - 18.0) < 1e-12);
    CHECK(std::abs(j2(0, 1)) == 0.0);
}

TEST_CASE("jacobian matches central differences in w") {
    SplitMix64 rng(mixSeed(7, 2));
    const double h = 1e-6;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 1 + trial % 2;
        const std::size_t dim = 2 * n;
        std::vector<LaurentPolynomial> polys;
        for (std::size_t j = 0; j < n; ++j) polys.push_back(oracle::randomLaurent(rng, dim, 5, 3));
        const PolySystem sys(polys, defaultVarNames(dim));
        const auto z = randomPoint(rng, dim, 0.5);
        const auto jac = jacobianW(sys, z);
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < dim; ++k) {
                // Real step in w_k changes q_k.
                auto q = z.q();
                q[k] += h;
                const Complex plus = evaluate(sys.poly(j), LogPolarPoint(q, z.theta()));
                q[k] -= 2 * h;
                const Complex minus = evaluate(sys.poly(j), LogPolarPoint(q, z.theta()));
                const Complex fd = (plus - minus) / (2 * h);
                CHECK(std::abs(fd - jac(j, k)) <= 1e-6 * std::max(1.0, termMagnitude(sys.poly(j), z)));
            }
        }
    }
}

TEST_CASE("conj and conj' act on coefficients and exponents") {
    const auto line = parse("1 + x + y", kXY);
    CHECK(conjPoly(line) == line);
    CHECK(conjPoly(parse("(2-1i)*x", kXY)) == parse("(2+1i)*x", kXY));
    CHECK(conjPrimePoly(line) == parse("1 + x^-1 + y^-1", kXY));
    CHECK(conjPrimePoly(parse("(2-1i)*x^2*y^-1", kXY)) == parse("(2+1i)*x^-2*y", kXY));
}

TEST_CASE("conj and conj' are involutions with the expected evaluation identities") {
    SplitMix64 rng(mixSeed(7, 3));
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 2 + 2 * (trial % 2);
        const auto f = oracle::randomLaurent(rng, dim, 6, 4);
        CHECK(conjPoly(conjPoly(f)) == f);
        CHECK(conjPrimePoly(conjPrimePoly(f)) == f);

        const auto z = randomPoint(rng, dim);
        const Complex value = evaluate(f, z);
        std::vector<double> negTheta(dim);
        std::vector<double> negQ(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            negTheta[k] = -z.theta()[k];
            negQ[k] = -z.q()[k];
        }
        // conj(V) contains conj(z) = (q, -theta).
        CHECK(relErr(evaluate(conjPoly(f), LogPolarPoint(z.q(), negTheta)), std::conj(value)) < 1e-12);
        // conj'(z) = 1 / conj(z) has log-polar form (-q, theta).
        CHECK(relErr(evaluate(conjPrimePoly(f), LogPolarPoint(negQ, z.theta())), std::conj(value)) < 1e-12);
    }
}

TEST_CASE("translate multiplies coefficients by eps^a") {
    const auto line = parse("1 + x + y", kXY);
    CHECK(translate(line, LogPolarPoint::identity(2)) == line);
    const auto x = parse("x", {{"x"}});
    const auto g = translate(x, LogPolarPoint({std::log(2.0)}, {0.0}));
    CHECK(std::abs(g.terms().at({1}) - 2.0) < 1e-15);

    SplitMix64 rng(mixSeed(7, 4));
    for (int trial = 0; trial < 30; ++trial) {
        const auto f = oracle::randomLaurent(rng, 2, 5, 3);
        const auto eps = randomPoint(rng, 2, 0.7);
        const auto z = randomPoint(rng, 2, 0.7);
        CHECK(relErr(evaluate(translate(f, eps), z), evaluate(f, eps * z)) < 1e-12);
    }
}

TEST_CASE("newton polytope keeps vertices only") {
    CHECK(newtonPolytope(parse("1 + x + y", kXY)).vertices() ==
          std::vector<LatticePoint>{{0, 0}, {0, 1}, {1, 0}});
    CHECK(newtonPolytope(parse("1 + x + y + x*y", kXY)).vertices().size() == 4);
    CHECK(newtonPolytope(parse("1 + x + x^2", {{"x"}})).vertices() == std::vector<LatticePoint>{{0}, {2}});
    SplitMix64 rng(mixSeed(7, 5));
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = oracle::randomLaurent(rng, 3, 8, 3);
        CHECK(newtonPolytope(conjPrimePoly(f)) == negate(newtonPolytope(f)));
    }
}

TEST_CASE("systems need exactly 2n variables") {
    CHECK_THROWS_AS(PolySystem({parse("1 + x", {{"x"}})}, {"x"}), DimensionMismatch);
    CHECK_THROWS_AS(PolySystem({parse("1 + x + y", kXY)}, {"x", "x"}), std::exception);
}

} // TEST_SUITE

TEST_SUITE("io") {

TEST_CASE("system file with comments") {
    const auto sys = parseSystemFile("# the line\nvars: x, y\n\nf1: 1 + x + y   # comment\n");
    CHECK(sys.n() == 1);
    CHECK(sys.varNames() == kXY);
    CHECK(formatSystemFile(sys) == "vars: x, y\nf1: 1 + x + y\n");
}

TEST_CASE("system file errors carry file positions") {
    try {
        parseSystemFile("vars: x, y\nf1: 1 + x + * y\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 13);
    }
    CHECK_THROWS_AS(parseSystemFile("f1: 1 + x + y\n"), ParseError);
    CHECK_THROWS_AS(parseSystemFile("vars: x, y\nf2: 1 + x + y\n"), ParseError);
    CHECK_THROWS_AS(parseSystemFile("vars: x, y\nf1: 1 + x + y\nf1: x\n"), ParseError);
    CHECK_THROWS_AS(parseSystemFile("vars: x, 2y\nf1: 1\n"), ParseError);
    CHECK_THROWS_AS(parseSystemFile("vars: x, y, z\nf1: 1 + x + y\n"), DimensionMismatch);
}

TEST_CASE("canonical json round trip") {
    const auto sys = parseSystemFile("vars: a, b, c, d\nf1: 1 + a + (0.5-2i)*b^-1\nf2: c*d - 3\n");
    const auto doc = toJson(sys);
    CHECK(doc["vars"].size() == 4);
    CHECK(systemFromJson(doc) == sys);
    CHECK(parseSystemText(doc.dump()) == sys);
    CHECK(parseSystemText(formatSystemFile(sys)) == sys);
    CHECK_THROWS_AS(parseSystemText("{\"vars\": 3}"), InvalidArgument);
}

} // TEST_SUITE
