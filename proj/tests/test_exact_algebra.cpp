#include <catch2/catch_amalgamated.hpp>

#include "sncres/algebra.hpp"
#include "sncres/factor.hpp"
#include "sncres/numberfield.hpp"
#include "sncres/poly.hpp"
#include "sncres/support.hpp"
#include "support/oracles.hpp"

using namespace sncres;

namespace {

QPoly P(const std::string& s) { return parse_poly(s); }

// Random dense polynomial in vars, total degree <= deg, coefficients in
// [-5, 5]; retries until nonzero in the main variable when required.
QPoly random_poly(Rng& rng, const std::vector<std::string>& vars, int deg) {
    QPoly out;
    for (int tries = 0; tries < 100; ++tries) {
        out = QPoly();
        // draw a handful of monomials
        long nterms = rng.next_int(1, 5);
        for (long k = 0; k < nterms; ++k) {
            Monomial m;
            int budget = deg;
            for (auto& v : vars) {
                int e = static_cast<int>(rng.next_int(0, budget));
                if (e > 0) m[v] = static_cast<unsigned>(e);
                budget -= e;
            }
            Rat c = rat_of(rng.next_int(-5, 5));
            out = out + QPoly::term(c, m);
        }
        if (!out.is_zero()) return out;
    }
    return QPoly(1);
}

}  // namespace

TEST_CASE("rational canonical form") {
    REQUIRE(rat_to_string(rat_of(4, -6)) == "-2/3");
    REQUIRE(rat_to_string(rat_of(7, 1)) == "7");
    REQUIRE(rat_from_string("-2/3") == rat_of(-2, 3));
    REQUIRE(rat_from_string("5") == rat_of(5));
    REQUIRE_THROWS_AS(rat_from_string("x"), input_error);
}

TEST_CASE("poly parse, canonical order, round trip") {
    REQUIRE(P("1 + x + x*y").to_string() == "x*y + x + 1");
    REQUIRE(P("y + x").to_string() == "x + y");
    REQUIRE(P("w^2 - x0*x1").to_string() == "w^2 - x0*x1");
    REQUIRE(P("(x+1)^2").to_string() == "x^2 + 2*x + 1");
    REQUIRE(P("-4*t^3").to_string() == "-4*t^3");
    REQUIRE(P("t^2/4 - 1/2").to_string() == "1/4*t^2 - 1/2");
    REQUIRE(P("0").is_zero());
    // round trip on a messy one
    QPoly q = P("3*x^2*y - 7/2*y^3 + x - 11");
    REQUIRE(parse_poly(q.to_string()) == q);
    REQUIRE_THROWS_AS(P("x +"), input_error);
    REQUIRE_THROWS_AS(P("2 ** 3"), input_error);
}

TEST_CASE("poly arithmetic basics") {
    REQUIRE(P("(x+y)*(x-y)") == P("x^2 - y^2"));
    REQUIRE((P("x^2 - y^2") - P("x^2")) == P("-y^2"));
    REQUIRE(P("x^2+2*x+1").derivative("x") == P("2*x+2"));
    REQUIRE(divide_exact(P("x^2 - y^2"), P("x - y")) == P("x + y"));
    REQUIRE_THROWS_AS(divide_exact(P("x^2 + 1"), P("x - y")), internal_error);
    std::map<std::string, Rat> at{{"x", rat_of(2)}, {"y", rat_of(3)}};
    REQUIRE(P("x^2 + y").evaluate(at) == rat_of(7));
}

TEST_CASE("resultant pinned convention and examples") {
    // Res_x(x - a, x - b) = a - b: forced by Res(f,g) = lc(f)^deg(g) *
    // prod g(alpha_i) and equal to the Sylvester determinant.
    REQUIRE(resultant(P("x - a"), P("x - b"), "x") == P("a - b"));
    REQUIRE(oracles::sylvester_resultant(P("x - a"), P("x - b"), "x") == P("a - b"));
    REQUIRE(resultant(P("x^2 - 1"), P("x - 2"), "x") == P("3"));
    REQUIRE(oracles::sylvester_resultant(P("x^2 - 1"), P("x - 2"), "x") == P("3"));
    REQUIRE(resultant(P("x^3 + 2*x - 1"), P("1"), "x") == P("1"));
    REQUIRE(resultant(P("5"), P("x^2 + 1"), "x") == P("25"));
    REQUIRE_THROWS_AS(resultant(P("3"), P("t"), "x"), input_error);
}

TEST_CASE("resultant equals Sylvester determinant on random inputs") {
    Rng rng(20260816);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<std::string> vars{"x", "t"};
        QPoly f = random_poly(rng, vars, 4);
        QPoly g = random_poly(rng, vars, 4);
        if (f.degree("x") < 1 && g.degree("x") < 1) continue;
        REQUIRE(resultant(f, g, "x") == oracles::sylvester_resultant(f, g, "x"));
    }
}

TEST_CASE("resultant multiplicativity") {
    Rng rng(77001);
    int done = 0;
    while (done < 100) {
        QPoly f = random_poly(rng, {"x"}, 4);
        QPoly g = random_poly(rng, {"x"}, 3);
        QPoly h = random_poly(rng, {"x"}, 3);
        if (f.degree("x") < 1 || g.is_zero() || h.is_zero()) continue;
        REQUIRE(resultant(f, g * h, "x") == resultant(f, g, "x") * resultant(f, h, "x"));
        ++done;
    }
}

TEST_CASE("discriminant examples") {
    REQUIRE(discriminant(P("x^2 + b*x + c"), "x") == P("b^2 - 4*c"));
    REQUIRE(discriminant(P("x^2 - t"), "x") == P("4*t"));
    REQUIRE(discriminant(P("x - a"), "x") == P("1"));
    REQUIRE_THROWS_AS(discriminant(P("t"), "x"), input_error);
}

TEST_CASE("discriminant vanishes exactly on repeated factors") {
    Rng rng(5150);
    int done = 0;
    while (done < 60) {
        QPoly f = random_poly(rng, {"x"}, 8);
        if (f.degree("x") < 1) continue;
        QPoly d = discriminant(f, "x");
        QPoly g = gcd_poly(f, f.derivative("x"));
        REQUIRE(d.is_zero() == (g.degree("x") >= 1));
        ++done;
    }
}

TEST_CASE("squarefree part examples and division property") {
    REQUIRE(squarefree_part(P("x^2"), "x") == P("x"));
    REQUIRE(squarefree_part(P("(x-1)^2*(x+2)"), "x") == P("(x-1)*(x+2)"));
    REQUIRE(squarefree_part(P("x^4 - 2*x^3 + x^2"), "x") == P("x^2 - x"));
    Rng rng(31337);
    int done = 0;
    while (done < 40) {
        QPoly f = random_poly(rng, {"x"}, 6);
        if (f.degree("x") < 1) continue;
        QPoly s = squarefree_part(f, "x");
        // f is a multiple of its squarefree part
        REQUIRE_NOTHROW(divide_exact(f, s));
        // and the squarefree part has trivial gcd with its derivative
        REQUIRE(gcd_poly(s, s.derivative("x")).degree("x") < 1);
        ++done;
    }
}

TEST_CASE("total squarefree part strips every repeated factor") {
    QPoly f = P("x^2*y^2*(x+y)");
    REQUIRE(total_squarefree_part(f) == primitive_integer(P("x*y*(x+y)")));
    REQUIRE(total_squarefree_part(P("8")) == P("1"));
    REQUIRE(total_squarefree_part(P("(2*x - 2)^2")) == P("x - 1"));
}

TEST_CASE("multivariate gcd") {
    REQUIRE(gcd_poly(P("x^2 - y^2"), P("x^2 + 2*x*y + y^2")) == P("x + y"));
    REQUIRE(gcd_poly(P("2*x"), P("4*x^2")) == P("x"));
    REQUIRE(gcd_poly(P("x*t - t"), P("x^2 - x")) == P("x - 1"));
    REQUIRE(gcd_poly(P("x + 1"), P("x + 2")) == P("1"));
    REQUIRE(gcd_poly(QPoly(), P("-3*x")) == P("x"));
}

TEST_CASE("factor_rational pinned examples") {
    auto fs = factor_rational(P("t^3 - t"));
    REQUIRE(fs.size() == 3);
    REQUIRE(fs[0].first == P("t - 1"));
    REQUIRE(fs[1].first == P("t"));
    REQUIRE(fs[2].first == P("t + 1"));
    for (auto& [g, m] : fs) REQUIRE(m == 1);

    auto f2 = factor_rational(P("x^2 + 1"));
    REQUIRE(f2.size() == 1);
    REQUIRE(f2[0].first == P("x^2 + 1"));
    REQUIRE(f2[0].second == 1);

    auto f3 = factor_rational(P("x^4 - x^2 - 2"));
    REQUIRE(f3.size() == 2);
    REQUIRE(f3[0].first == P("x^2 - 2"));
    REQUIRE(f3[1].first == P("x^2 + 1"));

    auto f4 = factor_rational(P("x^4 - 2*x^3 + x^2"));
    REQUIRE(f4.size() == 2);
    REQUIRE(f4[0].first == P("x - 1"));
    REQUIRE(f4[0].second == 2);
    REQUIRE(f4[1].first == P("x"));
    REQUIRE(f4[1].second == 2);
}

TEST_CASE("factor_rational stresses Hensel lifting and recombination") {
    QPoly f = P("(x^2 - 2)*(x^2 - 3)*(x^2 - x - 1)");
    auto fs = factor_rational(f);
    REQUIRE(fs.size() == 3);
    QPoly prod(1);
    for (auto& [g, m] : fs) {
        REQUIRE(is_irreducible_over_Q(g));
        for (int i = 0; i < m; ++i) prod = prod * g;
    }
    REQUIRE(divide_exact(f, prod).is_constant());

    // A case where mod-p factors must recombine: x^4 + 1 is irreducible over
    // Q but splits mod every prime.
    auto f5 = factor_rational(P("x^4 + 1"));
    REQUIRE(f5.size() == 1);
    REQUIRE(f5[0].first == P("x^4 + 1"));
}

TEST_CASE("factor_rational re-expansion identity on random products") {
    Rng rng(900913);
    int done = 0;
    while (done < 200) {
        QPoly f(1);
        long parts = rng.next_int(1, 3);
        for (long i = 0; i < parts; ++i) f = f * random_poly(rng, {"x"}, 3);
        if (f.degree("x") < 1) continue;
        QPoly prod(1);
        for (auto& [g, m] : factor_rational(f)) {
            REQUIRE(g.degree("x") >= 1);
            for (int k = 0; k < m; ++k) prod = prod * g;
        }
        REQUIRE(divide_exact(f, prod).is_constant());
        ++done;
    }
}

TEST_CASE("rational_roots") {
    auto r = rational_roots(P("(2*x - 1)*(x + 3)*(x^2 + 1)"));
    REQUIRE(r == std::vector<Rat>{rat_of(-3), rat_of(1, 2)});
}

TEST_CASE("number field arithmetic in Q(sqrt 2)") {
    auto F = make_field({rat_of(-2), rat_of(0), rat_of(1)}, "r");
    AlgNum r = AlgNum::generator(F);
    AlgNum one_plus = AlgNum(rat_of(1)) + r;
    AlgNum one_minus = AlgNum(rat_of(1)) - r;
    REQUIRE(one_plus * one_minus == AlgNum(rat_of(-1)));
    REQUIRE(r * r == AlgNum(rat_of(2)));
    REQUIRE(one_plus.inverse() == r - AlgNum(rat_of(1)));
    REQUIRE((one_plus / one_plus) == AlgNum(rat_of(1)));
    REQUIRE(one_plus.to_string() == "1 + r");
    REQUIRE_THROWS_AS(AlgNum(rat_of(0)).inverse(), input_error);
    // mixing two distinct fields is a bug trap
    auto G = make_field({rat_of(-3), rat_of(0), rat_of(1)}, "s");
    REQUIRE_THROWS_AS(r + AlgNum::generator(G), internal_error);
}

TEST_CASE("valuation of univariate polynomials") {
    REQUIRE(valuation_at(P("t^2 - t^3"), "t", rat_of(0)) == 2);
    REQUIRE(valuation_at(P("1 + t"), "t", rat_of(0)) == 0);
    REQUIRE(valuation_at(P("(t - 2)^3*(t + 1)"), "t", rat_of(2)) == 3);
    REQUIRE_THROWS_AS(valuation_at(QPoly(), "t", rat_of(0)), input_error);
}

TEST_CASE("rng determinism") {
    Rng a(42), b(42);
    for (int i = 0; i < 16; ++i) REQUIRE(a.next_u64() == b.next_u64());
    Rng c(43);
    REQUIRE(Rng(42).next_u64() != c.next_u64());
}

TEST_CASE("factorization splits polynomials with zero constant term") {
    // regression: a factor whose constant term is zero must survive the
    // constant-term divisibility screen in recombination
    auto fs = factor_rational(P("5*t^3 - 4*t^2 + 6*t"));
    REQUIRE(fs.size() == 2);
    CHECK(fs[0].first == P("t"));
    CHECK(fs[0].second == 1);
    CHECK(fs[1].first == P("5*t^2 - 4*t + 6"));

    auto gs = factor_rational(P("5*t^4 + t^3 + 2*t^2 + 6*t"));
    REQUIRE(gs.size() == 3);
    CHECK(gs[0].first == P("t"));
    CHECK(gs[1].first == P("t + 1"));
    CHECK(gs[2].first == P("5*t^2 - 4*t + 6"));
}
