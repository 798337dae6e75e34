#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softedge/polyalg.hpp"

#include <random>

using namespace softedge;

namespace {

const RatPoly t = RatPoly::variable("t");
const RatPoly tau = RatPoly::variable("tau");
const RatPoly q = RatPoly::variable("q");
const RatPoly qp = RatPoly::variable("qp");
const RatPoly h = RatPoly::variable("h");
const RatPoly s = RatPoly::variable("s");

RatPoly R(const char* text) { return RatPoly(parse_rational(text)); }

RatPoly random_poly(std::mt19937& rng, const std::vector<RatPoly>& vars, int terms, int maxdeg) {
    std::uniform_int_distribution<int> coef(-9, 9), deg(0, maxdeg), den(1, 5);
    RatPoly p;
    for (int i = 0; i < terms; ++i) {
        RatPoly m(BigRational(coef(rng), den(rng)));
        for (const auto& v : vars) m *= pow(v, static_cast<unsigned>(deg(rng)));
        p += m;
    }
    return p;
}

}  // namespace

TEST_CASE("rational canonical form") {
    BigRational x = parse_rational("6/-4");
    CHECK(x.get_num() == -3);
    CHECK(x.get_den() == 2);
    CHECK(parse_rational("0.25") == BigRational(1, 4));
    CHECK(parse_rational("-1.5") == BigRational(-3, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), PolyError);
}

TEST_CASE("poly_arith examples") {
    CHECK((t + 1) * (t - 1) == pow(t, 2) - 1);
    RatPoly lhs = pow(qp, 2) - t * pow(q, 2) - pow(q, 4);
    CHECK(lhs + (t * pow(q, 2) + pow(q, 4)) == pow(qp, 2));
    CHECK(pow(2 * tau - 1, 2) == 4 * pow(tau, 2) - 4 * tau + 1);
    CHECK((t - t).is_zero());
    CHECK((t - t).vars().empty());
}

TEST_CASE("canonical variable order") {
    RatPoly p = h * t + q * tau;
    CHECK(p.vars() == std::vector<std::string>{"t", "tau", "q", "h"});
    RatPoly z = RatPoly::variable("zeta") * t;
    CHECK(z.vars() == std::vector<std::string>{"t", "zeta"});
}

TEST_CASE("degree cap") {
    set_degree_cap(8);
    CHECK_THROWS_AS(pow(t, 9), PolyError);
    CHECK_NOTHROW(pow(t, 8));
    set_degree_cap(64);
}

TEST_CASE("bit-exact associativity and distributivity") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        RatPoly a = random_poly(rng, {t, tau, q}, 5, 3);
        RatPoly b = random_poly(rng, {t, qp}, 4, 3);
        RatPoly c = random_poly(rng, {tau, q, qp}, 4, 2);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
    }
}

TEST_CASE("exact division") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        RatPoly a = random_poly(rng, {t, tau}, 4, 3);
        RatPoly b = random_poly(rng, {t, tau, q}, 3, 2);
        if (b.is_zero()) continue;
        auto quotient = divide_exact(a * b, b);
        REQUIRE(quotient.has_value());
        CHECK(*quotient == a);
    }
    CHECK_FALSE(divide_exact(pow(t, 2) + 1, t + 1).has_value());
}

TEST_CASE("painleve_diff") {
    CHECK(painleve_diff(q) == qp);
    CHECK(painleve_diff(pow(t, 2)) == 2 * t);
    CHECK(painleve_diff(pow(qp, 2) - t * pow(q, 2) - pow(q, 4)) == -pow(q, 2));
    CHECK(painleve_diff(painleve_diff(q)) == t * q + 2 * pow(q, 3));
    CHECK(painleve_diff(tau * q) == tau * qp);
    CHECK_THROWS_AS(painleve_diff(s), PolyError);
}

TEST_CASE("painleve_diff is a derivation") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        RatPoly a = random_poly(rng, {t, q, qp}, 4, 2);
        RatPoly b = random_poly(rng, {tau, q, qp}, 4, 2);
        CHECK(painleve_diff(a * b) == painleve_diff(a) * b + a * painleve_diff(b));
    }
}

TEST_CASE("json round trip") {
    RatPoly p = R("-141/350") - R("8/175") * pow(t, 3) + R("123456789012345678901234567890/7") * tau * h;
    CHECK(from_json(to_json(p)) == p);
    CHECK(from_json(to_json(RatPoly())) == RatPoly());
    CHECK_THROWS_AS(from_json("{\"vars\":[\"t\"]}"), PolyError);
    auto j = to_json(R("3/10") * pow(t, 2));
    CHECK(j == R"({"vars":["t"],"terms":[{"exp":[2],"num":"3","den":"10"}]})");
}

TEST_CASE("series_reverse reproduces the displayed reversion") {
    TruncatedSeries fwd("h", 2, {t, R("1/5") * pow(t, 2), R("-8/175") * pow(t, 3)});
    TruncatedSeries rev = series_reverse(fwd, "t", "s");
    CHECK(rev[0] == s);
    CHECK(rev[1] == R("-1/5") * pow(s, 2));
    CHECK(rev[2] == R("22/175") * pow(s, 3));

    TruncatedSeries id("h", 3, {t});
    TruncatedSeries rid = series_reverse(id, "t", "s");
    CHECK(rid == TruncatedSeries("h", 3, {s}));
}

TEST_CASE("series_reverse of the four-term Laguerre series composes to identity") {
    RatPoly c1 = -(2 * tau - 1) * R("1/5") * pow(t, 2);
    RatPoly c2 = (43 * pow(tau, 2) - 18 * tau - 8) * R("1/175") * pow(t, 3);
    RatPoly c3 = -(1384 * pow(tau, 3) - 551 * pow(tau, 2) - 212 * tau - 148) * R("1/7875") * pow(t, 4);
    TruncatedSeries fwd("h", 3, {t, c1, c2, c3});
    TruncatedSeries rev = series_reverse(fwd, "t", "s");
    CHECK(rev[1] == (2 * tau - 1) * R("1/5") * pow(s, 2));
    CHECK(rev[2] == (13 * pow(tau, 2) - 38 * tau + 22) * R("1/175") * pow(s, 3));
    CHECK(rev[3] == (34 * pow(tau, 3) - 776 * pow(tau, 2) + 1588 * tau - 823) * R("1/7875") * pow(s, 4));
    // forward(reverse(s)) = s + O(h^4)
    TruncatedSeries comp = compose(fwd, "t", rev);
    CHECK(comp == TruncatedSeries("h", 3, {s}));
}

TEST_CASE("series_reverse is an involution on random series") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<RatPoly> c{t};
        for (int k = 1; k <= 3; ++k) c.push_back(random_poly(rng, {t, tau}, 3, 3));
        TruncatedSeries fwd("h", 3, c);
        TruncatedSeries back = series_reverse(series_reverse(fwd, "t", "s"), "s", "t");
        CHECK(back == fwd);
    }
    CHECK_THROWS_AS(series_reverse(TruncatedSeries("h", 2, {2 * t}), "t", "s"), PolyError);
}

TEST_CASE("half-power series parity") {
    RatPoly hr = RatPoly::variable("hr");
    TruncatedSeries odd = TruncatedSeries::from_poly(hr * t + pow(hr, 3), "hr", 6);
    TruncatedSeries even = TruncatedSeries::from_poly(1 + pow(hr, 2) * q, "hr", 6);
    CHECK(odd.parity() == TruncatedSeries::Parity::Odd);
    CHECK((odd * odd).parity() == TruncatedSeries::Parity::Even);
    CHECK((odd * even).parity() == TruncatedSeries::Parity::Odd);
    CHECK((odd + even).parity() == TruncatedSeries::Parity::Mixed);
}

TEST_CASE("solve_exact") {
    SUBCASE("identity") {
        ExactLinearSystem sys;
        sys.matrix = PolyMatrix::Identity(3, 3);
        sys.rhs.resize(3);
        sys.rhs << t, tau * t, R("1/3");
        PolyVector x = solve_exact(sys);
        for (int i = 0; i < 3; ++i) CHECK(x(i) == sys.rhs(i));
    }
    SUBCASE("random consistent 6x3") {
        std::mt19937 rng(17);
        PolyMatrix A(6, 3);
        PolyVector x0(3);
        for (int j = 0; j < 3; ++j) x0(j) = random_poly(rng, {t, tau}, 3, 2);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 3; ++j) A(i, j) = random_poly(rng, {t, tau}, 2, 2);
        ExactLinearSystem sys{A, A * x0, {"x0", "x1", "x2"}};
        PolyVector x = solve_exact(sys);
        for (int j = 0; j < 3; ++j) CHECK(x(j) == x0(j));
    }
    SUBCASE("inconsistent") {
        PolyMatrix A(2, 1);
        A << t, t;
        PolyVector b(2);
        b << t, 2 * t;
        CHECK_THROWS_AS(solve_exact({A, b, {"x"}}), SolveError);
    }
    SUBCASE("non-polynomial") {
        PolyMatrix A(1, 1);
        A << t;
        PolyVector b(1);
        b << RatPoly(1L);
        try {
            solve_exact({A, b, {"x"}});
            FAIL("expected error");
        } catch (const SolveError& e) {
            CHECK(e.kind() == SolveError::Kind::NonPolynomial);
        }
    }
    SUBCASE("rank deficient") {
        PolyMatrix A(2, 2);
        A << t, 2 * t, tau, 2 * tau;
        PolyVector b(2);
        b << t, tau;
        try {
            solve_exact({A, b, {"x", "y"}});
            FAIL("expected error");
        } catch (const SolveError& e) {
            CHECK(e.kind() == SolveError::Kind::RankDeficient);
        }
    }
}
