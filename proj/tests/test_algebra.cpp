#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softedge/algebra.hpp"

#include <cmath>

using namespace softedge;

namespace {

RatPoly Q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return RatPoly(r);
}

const RatPoly t = RatPoly::variable("t");
const RatPoly tau = RatPoly::variable("tau");

RatPoly at_zero(const RatPoly& p) { return p.substitute("tau", BigRational(0)); }

}  // namespace

TEST_CASE("series parameters") {
    const auto g = series_params(EnsembleKind::Gaussian);
    const auto l = series_params(EnsembleKind::Laguerre);
    CHECK(g.alpha1 == Q(-2, 3));
    CHECK(g.alpha2 == Q(-10, 9));
    CHECK(g.beta1 == Q(1, 3));
    CHECK(g.gamma1 == Q(8, 3));
    CHECK_FALSE(g.delta1.has_value());
    REQUIRE(l.delta1.has_value());
    CHECK(*l.delta1 == 2 * (tau - 1));
    CHECK(at_zero(l.alpha1) == g.alpha1);
    CHECK(at_zero(l.alpha2) == g.alpha2);
    CHECK(at_zero(l.beta1) == g.beta1);
    CHECK(at_zero(l.gamma1) == g.gamma1);

    const auto d0 = shift_series(g, 0, 4), d1 = shift_series(g, 1, 4);
    CHECK(d0[1] == 1);
    CHECK(d1[1] == -1);
    CHECK(d0[3] == Q(-2, 3) * t);
    CHECK(d1[3] == Q(2, 3) * t);
    CHECK(d0[4] == Q(1, 3));
    CHECK(d1[4] == Q(1, 3));
}

TEST_CASE("series parameters against the scaling maps") {
    // x = mu_n + sigma_n t = mu_{n-1/2+nu} + sigma_{n-1/2+nu} t_nu; residuals are the next orders
    // (2/9 h^{7/2} for t_nu, O(h^3) for h_nu and tau_nu).
    const double t0 = 0.7;
    for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Laguerre}) {
        const bool lag = kind == EnsembleKind::Laguerre;
        for (double n : {250.0, 4000.0}) {
            const auto s = lag ? make_scaling(kind, 2, n, 3 * n) : make_scaling(kind, 2, n);
            const double x = s.mu + s.sigma * t0, h = s.h, tv = s.tau;
            const auto sp = series_params(kind);
            const double a1 = sp.alpha1.evaluate({{"tau", tv}}), a2 = sp.alpha2.evaluate({{"tau", tv}});
            const double b1 = sp.beta1.evaluate({}), g1 = sp.gamma1.evaluate({{"tau", tv}});
            for (int nu = 0; nu <= 1; ++nu) {
                const double sg = nu ? -1 : 1;
                const auto sn = lag ? make_scaling(kind, 2, n - 0.5 + nu, 3 * n - 0.5 + nu)
                                    : make_scaling(kind, 2, n - 0.5 + nu);
                const double tn = (x - sn.mu) / sn.sigma;
                const double pred = t0 * (1 + sg * a1 * std::pow(h, 1.5) + a2 * h * h * h) +
                                    sg * std::sqrt(h) * (1 + sg * b1 * std::pow(h, 1.5));
                CHECK((tn - pred) / std::pow(h, 3.5) == doctest::Approx(sg * 2.0 / 9).epsilon(0.05));
                CHECK(std::fabs(sn.h / h - 1 - sg * g1 * std::pow(h, 1.5)) < 10 * std::pow(h, 3));
                if (lag) {
                    const double d1 = sp.delta1->evaluate({{"tau", tv}});
                    CHECK(std::fabs(sn.tau / tv - 1 - sg * d1 * std::pow(h, 1.5)) < std::pow(h, 3));
                }
            }
        }
    }
}

TEST_CASE("first-order relation") {
    for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Laguerre}) {
        const RelationJ1 rel = build_relation_j1(kind);
        CHECK(rel.series[0] == 1);  // F_+ F_- = F_2
        CHECK(rel.series[1].is_zero());
        CHECK(rel.bracket.is_zero());
        CHECK(rel.series[2] == RatPoly::variable("ep") + RatPoly::variable("em"));
    }
}

TEST_CASE("the 13 x 4 system") {
    const RelationSystem rs = assemble_system_m1(EnsembleKind::Gaussian, true);
    REQUIRE(rs.system.matrix.rows() == 16 - 8 + 5);
    REQUIRE(rs.system.matrix.cols() == 4);
    const RatPoly t2 = t * t;
    const RatPoly M[13][4] = {{1, -1, 0, 0}, {2 * t, 2 * t, 1, 1}, {0, 0, 1, -1}, {2, 2, -t2, -t2}, {0, 0, 1, -1},
                              {0, 0, 1, 1},  {0, 0, 1, 1},         {0, 0, 1, -1}, {1, 1, 0, 0},     {0, 0, 1, 1},
                              {0, 0, 1, -1}, {0, 0, 1, 1},         {0, 0, 1, 1}};
    const RatPoly p11 = RatPoly::variable("p211"), p12 = RatPoly::variable("p212");
    const RatPoly rhs[13] = {0, 4 * t * p11 + 4 * p12, 0, 4 * p11 - 4 * t2 * p12, 0, 4 * p12, 4 * p12,
                             0, 2 * p11,                4 * p12, 0, 4 * p12, 4 * p12};
    for (int i = 0; i < 13; ++i) {
        for (int j = 0; j < 4; ++j) CHECK(rs.system.matrix(i, j) == M[i][j]);
        CHECK(rs.system.rhs(i) == rhs[i]);
    }
    // Symbolic solution p_{+-,11} = p_{2,11}, p_{+-,12} = 2 p_{2,12}.
    const PolyVector x = solve_exact(rs.system);
    CHECK(x(0) == p11);
    CHECK(x(1) == p11);
    CHECK(x(2) == 2 * p12);
    CHECK(x(3) == 2 * p12);

    for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Laguerre}) {
        const auto sol = assemble_and_solve(kind);
        const auto& e21 = expansion_term(2, 1, kind);
        CHECK(sol[0] == e21.coeffs[0]);
        CHECK(sol[1] == 2 * e21.coeffs[1]);
        // Zero residual in every row.
        const RelationSystem num = assemble_system_m1(kind);
        for (int i = 0; i < 13; ++i) {
            const RatPoly row = num.system.matrix(i, 0) * sol[0] + num.system.matrix(i, 1) * sol[0] +
                                num.system.matrix(i, 2) * sol[1] + num.system.matrix(i, 3) * sol[1];
            CHECK(row == num.system.rhs(i));
        }
    }
    const auto g = assemble_and_solve(EnsembleKind::Gaussian), l = assemble_and_solve(EnsembleKind::Laguerre);
    CHECK(l[0].uses("tau"));
    for (int k = 0; k < 2; ++k) CHECK(at_zero(l[k]) == g[k]);
}

TEST_CASE("m = 2, 3 transformations") {
    const auto g2 = transform_m23(2, EnsembleKind::Gaussian);
    auto P = [](int j, int k) { return expansion_term(2, j, EnsembleKind::Gaussian).coeffs.at(k - 1); };
    CHECK(g2[3] == 8 * P(2, 4) - 2 * P(1, 2) * P(1, 2));
    CHECK(g2[1] == 2 * P(2, 2) - Q(1, 2) * P(1, 1) * P(1, 1) - P(1, 2).derivative("t").derivative("t"));
    for (int m : {2, 3}) {
        const auto g = transform_m23(m, EnsembleKind::Gaussian);
        const auto l = transform_m23(m, EnsembleKind::Laguerre);
        REQUIRE(g.size() == static_cast<std::size_t>(2 * m));
        for (std::size_t k = 0; k < g.size(); ++k) {
            CHECK(at_zero(l[k]) == g[k]);
            CHECK_FALSE(g[k].uses("tau"));
        }
    }
    // The delta_1 tau d/dtau d/dt p_{2,12} term carries a factor tau.
    const RatPoly p12 = expansion_term(2, 1, EnsembleKind::Laguerre).coeffs[1];
    const RatPoly term = *series_params(EnsembleKind::Laguerre).delta1 * tau * p12.derivative("t").derivative("tau");
    CHECK(at_zero(term).is_zero());
    CHECK_THROWS_AS(transform_m23(4, EnsembleKind::Gaussian), std::invalid_argument);
}

TEST_CASE("derived beta = 1, 4 terms equal the displayed ones") {
    for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Laguerre}) {
        for (int j = 1; j <= 3; ++j) {
            const ExpansionTerm d = derive_beta14(j, kind);
            for (int beta : {1, 4}) {
                const auto& h = expansion_term(beta, j, kind);
                REQUIRE(d.coeffs.size() == h.coeffs.size());
                for (std::size_t k = 0; k < d.coeffs.size(); ++k) CHECK(d.coeffs[k] == h.coeffs[k]);
            }
        }
    }
    const auto e1 = derive_beta14(1, EnsembleKind::Gaussian);
    CHECK(e1.coeffs[0] == Q(1, 5) * t * t);
    CHECK(e1.coeffs[1] == Q(-3, 5));
    CHECK_THROWS_AS(derive_beta14(4, EnsembleKind::Gaussian), std::invalid_argument);
}
