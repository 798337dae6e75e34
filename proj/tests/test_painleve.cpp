#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softedge/painleve.hpp"
#include "softedge/special.hpp"

#include <cmath>

using namespace softedge;

namespace {

const RatPoly t = RatPoly::variable("t");
const RatPoly q = RatPoly::variable("q");
const RatPoly qp = RatPoly::variable("qp");
const RatPoly half(BigRational(1, 2));

constexpr TWLabel kAll[] = {TWLabel::Two, TWLabel::Plus, TWLabel::Minus, TWLabel::One, TWLabel::Four};

}  // namespace

TEST_CASE("Hastings-McLeod table") {
    const HMTable& hm = default_hm();
    CHECK(hm.t_min() == -12.0);
    CHECK(hm.t_max() == 10.0);
    CHECK(std::fabs(hm.q(8.0) - airy(8.0).ai) < 1e-10);
    CHECK(std::fabs(hm.q(-8.0) / 2.0 - 1) < 0.02);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) worst = std::max(worst, hm.residual(-12.0 + 22.0 * k / 999));
    CHECK(worst <= 1e-8);
    CHECK(hm.accuracy() <= 1e-8);
    double prev = hm.q(-12.0);
    for (int k = 1; k <= 2200; ++k) {
        double v = hm.q(-12.0 + k * 0.01);
        CHECK(v > 0);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("q' interpolant is the derivative of q") {
    const HMTable& hm = default_hm();
    const double d = 1e-4;
    for (double x : {-11.3, -5.0, -0.7, 3.2, 9.1})
        CHECK(std::fabs((hm.q(x + d) - hm.q(x - d)) / (2 * d) - hm.qp(x)) < 1e-8);
}

TEST_CASE("the first integral holds along the table") {
    const HMTable& hm = default_hm();
    const double d = 1e-4;
    for (double x : {-9.0, -3.0, 0.0, 4.0}) {
        double v = hm.q(x), w = hm.qp(x);
        double u = w * w - x * v * v - v * v * v * v;
        // d/dt int_t^inf (s-t) q^2 ds = -int_t^inf q^2
        double fd = (hm.int_shifted_q2(x + d) - hm.int_shifted_q2(x - d)) / (2 * d);
        CHECK(std::fabs(fd + u) < 1e-8);
        double fq = (hm.int_q(x + d) - hm.int_q(x - d)) / (2 * d);
        CHECK(std::fabs(fq + v) < 1e-8);
    }
}

TEST_CASE("build_hm rejects short domains") {
    CHECK_THROWS_AS(build_hm(-8.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(build_hm(-12.0, 6.0), std::invalid_argument);
    HMTable wide = build_hm(-14.0, 12.0);
    CHECK(std::fabs(wide.q(-3.0) - default_hm().q(-3.0)) < 1e-10);
}

TEST_CASE("log-derivative table") {
    CHECK(tw_logderiv(TWLabel::Two, 0) == RatPoly(1L));
    CHECK(tw_logderiv(TWLabel::Two, 1) == pow(qp, 2) - t * pow(q, 2) - pow(q, 4));
    CHECK(tw_logderiv(TWLabel::Plus, 1) == half * pow(qp, 2) - half * pow(q, 4) - half * t * pow(q, 2) + half * q);
    CHECK(tw_logderiv(TWLabel::One, 3) == tw_logderiv(TWLabel::Plus, 3));
    CHECK_THROWS_AS(tw_logderiv(TWLabel::Four, 1), std::invalid_argument);
    CHECK_THROWS_AS(tw_logderiv(TWLabel::Two, kMaxLogDerivOrder + 1), std::out_of_range);
    for (TWLabel b : {TWLabel::Two, TWLabel::Plus, TWLabel::Minus}) {
        RatPoly l1 = tw_logderiv(b, 1);
        for (int k = 0; k < kMaxLogDerivOrder; ++k)
            CHECK(tw_logderiv(b, k + 1) == painleve_diff(tw_logderiv(b, k)) + l1 * tw_logderiv(b, k));
    }
}

TEST_CASE("product identity for F_+ and F_-") {
    // F_+ F_-'' - 2 F_+' F_-' + F_+'' F_- = F_+ F_- (L_2^- - 2 L_1^+ L_1^- + L_2^+)
    RatPoly bracket = tw_logderiv(TWLabel::Minus, 2) - 2 * tw_logderiv(TWLabel::Plus, 1) * tw_logderiv(TWLabel::Minus, 1) +
                      tw_logderiv(TWLabel::Plus, 2);
    CHECK(bracket.is_zero());
}

TEST_CASE("Tracy-Widom values") {
    // F_2(-2) from an independent high-precision Fredholm evaluation
    CHECK(std::fabs(F_eval(TWLabel::Two, 0, -2.0) - 0.413224142505122) < 1e-12);
    for (int k = 0; k <= 100; ++k) {
        double x = -8.0 + 0.1 * k;
        CHECK(std::fabs(F_eval(TWLabel::Two, 0, x) - F_eval(TWLabel::Plus, 0, x) * F_eval(TWLabel::Minus, 0, x)) <
              1e-8);
        CHECK(F_eval(TWLabel::Four, 0, x) ==
              doctest::Approx(0.5 * (F_eval(TWLabel::Plus, 0, x) + F_eval(TWLabel::Minus, 0, x))).epsilon(1e-15));
        CHECK(F_eval(TWLabel::One, 0, x) == F_eval(TWLabel::Plus, 0, x));
    }
    for (TWLabel b : kAll) CHECK(F_eval(b, 0, 10.0) >= 1 - 1e-6);
    CHECK_THROWS_AS(F_eval(TWLabel::Two, 0, 10.5), std::out_of_range);
    CHECK_THROWS_AS(F_eval(TWLabel::Two, 0, -12.5), std::out_of_range);
}

TEST_CASE("monotone distributions") {
    // F_- alone is not a distribution function and exceeds 1 near the origin
    for (TWLabel b : {TWLabel::Two, TWLabel::One, TWLabel::Four}) {
        double prev = 0;
        for (int k = 0; k <= 220; ++k) {
            double x = -12.0 + 0.1 * k;
            auto d = F_derivs(b, 1, x);
            CHECK(d[0] >= prev - 1e-12);
            CHECK(d[1] >= -1e-9);
            prev = d[0];
        }
    }
}

TEST_CASE("derivatives against finite differences") {
    const double d = 1e-3;
    for (TWLabel b : kAll) {
        for (double x : {-3.5, -1.0, 0.5}) {
            auto lo = F_derivs(b, 7, x - d), mid = F_derivs(b, 8, x), hi = F_derivs(b, 7, x + d);
            for (int k = 0; k < 8; ++k) {
                double fd = (hi[k] - lo[k]) / (2 * d);
                CHECK(std::fabs(fd - mid[k + 1]) < 1e-5 * (1 + std::fabs(mid[k + 1])));
            }
        }
    }
}
