#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softedge/special.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace softedge;

TEST_CASE("airy at the origin") {
    AiryPair a = airy(0.0);
    CHECK(std::fabs(a.ai - 0.3550280538878172) < 1e-15);
    CHECK(std::fabs(a.aip + 0.2588194037928068) < 1e-15);
    CHECK(std::fabs(airy(10.0).ai) < 1e-9);
    CHECK_THROWS_AS(airy(201.0), std::domain_error);
    CHECK_THROWS_AS(airy(NAN), std::domain_error);
}

TEST_CASE("airy agrees with an independent implementation") {
    double worst_abs = 0, worst_rel = 0;
    for (double s = -20.0; s <= 30.0; s += 0.0137) {
        AiryPair a = airy(s);
        worst_abs = std::max(worst_abs, std::fabs(a.ai - boost::math::airy_ai(s)));
        worst_abs = std::max(worst_abs, std::fabs(a.aip - boost::math::airy_ai_prime(s)));
    }
    CHECK(worst_abs < 1e-12);
    for (double s = 6.0; s <= 100.0; s += 0.173) {
        AiryPair a = airy(s);
        double ai = boost::math::airy_ai(s), aip = boost::math::airy_ai_prime(s);
        worst_rel = std::max(worst_rel, std::fabs(a.ai / ai - 1));
        worst_rel = std::max(worst_rel, std::fabs(a.aip / aip - 1));
    }
    CHECK(worst_rel < 1e-10);
}

TEST_CASE("airy_scaled is consistent across the branch switch") {
    for (double s : {0.5, 2.0, 2.5, 2.6, 5.0, 20.0}) {
        AiryPair a = airy(s), b = airy_scaled(s);
        double e = std::exp(-2.0 / 3.0 * s * std::sqrt(s));
        CHECK(std::fabs(b.ai * e / a.ai - 1) < 1e-13);
        CHECK(std::fabs(b.aip * e / a.aip - 1) < 1e-13);
    }
    // leading asymptotic e^{-zeta} / (2 sqrt(pi) s^{1/4})
    double s = 190.0;
    double lead = 1.0 / (2.0 * std::sqrt(std::numbers::pi) * std::pow(s, 0.25));
    double zeta = 2.0 / 3.0 * s * std::sqrt(s);
    CHECK(std::fabs(airy_scaled(s).ai / lead - (1 - 5.0 / (72 * zeta))) < 1e-6);
}

TEST_CASE("airy ODE residual") {
    // step balances O(d^4) truncation against rounding amplified by 1/d^2
    const double d = 2.5e-3;
    double worst = 0;
    for (double s = -15.0; s <= 10.0; s += 0.05) {
        double f2 = airy(s - 2 * d).ai, f1 = airy(s - d).ai, f0 = airy(s).ai;
        double g1 = airy(s + d).ai, g2 = airy(s + 2 * d).ai;
        double second = (-f2 + 16 * f1 - 30 * f0 + 16 * g1 - g2) / (12 * d * d);
        worst = std::max(worst, std::fabs(second - s * f0));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("airy kernel diagonal is the limit of the off-diagonal form") {
    double x = -1.3;
    AiryPair ax = airy(x);
    double y = x + 1e-6;
    AiryPair ay = airy(y);
    CHECK(std::fabs(airy_kernel(x, y, ax, ay) - airy_kernel(x, x, ax, ax)) < 1e-6);
    CHECK(airy_kernel(0.3, -0.8, airy(0.3), airy(-0.8)) ==
          doctest::Approx(airy_kernel(-0.8, 0.3, airy(-0.8), airy(0.3))).epsilon(1e-14));
}

TEST_CASE("wave function base cases") {
    CHECK(wave_eval(WaveFunctionSpec::hermite(0), 0.0) == doctest::Approx(0.7511255444649425).epsilon(1e-15));
    CHECK(wave_eval(WaveFunctionSpec::laguerre(0, 0.0), 2.0) ==
          doctest::Approx(0.3678794411714423).epsilon(1e-15));
    CHECK_THROWS_AS(wave_eval(WaveFunctionSpec::laguerre(3, 1.0), 0.0), std::domain_error);
    CHECK_THROWS_AS(wave_eval(WaveFunctionSpec::laguerre(3, -1.0), 1.0), std::domain_error);
    CHECK_THROWS_AS(wave_eval(WaveFunctionSpec::hermite(kMaxWaveOrder + 1), 1.0), std::out_of_range);
}

TEST_CASE("Kummer symmetry of the Laguerre wave functions") {
    // phi_n^{(a)}(x) = sqrt(n!/Gamma(n+a+1)) x^{a/2} e^{-x/2} L_n^{(a)}(x), with an
    // explicit sum for L_n^{(a)} as the oracle.
    auto oracle = [](int n, int p, double x) {
        double a = p - n;
        double sum = 0;
        for (int k = 0; k <= n; ++k) {
            // binom(n+a, n-k) (-x)^k / k!
            double lb = std::lgamma(n + a + 1) - std::lgamma(n - k + 1) - std::lgamma(a + k + 1);
            sum += std::exp(lb) * std::pow(-x, k) / std::tgamma(k + 1);
        }
        double norm = std::exp(0.5 * (std::lgamma(n + 1) - std::lgamma(n + a + 1)));
        return norm * std::pow(x, a / 2) * std::exp(-x / 2) * sum;
    };
    double v25 = wave_eval(WaveFunctionSpec::laguerre_np(2, 5), 3.0);
    double v52 = wave_eval(WaveFunctionSpec::laguerre_np(5, 2), 3.0);
    CHECK(v25 == doctest::Approx(oracle(2, 5, 3.0)).epsilon(1e-13));
    CHECK(v52 == doctest::Approx(v25).epsilon(1e-13));
    // phi_{5,2} is the same function as phi_5^{(-3)} under the polynomial identity
    // L_5^{(-3)}(x) = -x^3/60 L_2^{(3)}(x); check the sum oracle with negative alpha
    double lhs = 0;
    for (int k = 3; k <= 5; ++k)
        lhs += std::tgamma(5 - 3 + 1) / (std::tgamma(5 - k + 1) * std::tgamma(k - 3 + 1)) * std::pow(-3.0, k) /
               std::tgamma(k + 1);
    double rhs = 0;
    for (int k = 0; k <= 2; ++k)
        rhs += std::tgamma(2 + 3 + 1) / (std::tgamma(2 - k + 1) * std::tgamma(3 + k + 1)) * std::pow(-3.0, k) /
               std::tgamma(k + 1);
    CHECK(lhs == doctest::Approx(-std::pow(3.0, 3) / 60.0 * rhs));
}

TEST_CASE("orthonormality") {
    for (int n : {0, 1, 5, 20}) {
        QuadRule r = gauss_legendre(400, -14.0, 14.0);
        double acc = 0, cross = 0;
        auto spec = WaveFunctionSpec::hermite(n);
        auto other = WaveFunctionSpec::hermite(n + 1);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            double v = wave_eval(spec, r.nodes[i]);
            acc += r.weights[i] * v * v;
            cross += r.weights[i] * v * wave_eval(other, r.nodes[i]);
        }
        CHECK(std::fabs(acc - 1) < 1e-8);
        CHECK(std::fabs(cross) < 1e-8);
    }
    for (int n : {0, 1, 5, 20}) {
        for (double alpha : {0.0, 2.5, 30.0}) {
            // x = e^u removes the x^{alpha/2} endpoint behaviour
            QuadRule r = gauss_legendre(800, -40.0, std::log(250.0));
            double acc = 0;
            auto spec = WaveFunctionSpec::laguerre(n, alpha);
            for (std::size_t i = 0; i < r.nodes.size(); ++i) {
                double x = std::exp(r.nodes[i]);
                double v = wave_eval(spec, x);
                acc += r.weights[i] * x * v * v;
            }
            CHECK(std::fabs(acc - 1) < 1e-8);
        }
    }
}

TEST_CASE("Hermite recurrence consistency") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> order(1, 3000);
    for (int trial = 0; trial < 200; ++trial) {
        int n = order(rng);
        double edge = std::sqrt(2.0 * n);
        std::uniform_real_distribution<double> xs(-edge - 3, edge + 3);
        double x = xs(rng);
        double up = wave_eval(WaveFunctionSpec::hermite(n + 1), x);
        WaveTriple w = wave_triple(WaveFunctionSpec::hermite(n), x);
        double lhs = up * std::sqrt((n + 1) / 2.0) + w.phi_prev * std::sqrt(n / 2.0);
        double scale = std::fabs(up * std::sqrt((n + 1) / 2.0)) + std::fabs(w.phi_prev * std::sqrt(n / 2.0));
        CHECK(std::fabs(lhs - x * w.phi) <= 1e-10 * scale + 1e-300);
    }
}

TEST_CASE("large order stays finite in the transition region") {
    for (int n : {1000, 10000}) {
        double np = n + 0.5;
        double mu = std::sqrt(2.0 * np);
        double sigma = std::pow(2.0, -0.5) * std::pow(np, -1.0 / 6.0);
        for (double s : {-10.0, 0.0, 10.0}) {
            double v = wave_eval(WaveFunctionSpec::hermite(n), mu + sigma * s);
            CHECK(std::isfinite(v));
            CHECK(v != 0.0);
        }
        // edge limit with n+1/2 centring: phi_n(mu) = 2^{1/4} n'^{-1/12} Ai(0) (1 + O(h^2))
        double v0 = wave_eval(WaveFunctionSpec::hermite(n), mu);
        CHECK(v0 / (std::pow(2.0, 0.25) * std::pow(np, -1.0 / 12) * airy(0.0).ai) == doctest::Approx(1.0).epsilon(1e-4));
    }
    auto spec = WaveFunctionSpec::laguerre_np(10000, 40000);
    double mu = std::pow(100.0 + 200.0, 2);
    double v = wave_eval(spec, mu);
    CHECK(std::isfinite(v));
    CHECK(v != 0.0);
}

TEST_CASE("derivatives against finite differences") {
    const double d = 1e-5;
    for (auto spec : {WaveFunctionSpec::hermite(7), WaveFunctionSpec::hermite(60), WaveFunctionSpec::laguerre(6, 1.5),
                      WaveFunctionSpec::laguerre_np(9, 4)}) {
        for (double x : {0.7, 2.3, 5.1, 11.0}) {
            double fd = (wave_eval(spec, x + d) - wave_eval(spec, x - d)) / (2 * d);
            double an = wave_triple(spec, x).dphi;
            CHECK(std::fabs(fd - an) < 1e-7);
            double fdp = (wave_triple(spec, x + d).phi_prev - wave_triple(spec, x - d).phi_prev) / (2 * d);
            CHECK(std::fabs(fdp - wave_triple(spec, x).dphi_prev) < 1e-7);
        }
    }
}

TEST_CASE("Bernoulli values") {
    CHECK(bernoulli(1) == BigRational(-1, 2));
    CHECK(bernoulli(12) == BigRational(-691, 2730));
    CHECK(bernoulli(13) == 0);
    CHECK(bernoulli_half(2) == BigRational(-1, 12));
    CHECK(bernoulli_half(4) == BigRational(7, 240));
    CHECK(bernoulli_half(6) == BigRational(-31, 1344));
    CHECK_THROWS_AS(bernoulli_half(0), std::domain_error);
    CHECK_THROWS_AS(bernoulli_half(3), std::domain_error);
    CHECK_THROWS_AS(bernoulli_half(42), std::domain_error);
    CHECK_NOTHROW(bernoulli_half(40));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    QuadRule r = gauss_legendre(12, -1.0, 2.0);
    double acc = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], 22);
    CHECK(acc == doctest::Approx((std::pow(2.0, 23) + 1) / 23).epsilon(1e-14));
    for (std::size_t i = 1; i < r.nodes.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
    QuadRule big = gauss_legendre(256, 0.0, 1.0);
    double sum = 0;
    for (double w : big.weights) sum += w;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
}
