#include "softedge/special.hpp"

#include <cmath>
#include <numbers>

namespace softedge {

namespace {

using ld = long double;

constexpr ld kAi0 = 0.355028053887817239260063186004183176L;
constexpr ld kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr double kSeriesLeft = -8.0;
constexpr double kSeriesRight = 2.5;

AiryPair airy_series(double s) {
    const ld x = s;
    const ld x3 = x * x * x;
    ld f = 1, g = x, fp = 0, gp = 1;
    ld a = 1, b = x, d = x * x / 2, e = 1;
    fp = d;
    for (int k = 1; k < 200; ++k) {
        a *= x3 / ((3 * k - 1) * (3 * k));
        b *= x3 / ((3 * k) * (3 * k + 1));
        e *= x3 / ((3 * k - 2) * (3 * k));
        f += a;
        g += b;
        gp += e;
        if (k >= 2) {
            d *= x3 / ((3 * k - 3) * (3 * k - 1));
            fp += d;
        }
        ld scale = std::fabs(f) + std::fabs(g) + std::fabs(fp) + std::fabs(gp);
        if (std::fabs(a) + std::fabs(b) + std::fabs(d) + std::fabs(e) < 1e-22L * scale && k > 3)
            break;
    }
    return {static_cast<double>(kAi0 * f - kAip0 * g), static_cast<double>(kAi0 * fp - kAip0 * gp)};
}

// Modulus/phase asymptotics for s < -8 (DLMF 9.7.9-10).
AiryPair airy_oscillatory(double s) {
    const double x = -s;
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    double P = 0, Q = 0, R = 0, S = 0;
    double u = 1.0, zk = 1.0, last = INFINITY;
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            u *= (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
            zk /= zeta;
        }
        double v = k == 0 ? 1.0 : -(6.0 * k + 1) / (6.0 * k - 1) * u;
        double tu = u * zk, tv = v * zk;
        if (std::fabs(tu) > last) break;
        last = std::fabs(tu);
        double sign = ((k / 2) % 2) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            P += sign * tu;
            R += sign * tv;
        } else {
            Q += sign * tu;
            S += sign * tv;
        }
        if (std::fabs(tu) < 1e-18) break;
    }
    const double phase = zeta - std::numbers::pi / 4;
    const double c = std::cos(phase), sn = std::sin(phase);
    const double x14 = std::pow(x, 0.25);
    const double rpi = 1.0 / std::sqrt(std::numbers::pi);
    return {rpi / x14 * (c * P + sn * Q), rpi * x14 * (sn * R - c * S)};
}

// exp(z) K_mu(z), exp(z) K_{mu+1}(z) by Steed/Temme continued fraction, z >= 2.
std::pair<double, double> scaled_bessel_k(double mu, double z) {
    const double mu2 = mu * mu;
    double b = 2.0 * (1.0 + z);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double sum = 1.0 + q * delh;
    for (int i = 2; i <= 100000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        sum += dels;
        if (std::fabs(dels / sum) < 1e-17) break;
    }
    h = a1 * h;
    const double kmu = std::sqrt(std::numbers::pi / (2.0 * z)) / sum;
    const double k1 = kmu * (mu + z + 0.5 - h) / z;
    return {kmu, k1};
}

AiryPair airy_positive_scaled(double s) {
    const double zeta = 2.0 / 3.0 * s * std::sqrt(s);
    auto [k13, k23] = scaled_bessel_k(-1.0 / 3.0, zeta);
    const double pi = std::numbers::pi;
    return {std::sqrt(s / 3.0) * k13 / pi, -s / (pi * std::sqrt(3.0)) * k23};
}

void check_airy_arg(double s) {
    if (!std::isfinite(s) || std::fabs(s) > 200.0)
        throw std::domain_error("airy: argument outside [-200, 200]");
}

}  // namespace

AiryPair airy(double s) {
    check_airy_arg(s);
    if (s < kSeriesLeft) return airy_oscillatory(s);
    if (s <= kSeriesRight) return airy_series(s);
    AiryPair v = airy_positive_scaled(s);
    const double e = std::exp(-2.0 / 3.0 * s * std::sqrt(s));
    return {v.ai * e, v.aip * e};
}

AiryPair airy_scaled(double s) {
    check_airy_arg(s);
    if (s <= 0) return airy(s);
    if (s > kSeriesRight) return airy_positive_scaled(s);
    AiryPair v = airy_series(s);
    const double e = std::exp(2.0 / 3.0 * s * std::sqrt(s));
    return {v.ai * e, v.aip * e};
}

double airy_kernel(double x, double y, const AiryPair& ax, const AiryPair& ay) {
    if (x == y) return ax.aip * ax.aip - x * ax.ai * ax.ai;
    return (ax.ai * ay.aip - ax.aip * ay.ai) / (x - y);
}

// ---------------------------------------------------------------- wave functions

WaveFunctionSpec WaveFunctionSpec::hermite(int n) {
    return {Family::Hermite, n, 0.0};
}

WaveFunctionSpec WaveFunctionSpec::laguerre(int n, double alpha) {
    return {Family::Laguerre, n, alpha};
}

WaveFunctionSpec WaveFunctionSpec::laguerre_np(int n, int p) {
    if (n < 0 || p < 0) throw std::invalid_argument("laguerre_np: negative order");
    if (p < n) return laguerre(p, n - p);
    return laguerre(n, p - n);
}

namespace {

void check_spec(const WaveFunctionSpec& spec) {
    if (spec.n < 0 || spec.n > kMaxWaveOrder)
        throw std::out_of_range("wave function order outside supported range");
    if (spec.family == WaveFunctionSpec::Family::Laguerre && !(spec.alpha > -1.0))
        throw std::domain_error("Laguerre parameter must exceed -1");
}

// Mantissa pair with a shared natural-log exponent.
struct Scaled {
    double prev;
    double cur;
    double log_scale;
    void renormalize() {
        double m = std::max(std::fabs(prev), std::fabs(cur));
        if (m > 1e200 || (m > 0 && m < 1e-200)) {
            int e;
            std::frexp(m, &e);
            prev = std::ldexp(prev, -e);
            cur = std::ldexp(cur, -e);
            log_scale += e * std::numbers::ln2;
        }
    }
    double value(double mantissa) const {
        if (mantissa == 0.0) return 0.0;
        double lg = std::log(std::fabs(mantissa)) + log_scale;
        return std::copysign(std::exp(lg), mantissa);
    }
};

}  // namespace

WaveTriple wave_triple(const WaveFunctionSpec& spec, double x) {
    check_spec(spec);
    const int n = spec.n;
    if (spec.family == WaveFunctionSpec::Family::Hermite) {
        Scaled r{0.0, 1.0, -0.5 * x * x - 0.25 * std::log(std::numbers::pi)};
        for (int k = 0; k < n; ++k) {
            double next = std::sqrt(2.0 / (k + 1)) * x * r.cur - std::sqrt(double(k) / (k + 1)) * r.prev;
            r.prev = r.cur;
            r.cur = next;
            r.renormalize();
        }
        double phi = r.value(r.cur), prev = r.value(r.prev);
        return {phi, prev, -x * phi + std::sqrt(2.0 * n) * prev, x * prev - std::sqrt(2.0 * n) * phi};
    }
    if (!(x > 0)) throw std::domain_error("Laguerre wave function needs x > 0");
    const double a = spec.alpha;
    Scaled r{0.0, 1.0, 0.5 * a * std::log(x) - 0.5 * x - 0.5 * std::lgamma(a + 1.0)};
    for (int k = 0; k < n; ++k) {
        double next = ((x - 2.0 * k - a - 1.0) * r.cur - std::sqrt(k * (k + a)) * r.prev) /
                      std::sqrt((k + 1.0) * (k + a + 1.0));
        r.prev = r.cur;
        r.cur = next;
        r.renormalize();
    }
    double phi = r.value(r.cur), prev = r.value(r.prev);
    double dphi = ((n + 0.5 * a - 0.5 * x) * phi + std::sqrt(n * (n + a)) * prev) / x;
    double dprev = ((0.5 * x - n - 0.5 * a) * prev - std::sqrt(n * (n + a)) * phi) / x;
    return {phi, prev, dphi, dprev};
}

double wave_eval(const WaveFunctionSpec& spec, double x) { return wave_triple(spec, x).phi; }

// ---------------------------------------------------------------- Bernoulli

BigRational bernoulli(int n) {
    if (n < 0) throw std::domain_error("bernoulli: negative index");
    std::vector<BigRational> B(static_cast<std::size_t>(n + 1));
    B[0] = 1;
    for (int m = 1; m <= n; ++m) {
        BigRational acc = 0;
        mpz_class binom = 1;  // C(m+1, k)
        for (int k = 0; k < m; ++k) {
            acc += binom * B[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        B[m] = -acc / (m + 1);
        B[m].canonicalize();
    }
    return B[n];
}

BigRational bernoulli_half(int two_k) {
    if (two_k < 2 || two_k > 40 || two_k % 2)
        throw std::domain_error("bernoulli_half: index must be even in [2, 40]");
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(two_k - 1));
    BigRational factor = BigRational(1, 1) / BigRational(p2) - 1;
    BigRational r = factor * bernoulli(two_k);
    r.canonicalize();
    return r;
}

// ---------------------------------------------------------------- quadrature

QuadRule gauss_legendre(int m, double a, double b) {
    if (m < 1) throw std::invalid_argument("gauss_legendre: m < 1");
    QuadRule rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            dp = m * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = mid - half * z;
        rule.nodes[m - 1 - i] = mid + half * z;
        rule.weights[i] = rule.weights[m - 1 - i] = half * w;
    }
    return rule;
}

}  // namespace softedge
