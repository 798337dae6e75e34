#include "softedge/expansion.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <stdexcept>
#include <string>

namespace softedge {
namespace {

RatPoly r(long a, long b = 1) {
    BigRational q(a, b);
    q.canonicalize();
    return RatPoly(q);
}

const RatPoly& T() {
    static const RatPoly v = RatPoly::variable("t");
    return v;
}
const RatPoly& U() {
    static const RatPoly v = RatPoly::variable("tau");
    return v;
}
const RatPoly& S() {
    static const RatPoly v = RatPoly::variable("s");
    return v;
}
RatPoly tp(unsigned e) { return pow(T(), e); }
RatPoly up(unsigned e) { return pow(U(), e); }
RatPoly sp(unsigned e) { return pow(S(), e); }

const std::vector<std::string> kTTau{"t", "tau"};

double n_modified(int beta, double n) {
    switch (beta) {
        case 1: return n - 0.5;
        case 2: return n;
        case 4: return 2 * n + 0.5;
        default: throw std::invalid_argument("make_scaling: beta must be 1, 2 or 4");
    }
}

ScalingParams scaling_from(EnsembleKind kind, int beta, double n1, std::optional<double> p1) {
    ScalingParams sp;
    sp.kind = kind;
    sp.beta = beta;
    sp.gamma = beta == 1 ? BigRational(1, 2) : BigRational(1);
    sp.n_prime = n1;
    if (kind == EnsembleKind::Gaussian) {
        sp.mu = std::sqrt(2 * n1);
        sp.sigma = std::pow(n1, -1.0 / 6) / std::sqrt(2.0);
        sp.h = std::pow(n1, -2.0 / 3) / 4;
        sp.tau = 0.0;
        return sp;
    }
    const double rn = std::sqrt(n1), rp = std::sqrt(*p1);
    const double a = rn + rp, b = 1 / rn + 1 / rp;
    sp.p_prime = p1;
    sp.mu = a * a;
    sp.sigma = a * std::cbrt(b);
    sp.h = std::pow(b, 4.0 / 3) / 4;
    sp.tau = 4 / (a * b);
    return sp;
}

// ---- displayed correction terms ------------------------------------------------

std::vector<RatPoly> gaussian_two(int j) {
    const RatPoly& t = T();
    switch (j) {
        case 1: return {r(1, 5) * tp(2), r(-3, 10)};
        case 2:
            return {-(r(141, 350) + r(8, 175) * tp(3)), r(39, 175) * t + r(1, 50) * tp(4), r(-3, 50) * tp(2),
                    r(9, 200)};
        default:
            return {r(2216, 7875) * t + r(148, 7875) * tp(4), -(r(53, 210) * tp(2) + r(8, 875) * tp(5)),
                    r(10403, 31500) + r(51, 875) * tp(3) + r(1, 750) * tp(6),
                    -(r(117, 1750) * t + r(3, 500) * tp(4)), r(9, 1000) * tp(2), r(-9, 2000)};
    }
}

std::vector<RatPoly> gaussian_beta(int j) {
    const RatPoly& t = T();
    switch (j) {
        case 1: return {r(1, 5) * tp(2), r(-3, 5)};
        case 2:
            return {-(r(186, 175) + r(8, 175) * tp(3)), r(78, 175) * t + r(1, 50) * tp(4), r(-3, 25) * tp(2),
                    r(9, 50)};
        default:
            return {r(6392, 7875) * t + r(148, 7875) * tp(4), -(r(292, 525) * tp(2) + r(8, 875) * tp(5)),
                    r(11618, 7875) + r(102, 875) * tp(3) + r(1, 750) * tp(6),
                    -(r(234, 875) * t + r(3, 250) * tp(4)), r(9, 250) * tp(2), r(-9, 250)};
    }
}

// Recurring tau factors.
struct TauFactors {
    RatPoly a = 2 * U() - 1;                           // 2 tau - 1
    RatPoly b = U() - 3;                               // tau - 3
    RatPoly c = 43 * up(2) - 18 * U() - 8;             // 43 tau^2 - 18 tau - 8
    RatPoly d = 4 * up(2) + 26 * U() - 39;             // 4 tau^2 + 26 tau - 39
    RatPoly e = 1384 * up(3) - 551 * up(2) - 212 * U() - 148;
    RatPoly g = 59 * up(3) - 51 * up(2) - 162 * U() + 102;
};

std::vector<RatPoly> laguerre_two(int j) {
    const RatPoly& t = T();
    const RatPoly& u = U();
    const TauFactors f;
    switch (j) {
        case 1: return {-(r(1, 5) * f.a) * tp(2), r(1, 10) * f.b};
        case 2:
            return {r(1, 350) * (up(2) + 94 * u - 141) + r(1, 175) * f.c * tp(3),
                    -(r(1, 175) * f.d * t - r(1, 50) * pow(f.a, 2) * tp(4)),
                    -(r(1, 50) * f.b * f.a) * tp(2), r(1, 200) * pow(f.b, 2)};
        default:
            return {-(r(2, 7875) * (4 * up(3) - 161 * up(2) + 1108 * u - 1108) * t + r(1, 7875) * f.e * tp(4)),
                    r(1, 1050) * (12 * up(3) - 77 * up(2) + 328 * u - 265) * tp(2) - r(1, 875) * f.a * f.c * tp(5),
                    r(1, 31500) * (61 * up(3) + 1351 * up(2) - 10403 * u + 10403) + r(1, 1750) * f.g * tp(3) -
                        r(1, 750) * pow(f.a, 3) * tp(6),
                    -(r(1, 1750) * f.b * f.d * t - r(1, 500) * f.b * pow(f.a, 2) * tp(4)),
                    -(r(1, 1000) * pow(f.b, 2) * f.a) * tp(2), r(1, 6000) * pow(f.b, 3)};
    }
}

std::vector<RatPoly> laguerre_beta(int j) {
    const RatPoly& t = T();
    const RatPoly& u = U();
    const TauFactors f;
    switch (j) {
        case 1: return {-(r(1, 5) * f.a) * tp(2), r(1, 5) * f.b};
        case 2:
            return {r(1, 700) * (9 * up(2) + 496 * u - 744) + r(1, 175) * f.c * tp(3),
                    -(r(2, 175) * f.d * t - r(1, 50) * pow(f.a, 2) * tp(4)),
                    -(r(1, 25) * f.b * f.a) * tp(2), r(1, 50) * pow(f.b, 2)};
        default:
            return {-(r(1, 15750) * (67 * up(3) - 1778 * up(2) + 12784 * u - 12784) * t + r(1, 7875) * f.e * tp(4)),
                    r(1, 2100) * (42 * up(3) - 449 * up(2) + 1600 * u - 1168) * tp(2) - r(1, 875) * f.a * f.c * tp(5),
                    r(1, 31500) * (289 * up(3) + 6349 * up(2) - 46472 * u + 46472) + r(1, 875) * f.g * tp(3) -
                        r(1, 750) * pow(f.a, 3) * tp(6),
                    -(r(2, 875) * f.b * f.d * t - r(1, 250) * f.b * pow(f.a, 2) * tp(4)),
                    -(r(1, 250) * pow(f.b, 2) * f.a) * tp(2), r(1, 750) * pow(f.b, 3)};
    }
}

ExpansionTerm make_term(int beta, int j, EnsembleKind kind, std::vector<RatPoly> c) {
    ExpansionTerm e;
    e.beta = beta;
    e.j = j;
    e.kind = kind;
    e.coeffs = std::move(c);
    return e;
}

// ---- turning-point recursions --------------------------------------------------

struct Ring {
    RatPoly a2;  // variable a2 or the constant
    RatPoly b, c0;
    RatPoly S2() const { return tp(2) + b * T() + c0; }
    RatPoly SSp() const { return T() + r(1, 2) * b; }
};

Ring ring_of(const PQCase& c) {
    Ring g;
    if (c.kind == PQCase::Kind::Hermite) {
        g.b = 0;
        g.c0 = -1;
        return g;
    }
    g.a2 = c.a2 ? RatPoly(*c.a2) : RatPoly::variable("a2");
    g.b = -2 * (g.a2 + 1);
    g.c0 = pow(g.a2 - 1, 2);
    return g;
}

RatPoly laguerre_Q1(const RatPoly& a2) {
    return r(-1, 4) * (tp(3) - (3 * a2 - 1) * (a2 - 3) * T() + 2 * (a2 + 1) * pow(a2 - 1, 2));
}

RatPoly coeff_at(const std::vector<RatPoly>& c, int i) {
    return i >= 0 && i < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(i)] : RatPoly();
}

}  // namespace

TWLabel tw_label(int beta) {
    switch (beta) {
        case 1: return TWLabel::One;
        case 2: return TWLabel::Two;
        case 4: return TWLabel::Four;
        default: throw std::invalid_argument("beta must be 1, 2 or 4");
    }
}

ScalingParams make_scaling(EnsembleKind kind, int beta, double n, std::optional<double> p) {
    if (!(n > 0)) throw std::invalid_argument("make_scaling: n must be positive");
    const double n1 = n_modified(beta, n);
    if (kind == EnsembleKind::Gaussian) return scaling_from(kind, beta, n1, std::nullopt);
    if (!p || !(*p > 0)) throw std::invalid_argument("make_scaling: Laguerre needs p > 0");
    return scaling_from(kind, beta, n1, n_modified(beta, *p));
}

ScalingParams wave_scaling(EnsembleKind kind, double n, std::optional<double> p) {
    if (!(n + 0.5 > 0)) throw std::invalid_argument("wave_scaling: n + 1/2 must be positive");
    if (kind == EnsembleKind::Gaussian) return scaling_from(kind, 2, n + 0.5, std::nullopt);
    if (!p || !(*p + 0.5 > 0)) throw std::invalid_argument("wave_scaling: Laguerre needs p + 1/2 > 0");
    return scaling_from(kind, 2, n + 0.5, *p + 0.5);
}

double ExpansionTerm::eval(std::span<const double> F, double t, double tau, int deriv) const {
    const double x[2] = {t, tau};
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        const CompiledPoly c(coeffs[k], kTTau);
        if (deriv == 0) {
            sum += c(x) * F[k + 1];
        } else {
            const CompiledPoly dc(coeffs[k].derivative("t"), kTTau);
            sum += dc(x) * F[k + 1] + c(x) * F[k + 2];
        }
    }
    return sum;
}

ExpansionTerm ExpansionTerm::derivative() const {
    ExpansionTerm d = *this;
    d.coeffs.assign(coeffs.size() + 1, RatPoly());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        d.coeffs[k] += coeffs[k].derivative("t");
        d.coeffs[k + 1] += coeffs[k];
    }
    return d;
}

const ExpansionTerm& expansion_term(int beta, int j, EnsembleKind kind) {
    if (j < 1 || j > 3) throw std::invalid_argument("expansion_term: j must be 1..3");
    tw_label(beta);
    static std::mutex mu;
    static std::map<std::tuple<int, int, int>, ExpansionTerm> cache;
    std::lock_guard lock(mu);
    const auto key = std::make_tuple(beta, j, static_cast<int>(kind));
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<RatPoly> c;
    if (kind == EnsembleKind::Gaussian)
        c = beta == 2 ? gaussian_two(j) : gaussian_beta(j);
    else
        c = beta == 2 ? laguerre_two(j) : laguerre_beta(j);
    return cache.emplace(key, make_term(beta, j, kind, std::move(c))).first->second;
}

std::array<ExpansionTerm, 3> expansion_terms(int beta, EnsembleKind kind) {
    return {expansion_term(beta, 1, kind), expansion_term(beta, 2, kind), expansion_term(beta, 3, kind)};
}

double eval_terms(const ScalingParams& sp, std::span<const ExpansionTerm> terms, int m, double t, int deriv,
                  const HMTable& hm) {
    if (m < 0 || m > static_cast<int>(terms.size())) throw std::invalid_argument("eval_terms: bad order m");
    if (deriv != 0 && deriv != 1) throw std::invalid_argument("eval_terms: deriv must be 0 or 1");
    int kmax = deriv;
    for (int j = 0; j < m; ++j)
        kmax = std::max(kmax, static_cast<int>(terms[static_cast<std::size_t>(j)].coeffs.size()) + deriv);
    const std::vector<double> F = F_derivs(tw_label(sp.beta), kmax, t, hm);
    double value = F[static_cast<std::size_t>(deriv)];
    double hj = 1.0;
    for (int j = 0; j < m; ++j) {
        hj *= sp.h;
        value += hj * terms[static_cast<std::size_t>(j)].eval(F, t, sp.tau, deriv);
    }
    return value;
}

double eval_expansion(const ScalingParams& sp, int m, double t, int deriv, const HMTable& hm) {
    if (m < 0 || m > 3) throw std::invalid_argument("eval_expansion: m must be 0..3");
    const auto terms = expansion_terms(sp.beta, sp.kind);
    return eval_terms(sp, terms, m, t, deriv, hm);
}

double eval_expansion(EnsembleKind kind, int beta, double n, std::optional<double> p, int m, double t, int deriv,
                      const HMTable& hm) {
    return eval_expansion(make_scaling(kind, beta, n, p), m, t, deriv, hm);
}

std::array<ExpansionTerm, 3> histogram_adjust(const std::array<ExpansionTerm, 3>& terms, const BigRational& eta) {
    if (sgn(eta) <= 0) throw std::invalid_argument("histogram_adjust: eta must be positive");
    const RatPoly w(BigRational(eta * eta / 24));
    std::array<ExpansionTerm, 3> out = terms;
    out[1].coeffs.at(1) += w;
    const ExpansionTerm e1pp = terms[0].derivative().derivative();
    for (std::size_t k = 0; k < e1pp.coeffs.size(); ++k) out[2].coeffs.at(k) += w * e1pp.coeffs[k];
    return out;
}

// ---- P_k, Q_k ------------------------------------------------------------------

RatPoly laurent_normalize(const RatPoly& p) {
    const auto& vars = p.vars();
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == "a2") ia = static_cast<int>(i);
        if (vars[i] == "ia2") ib = static_cast<int>(i);
    }
    if (ia < 0 || ib < 0) return p;
    RatPoly::TermMap terms;
    for (const auto& [e, c] : p.terms()) {
        auto f = e;
        const auto m = std::min(f[static_cast<std::size_t>(ia)], f[static_cast<std::size_t>(ib)]);
        f[static_cast<std::size_t>(ia)] -= m;
        f[static_cast<std::size_t>(ib)] -= m;
        terms[f] += c;
    }
    return poly_from_terms(vars, std::move(terms));
}

unsigned pq_degree_bound(const PQCase& c, int k) {
    if (k % 2) return static_cast<unsigned>(3 * k);
    return static_cast<unsigned>(c.kind == PQCase::Kind::Hermite ? k : 2 * k);
}

RatPoly pq_residual(const PQCase& c, int k, const PQEntry& e) {
    const Ring g = ring_of(c);
    return laurent_normalize(g.S2() * e.P.derivative("t") - 3 * k * g.SSp() * e.P - e.Q);
}

PQTable pq_recursion(const PQCase& c, int K) {
    if (K < 1 || K > 6) throw std::invalid_argument("pq_recursion: K must be 1..6");
    if (c.a2 && sgn(*c.a2) <= 0) throw std::invalid_argument("pq_recursion: a^2 must be positive");
    const bool her = c.kind == PQCase::Kind::Hermite;
    const Ring g = ring_of(c);
    const RatPoly S2 = g.S2(), SSp = g.SSp();
    const RatPoly lam = RatPoly::variable("lam");

    std::vector<RatPoly> Q{her ? r(-1, 8) * (3 * tp(2) + 2) : laguerre_Q1(g.a2)};
    for (int k = 1; k < K; ++k) {
        const RatPoly& q = Q.back();
        RatPoly conv;
        for (int j = 1; j <= k - 1; ++j) conv += Q[static_cast<std::size_t>(j - 1)] * Q[static_cast<std::size_t>(k - j - 1)];
        if (her)
            Q.push_back(r(3, 2) * (k + 1) * T() * q - r(1, 2) * S2 * q.derivative("t") - r(1, 2) * conv);
        else
            Q.push_back((3 * (k + 1) * T() * SSp - S2) * q - T() * S2 * q.derivative("t") - T() * conv);
    }

    PQTable table;
    table.pq_case = c;
    for (int k = 1; k <= K; ++k) {
        const RatPoly& q = Q[static_cast<std::size_t>(k - 1)];
        const int D = static_cast<int>(pq_degree_bound(c, k));
        const auto qc = q.collect("t");
        if (static_cast<int>(qc.size()) > D + 2) throw std::logic_error("pq_recursion: Q_k degree exceeds bound");
        // Coefficient of t^m in S^2 P' - 3k S S' P:
        //   (m-1-3k) c_{m-1} + b (m - 3k/2) c_m + c0 (m+1) c_{m+1}.
        // Solved from the top row down; for odd k the top coefficient is free
        // and fixed by the m = 0 row.
        std::vector<RatPoly> cf(static_cast<std::size_t>(D + 2));
        if (D == 3 * k) {
            if (!coeff_at(qc, D + 1).is_zero()) throw std::logic_error("pq_recursion: inconsistent top row");
            cf[static_cast<std::size_t>(D)] = lam;
        } else {
            cf[static_cast<std::size_t>(D)] = r(1, D - 3 * k) * coeff_at(qc, D + 1);
        }
        for (int m = D; m >= 1; --m) {
            RatPoly rhs = coeff_at(qc, m) - g.b * r(2 * m - 3 * k, 2) * cf[static_cast<std::size_t>(m)] -
                          g.c0 * (m + 1) * cf[static_cast<std::size_t>(m + 1)];
            cf[static_cast<std::size_t>(m - 1)] = r(1, m - 1 - 3 * k) * rhs;
        }
        const RatPoly row0 = g.b * r(-3 * k, 2) * cf[0] + g.c0 * cf[1] - coeff_at(qc, 0);
        RatPoly value;
        if (D == 3 * k) {
            const RatPoly A = row0.substitute("lam", BigRational(0));
            const RatPoly B = row0.derivative("lam");
            if (B.is_zero()) throw std::logic_error("pq_recursion: leading coefficient undetermined");
            std::optional<RatPoly> sol;
            int N = 0;
            for (; N <= 4 * k && !sol; ++N) sol = divide_exact(-A * pow(RatPoly::variable("a2"), static_cast<unsigned>(N)), B);
            if (!sol) throw std::logic_error("pq_recursion: no Laurent solution for the leading coefficient");
            value = laurent_normalize(*sol * pow(RatPoly::variable("ia2"), static_cast<unsigned>(N - 1)));
        } else if (!row0.is_zero()) {
            throw std::logic_error("pq_recursion: no polynomial solution of admissible degree");
        }
        RatPoly P;
        for (int i = 0; i <= D; ++i) P += cf[static_cast<std::size_t>(i)] * tp(static_cast<unsigned>(i));
        if (D == 3 * k) P = P.substitute("lam", value);
        P = laurent_normalize(P);
        PQEntry e{P, q, RatPoly()};
        if (k % 2) e.lambda = coeff_at(P.collect("t"), 3 * k);
        if (!pq_residual(c, k, e).is_zero()) throw std::logic_error("pq_recursion: nonzero residual");
        table.entries.push_back(std::move(e));
    }
    return table;
}

RatPoly lambda_closed(const PQCase& c, int k) {
    if (k < 1 || k > 3) throw std::invalid_argument("lambda_closed: k must be 1..3");
    BigRational base = bernoulli_half(2 * k) / BigRational(4 * k * (2 * k - 1));
    base.canonicalize();
    if (c.kind == PQCase::Kind::Hermite) {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(2 * k - 1));
        return RatPoly(BigRational(base * p2));
    }
    if (!c.a2) return RatPoly(base) * (1 + pow(RatPoly::variable("ia2"), static_cast<unsigned>(2 * k - 1)));
    BigRational inv = 1 / *c.a2, w = 1;
    for (int i = 0; i < 2 * k - 1; ++i) w *= inv;
    return RatPoly(BigRational(base * (1 + w)));
}

std::array<RatPoly, 2> displayed_P12(PQCase::Kind kind) {
    if (kind == PQCase::Kind::Hermite) return {r(1, 24) * T() * (6 - tp(2)), r(1, 16) * (3 * tp(2) + 2)};
    const RatPoly a2 = RatPoly::variable("a2"), ia2 = RatPoly::variable("ia2");
    const RatPoly num = pow(a2 - 1, 2) * (pow(a2 - 1, 2) - 4 * a2) - 3 * pow(a2 + 1, 3) * T() +
                        3 * (pow(a2, 2) + 6 * a2 + 1) * tp(2) - (a2 + 1) * tp(3);
    const RatPoly P1 = laurent_normalize(r(1, 48) * ia2 * num);
    const RatPoly P2 = r(1, 4) * T() * (tp(3) - T() * (3 * a2 - 1) * (a2 - 3) + 2 * (a2 + 1) * pow(a2 - 1, 2));
    return {P1, P2};
}

// ---- wave-function expansion ---------------------------------------------------

WaveExpansion wave_expansion(PQCase::Kind kind, int m) {
    if (m < 0 || m > 3) throw std::invalid_argument("wave_expansion: m must be 0..3");
    const RatPoly& s = S();
    const RatPoly& u = U();
    std::vector<RatPoly> p, q;
    if (kind == PQCase::Kind::Hermite) {
        p = {1, r(-1, 5) * s, r(9, 70) * sp(2) + r(1, 50) * sp(5),
             r(-28, 225) - r(473, 3150) * sp(3) - r(31, 2625) * sp(6)};
        q = {0, r(1, 5) * sp(2), r(-9, 35) - r(3, 35) * sp(3),
             r(473, 1575) * s + r(169, 3150) * sp(4) + r(1, 750) * sp(7)};
    } else {
        const RatPoly a = 2 * u - 1;
        p = {1, r(-1, 10) * (u + 2) * s,
             r(1, 280) * (13 * up(2) + 4 * u + 36) * sp(2) + r(1, 50) * pow(a, 2) * sp(5),
             r(1, 900) * (up(3) - 14 * up(2) + 112 * u - 112) -
                 r(1, 25200) * (803 * up(3) + 1838 * up(2) - 3244 * u + 3784) * sp(3) -
                 r(1, 10500) * a * (614 * up(2) - 209 * u - 124) * sp(6)};
        q = {0, r(-1, 5) * a * sp(2),
             r(1, 140) * (up(2) + 24 * u - 36) + r(1, 70) * (20 * up(2) - 3 * u - 6) * sp(3),
             -(r(1, 12600) * (37 * up(3) - 158 * up(2) + 3244 * u - 3784) * s) -
                 r(1, 12600) * (2758 * up(3) - 437 * up(2) - 44 * u - 676) * sp(4) - r(1, 750) * pow(a, 3) * sp(7)};
    }
    p.resize(static_cast<std::size_t>(m + 1));
    q.resize(static_cast<std::size_t>(m + 1));
    return {kind, m, std::move(p), std::move(q)};
}

double wave_expansion_eval(PQCase::Kind kind, double n, std::optional<double> p, double s, int m) {
    if (n < 5) throw std::invalid_argument("wave_expansion_eval: requires n >= 5");
    const bool her = kind == PQCase::Kind::Hermite;
    const ScalingParams sp = wave_scaling(her ? EnsembleKind::Gaussian : EnsembleKind::Laguerre, n, p);
    const WaveExpansion w = wave_expansion(kind, m);
    const std::vector<std::string> order{"tau", "s"};
    const double x[2] = {sp.tau, s};
    double sa = 0.0, sb = 0.0, hk = 1.0;
    for (int k = 0; k <= m; ++k) {
        sa += hk * CompiledPoly(w.p[static_cast<std::size_t>(k)], order)(x);
        sb += hk * CompiledPoly(w.q[static_cast<std::size_t>(k)], order)(x);
        hk *= sp.h;
    }
    const AiryPair ai = airy(s);
    return ai.ai * sa + ai.aip * sb;
}

double wave_scaled_exact(PQCase::Kind kind, int n, std::optional<int> p, double s) {
    if (kind == PQCase::Kind::Hermite) {
        const ScalingParams sp = wave_scaling(EnsembleKind::Gaussian, n);
        return wave_eval(WaveFunctionSpec::hermite(n), sp.mu + sp.sigma * s) /
               (std::sqrt(2.0) * std::pow(sp.h, 0.125));
    }
    if (!p) throw std::invalid_argument("wave_scaled_exact: Laguerre needs p");
    const ScalingParams sp = wave_scaling(EnsembleKind::Laguerre, n, *p);
    return wave_eval(WaveFunctionSpec::laguerre_np(n, *p), sp.mu + sp.sigma * s) / std::sqrt(sp.tau * sp.h);
}

TruncatedSeries zeta_series(PQCase::Kind kind) {
    const RatPoly& s = S();
    if (kind == PQCase::Kind::Hermite) {
        // 2^{-1/3} zeta in powers of w = t - 1, with t = 1 + 2 h s and u^{2/3} = 2^{-4/3}/h.
        const RatPoly w = RatPoly::variable("w");
        const RatPoly power = w + r(1, 10) * pow(w, 2) - r(2, 175) * pow(w, 3) + r(37, 15750) * pow(w, 4);
        const TruncatedSeries sub = substitute_series(power, "w", TruncatedSeries("h", 4, {0, 2 * s}));
        TruncatedSeries out("h", 3);
        for (int k = 0; k <= 3; ++k) out[k] = r(1, 2) * sub[k + 1];
        return out;
    }
    // Coefficients c_j = N_j(a) / (K_j a^{j-1} (a+1)^{2(j-1)}) of (t - t_1)^j, with
    // t - t_1 = 4 a h s. The product c_j (4a)^{j-1} is a polynomial in tau = 4a/(a+1)^2.
    const RatPoly a = RatPoly::variable("a");
    const std::array<RatPoly, 3> N{1 - 6 * a + pow(a, 2),
                                   -(1 + 13 * a - 62 * pow(a, 2) + 13 * pow(a, 3) + pow(a, 4)),
                                   37 + 434 * a + 3607 * pow(a, 2) - 15724 * pow(a, 3) + 3607 * pow(a, 4) +
                                       434 * pow(a, 5) + 37 * pow(a, 6)};
    const std::array<long, 3> K{20, 350, 126000};
    TruncatedSeries out("h", 3);
    out[0] = s;
    for (int j = 2; j <= 4; ++j) {
        const int d = j - 1;
        const RatPoly target = r(1L << (2 * d), K[static_cast<std::size_t>(j - 2)]) * N[static_cast<std::size_t>(j - 2)];
        ExactLinearSystem sys;
        sys.matrix = PolyMatrix::Zero(2 * d + 1, d + 1);
        sys.rhs = PolyVector::Zero(2 * d + 1);
        for (int i = 0; i <= d; ++i) {
            const auto col = (pow(4 * a, static_cast<unsigned>(i)) * pow(a + 1, static_cast<unsigned>(2 * (d - i)))).collect("a");
            for (int row = 0; row <= 2 * d; ++row) sys.matrix(row, i) = coeff_at(col, row);
            sys.unknowns.push_back("r" + std::to_string(i));
        }
        const auto tc = target.collect("a");
        for (int row = 0; row <= 2 * d; ++row) sys.rhs(row) = coeff_at(tc, row);
        const PolyVector sol = solve_exact(sys);
        RatPoly rt;
        for (int i = 0; i <= d; ++i) rt += sol(i) * up(static_cast<unsigned>(i));
        out[d] = rt * sp(static_cast<unsigned>(j));
    }
    return out;
}

}  // namespace softedge
