#include "softedge/algebra.hpp"

#include "softedge/painleve.hpp"

#include <algorithm>
#include <stdexcept>

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

RatPoly coeff_at(const std::vector<RatPoly>& c, unsigned i) {
    return i < c.size() ? c[i] : RatPoly();
}

RatPoly coeff_qqp(const RatPoly& p, unsigned i, unsigned j) {
    return coeff_at(coeff_at(p.collect("q"), i).collect("qp"), j);
}

TruncatedSeries constant_series(const RatPoly& c, int order) {
    TruncatedSeries s("hr", order);
    s[0] = c;
    return s;
}

// Taylor re-expansion F(t + delta)/F(t) = sum_a delta^a / a! L_a.
TruncatedSeries taylor(TWLabel label, const TruncatedSeries& delta, int order) {
    TruncatedSeries out = constant_series(1, order);
    TruncatedSeries power = constant_series(1, order);
    BigRational fact = 1;
    for (int a = 1; a <= order; ++a) {
        power = power * delta;
        fact *= a;
        out += RatPoly(BigRational(1 / fact)) * tw_logderiv(label, a) * power;
    }
    return out;
}

// Greatest common monomial times the rational content of the nonzero entries,
// signed so that the first nonzero entry has a positive lowest term.
RatPoly row_content(const std::vector<RatPoly>& entries) {
    mpz_class num = 0, den = 1;
    std::optional<unsigned> et, eu;
    int sign = 0;
    for (const RatPoly& e : entries) {
        if (e.is_zero()) continue;
        if (sign == 0) sign = sgn(e.terms().begin()->second);
        const auto& vars = e.vars();
        for (const auto& [exps, c] : e.terms()) {
            mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), c.get_num_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
            unsigned pt = 0, pu = 0;
            for (std::size_t v = 0; v < vars.size(); ++v) {
                if (vars[v] == "t") pt = exps[v];
                if (vars[v] == "tau") pu = exps[v];
            }
            et = std::min(et.value_or(pt), pt);
            eu = std::min(eu.value_or(pu), pu);
        }
    }
    if (sign == 0) return 1;
    BigRational g(num, den);
    g.canonicalize();
    return RatPoly(BigRational(sign * g)) * pow(T(), *et) * pow(RatPoly::variable("tau"), *eu);
}

// p_{2,jk} for the given kind, with j, k one-based.
struct P2 {
    EnsembleKind kind;
    RatPoly operator()(int j, int k) const { return expansion_term(2, j, kind).coeffs.at(static_cast<std::size_t>(k - 1)); }
};

RatPoly D(const RatPoly& p, int n = 1) {
    RatPoly out = p;
    for (int i = 0; i < n; ++i) out = out.derivative("t");
    return out;
}

}  // namespace

SeriesParams series_params(EnsembleKind kind) {
    SeriesParams sp;
    sp.kind = kind;
    sp.beta1 = r(1, 3);
    if (kind == EnsembleKind::Gaussian) {
        sp.alpha1 = r(-2, 3);
        sp.alpha2 = r(-10, 9);
        sp.gamma1 = r(8, 3);
        return sp;
    }
    const RatPoly tau = RatPoly::variable("tau");
    sp.alpha1 = tau - r(2, 3);
    sp.alpha2 = r(4, 3) * tau - r(10, 9);
    sp.gamma1 = r(8, 3) - 2 * tau;
    sp.delta1 = 2 * (tau - 1);
    return sp;
}

TruncatedSeries shift_series(const SeriesParams& sp, int nu, int order) {
    if (order < 0 || order > 6) throw std::invalid_argument("shift_series: order must be 0..6");
    const long sg = nu == 0 ? 1 : -1;
    TruncatedSeries d("hr", order);
    auto add = [&](int k, const RatPoly& c) {
        if (k <= order) d[k] += c;
    };
    add(1, RatPoly(sg));
    add(3, sg * sp.alpha1 * T());
    add(4, sp.beta1);  // sigma * sigma beta_1
    add(6, sp.alpha2 * T());
    return d;
}

RelationJ1 build_relation_j1(EnsembleKind kind) {
    const int order = 2;
    const SeriesParams sp = series_params(kind);
    const RatPoly ep = RatPoly::variable("ep"), em = RatPoly::variable("em");
    TruncatedSeries eps("hr", order), ems("hr", order);
    eps[2] = ep;
    ems[2] = em;
    TruncatedSeries sum("hr", order);
    for (int nu = 0; nu <= 1; ++nu) {
        const TruncatedSeries plus = taylor(TWLabel::Plus, shift_series(sp, nu, order), order) + eps;
        const TruncatedSeries minus = taylor(TWLabel::Minus, shift_series(sp, 1 - nu, order), order) + ems;
        sum += plus * minus;
    }
    RelationJ1 rel;
    rel.series = r(1, 2) * sum;
    if (!rel.series[1].is_zero()) throw std::logic_error("build_relation_j1: odd power of h^{1/2} survives");
    const auto L = [](TWLabel b, int k) { return tw_logderiv(b, k); };
    rel.bracket = L(TWLabel::Minus, 2) - 2 * L(TWLabel::Plus, 1) * L(TWLabel::Minus, 1) + L(TWLabel::Plus, 2);
    return rel;
}

RelationSystem assemble_system_m1(EnsembleKind kind, bool symbolic_rhs) {
    const std::vector<std::pair<unsigned, unsigned>> rows{{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}, {8, 0},
                                                          {0, 1}, {0, 2}, {0, 4}, {1, 2}, {2, 2}, {4, 2}};
    const std::array<RatPoly, 4> cols{tw_logderiv(TWLabel::Plus, 1), tw_logderiv(TWLabel::Minus, 1),
                                      tw_logderiv(TWLabel::Plus, 2), tw_logderiv(TWLabel::Minus, 2)};
    const P2 p2{kind};
    const RatPoly p11 = symbolic_rhs ? RatPoly::variable("p211") : p2(1, 1);
    const RatPoly p12 = symbolic_rhs ? RatPoly::variable("p212") : p2(1, 2);
    const RatPoly lhs = p11 * tw_logderiv(TWLabel::Two, 1) + p12 * tw_logderiv(TWLabel::Two, 2);

    // Every (q, q') monomial must be one of the listed rows.
    for (const RatPoly& p : {cols[0], cols[1], cols[2], cols[3], lhs}) {
        const auto qc = p.collect("q");
        for (unsigned i = 0; i < qc.size(); ++i) {
            const auto qpc = qc[i].collect("qp");
            for (unsigned j = 0; j < qpc.size(); ++j)
                if (!qpc[j].is_zero() && (i || j) &&
                    std::find(rows.begin(), rows.end(), std::make_pair(i, j)) == rows.end())
                    throw std::logic_error("assemble_system_m1: unexpected monomial");
        }
    }

    RelationSystem rs;
    rs.m = 1;
    rs.monomials = rows;
    rs.system.matrix = PolyMatrix::Zero(static_cast<Eigen::Index>(rows.size()), 4);
    rs.system.rhs = PolyVector::Zero(static_cast<Eigen::Index>(rows.size()));
    rs.system.unknowns = {"p+11", "p-11", "p+12", "p-12"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto [a, b] = rows[i];
        std::vector<RatPoly> entries;
        for (const RatPoly& c : cols) entries.push_back(coeff_qqp(c, a, b));
        const RatPoly g = row_content(entries);
        for (int j = 0; j < 4; ++j) {
            auto e = divide_exact(entries[static_cast<std::size_t>(j)], g);
            if (!e) throw std::logic_error("assemble_system_m1: content does not divide");
            rs.system.matrix(static_cast<Eigen::Index>(i), j) = *e;
        }
        auto rhs = divide_exact(coeff_qqp(lhs, a, b), g);
        if (!rhs) throw std::logic_error("assemble_system_m1: content does not divide the right side");
        rs.system.rhs(static_cast<Eigen::Index>(i)) = *rhs;
    }
    return rs;
}

std::vector<RatPoly> assemble_and_solve(EnsembleKind kind) {
    const RelationSystem rs = assemble_system_m1(kind);
    const PolyVector x = solve_exact(rs.system);
    if (x(0) != x(1) || x(2) != x(3)) throw std::logic_error("assemble_and_solve: p_+ and p_- differ");
    return {x(0), x(2)};
}

std::vector<RatPoly> transform_m23(int m, EnsembleKind kind) {
    if (m != 2 && m != 3) throw std::invalid_argument("transform_m23: m must be 2 or 3");
    const P2 P{kind};
    const SeriesParams sp = series_params(kind);
    const RatPoly& t = T();
    const RatPoly& b1 = sp.beta1;
    if (m == 2) {
        return {P(2, 1) + 2 * P(2, 4) - r(1, 2) * D(P(1, 1), 2) + P(1, 2) + r(1, 12) - b1,
                2 * P(2, 2) - r(1, 2) * pow(P(1, 1), 2) - D(P(1, 2), 2), 4 * P(2, 3) - 2 * P(1, 1) * P(1, 2),
                8 * P(2, 4) - 2 * pow(P(1, 2), 2)};
    }
    const RatPoly &a1 = sp.alpha1, &a2 = sp.alpha2, &g1 = sp.gamma1;
    const RatPoly P11 = P(1, 1), P12 = P(1, 2);
    const RatPoly P21 = P(2, 1), P22 = P(2, 2), P23 = P(2, 3), P24 = P(2, 4);
    const RatPoly P31 = P(3, 1), P32 = P(3, 2), P33 = P(3, 3), P34 = P(3, 4), P35 = P(3, 5), P36 = P(3, 6);
    // delta_1 tau d/dtau; absent in the Gaussian case.
    auto dtau = [&](const RatPoly& p) {
        return sp.delta1 ? *sp.delta1 * RatPoly::variable("tau") * p.derivative("tau") : RatPoly();
    };
    const RatPoly p31 = 8 * t * P36 + P12 * pow(P11, 2) - 2 * P23 * P11 + P31 + 2 * P34 - r(1, 2) * pow(P11, 2) +
                        r(1, 3) * t * P12 + P22 + 4 * t * P24 + 2 * a1 * t * P12 - a1 * t * D(P11, 2) -
                        (b1 + g1 - r(1, 3)) * D(P11) - dtau(D(P11)) - 2 * D(P12) * P11 + 2 * D(P23) -
                        r(1, 2) * D(P12, 2) - r(1, 2) * D(P21, 2) - D(P24, 2) + r(5, 24) * D(P11, 4) +
                        r(1, 3) * a1 * t - a2 * t + r(1, 90) * t;
    const RatPoly p32 = 8 * P11 * pow(P12, 2) - 8 * P23 * P12 - P11 * P21 - 18 * P11 * P24 + 2 * P32 + 20 * P35 -
                        5 * P11 * P12 + 6 * P23 + (r(1, 12) - b1) * P11 - 2 * (b1 + g1 - r(2, 3)) * D(P12) -
                        8 * D(P12) * P12 + pow(D(P11), 2) + 16 * D(P24) + r(1, 2) * P11 * D(P11, 2) - D(P22, 2) +
                        r(5, 12) * D(P12, 4) - 2 * a1 * t * D(P12, 2) - 2 * dtau(D(P12));
    const RatPoly p33 = r(1, 2) * pow(P11, 3) - 2 * P22 * P11 + 16 * pow(P12, 3) - 2 * P12 * P21 - 68 * P12 * P24 +
                        4 * P33 + 120 * P36 - 10 * pow(P12, 2) + 24 * P24 + (r(1, 6) - 2 * b1) * P12 +
                        D(P12, 2) * P11 + 4 * D(P11) * D(P12) + P12 * D(P11, 2) - 2 * D(P23, 2);
    const RatPoly p34 = 3 * P12 * pow(P11, 2) - 4 * P23 * P11 - 4 * P12 * P22 + 8 * P34 + 4 * pow(D(P12), 2) +
                        2 * P12 * D(P12, 2) - 4 * D(P24, 2);
    const RatPoly p35 = 6 * P11 * pow(P12, 2) - 8 * P23 * P12 - 8 * P11 * P24 + 16 * P35;
    const RatPoly p36 = 4 * pow(P12, 3) - 16 * P24 * P12 + 32 * P36;
    return {p31, p32, p33, p34, p35, p36};
}

ExpansionTerm derive_beta14(int j, EnsembleKind kind) {
    if (j < 1 || j > 3) throw std::invalid_argument("derive_beta14: j must be 1..3");
    ExpansionTerm e;
    e.beta = 1;
    e.j = j;
    e.kind = kind;
    e.coeffs = j == 1 ? assemble_and_solve(kind) : transform_m23(j, kind);
    return e;
}

}  // namespace softedge
