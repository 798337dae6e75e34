#include "checks.hpp"

#include "softedge/algebra.hpp"
#include "softedge/expansion.hpp"
#include "softedge/fredholm.hpp"
#include "softedge/painleve.hpp"
#include "softedge/sampler.hpp"
#include "softedge/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace softedge::checks {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

RatPoly Q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return RatPoly(r);
}

// Scaled density d/dt E_2(n; mu + sigma t) from the resolvent diagonal.
double finite_density(const KernelHandle& K, double t) {
    const DetResult d = fredholm_det(K, t);
    return d.value * d.dlog;
}

KernelHandle finite_kernel(const ScalingParams& s, int n, int p) {
    return s.kind == EnsembleKind::Gaussian ? KernelHandle::hermite(n, s.mu, s.sigma)
                                            : KernelHandle::laguerre(n, p, s.mu, s.sigma);
}

// P(lambda_max <= x) for weight y^alpha e^{-y}, n x n, from the Andreief moment determinant.
double lue_moment_oracle(int n, int alpha, double x) {
    auto lower_gamma_ratio = [&](int k) {  // gamma(k + 1, x) / k!
        long double term = 1, sum = 1;
        for (int l = 1; l <= k; ++l) {
            term *= (long double)x / l;
            sum += term;
        }
        return 1 - std::exp(-(long double)x) * sum;
    };
    Eigen::MatrixXd A(n, n), B(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const int k = i + j + alpha;
            const double w = std::exp(std::lgamma(k + 1.0) - std::lgamma(i + alpha + 1.0) - std::lgamma(j + 1.0));
            A(i, j) = double(lower_gamma_ratio(k)) * w;
            B(i, j) = w;
        }
    return A.determinant() / B.determinant();
}

}  // namespace

// 1. Airy determinant against the Painleve representation.
CheckResult dual_oracle_f2() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "dual_oracle_F2";
    r.tolerance = 1e-8;
    for (int t = -6; t <= 2; ++t)
        r.value = std::max(r.value, std::fabs(det_airy(t) - F_eval(TWLabel::Two, 0, t)));
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    r.pass = r.value < r.tolerance && r.seconds < 30;
    r.detail = "max over t in {-6..2}; runtime " + fmt("%.2f s (limit 30 s)", r.seconds);
    return r;
}

// 2. max_t |E_2' - F_2'| n^{2/3} < 0.07 and |E_2' - F_2' - h E_{2,1}'| n^{4/3} < 0.02.
CheckResult bound_gue_density() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "bound_gue_density";
    r.tolerance = 1.0;
    const ExpansionTerm& e1 = expansion_term(2, 1, EnsembleKind::Gaussian);
    std::ostringstream os;
    double worst = 0.0;
    for (int n : {2, 5, 10, 40}) {
        const ScalingParams s = make_scaling(EnsembleKind::Gaussian, 2, n);
        const KernelHandle K = finite_kernel(s, n, 0);
        double m0 = 0, m1 = 0;
        for (int i = 0; i <= 160; ++i) {
            const double t = -5 + 0.05 * i;
            const auto F = F_derivs(TWLabel::Two, 3, t);
            const double d = finite_density(K, t) - F[1];
            m0 = std::max(m0, std::fabs(d));
            m1 = std::max(m1, std::fabs(d - s.h * e1.eval(F, t, 0.0, 1)));
        }
        const double a = m0 * std::pow(n, 2.0 / 3), b = m1 * std::pow(n, 4.0 / 3);
        worst = std::max({worst, a / 0.07, b / 0.02});
        os << "n=" << n << ": " << fmt("%.4f", a) << " (<0.07), " << fmt("%.4f", b) << " (<0.02); ";
    }
    r.value = worst;
    r.pass = worst < 1.0;
    r.detail = os.str() + "value is the worst ratio to its bound";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 3. h^{-j} residuals approach E_{2,j}; deviations shrink like h between the two sizes.
CheckResult expansion_orders() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "expansion_orders";
    r.tolerance = 2.0;
    struct Size {
        int n, p;
    };
    struct Pair {
        EnsembleKind kind;
        Size a, b;
    };
    const Pair pairs[] = {{EnsembleKind::Gaussian, {10, 0}, {80, 0}}, {EnsembleKind::Laguerre, {10, 40}, {80, 320}}};
    std::ostringstream os;
    double lo = INFINITY, hi = 0;
    for (const Pair& pr : pairs) {
        const auto terms = expansion_terms(2, pr.kind);
        std::array<double, 3> dev[2]{};
        double h[2];
        for (int k = 0; k < 2; ++k) {
            const Size sz = k ? pr.b : pr.a;
            const ScalingParams s = pr.kind == EnsembleKind::Gaussian ? make_scaling(pr.kind, 2, sz.n)
                                                                      : make_scaling(pr.kind, 2, sz.n, double(sz.p));
            const KernelHandle K = finite_kernel(s, sz.n, sz.p);
            h[k] = s.h;
            for (int i = 0; i <= 60; ++i) {
                const double t = -4 + 0.1 * i;
                const auto F = F_derivs(TWLabel::Two, 6, t);
                double rem = fredholm_det(K, t).value - F[0];
                double hj = 1.0;
                for (int j = 0; j < 3; ++j) {
                    hj *= s.h;
                    const double Ej = terms[j].eval(F, t, s.tau);
                    dev[k][j] = std::max(dev[k][j], std::fabs(rem / hj - Ej));
                    rem -= hj * Ej;
                }
            }
        }
        for (int j = 0; j < 3; ++j) {
            const double ratio = dev[1][j] / dev[0][j] / (h[1] / h[0]);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
            os << (pr.kind == EnsembleKind::Gaussian ? "GUE" : "LUE") << " j=" << j + 1 << ": "
               << fmt("%.3f", ratio) << "; ";
        }
    }
    r.value = std::fabs(std::log2(lo)) > std::fabs(std::log2(hi)) ? lo : hi;
    r.pass = lo >= 0.5 && hi <= 2.0;
    r.detail = os.str() + "(deviation ratio / (h_80 / h_10), must lie in [0.5, 2])";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 4. Kernel residuals after K_1 and K_1 + K_2 decay like h^2 and h^3.
CheckResult kernel_expansion() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "kernel_expansion";
    r.tolerance = 0.4;
    const double grid[5] = {-2, -1, 0, 1, 2};
    std::ostringstream os;
    double worst = 0.0;
    for (bool lag : {false, true}) {
        double r1[2], r2[2], h[2];
        const int ns[2] = {100, 400};
        for (int k = 0; k < 2; ++k) {
            const int n = ns[k];
            const ScalingParams s = lag ? make_scaling(EnsembleKind::Laguerre, 2, n, 4.0 * n)
                                        : make_scaling(EnsembleKind::Gaussian, 2, n);
            const KernelHandle K = finite_kernel(s, n, 4 * n);
            const CorrectionEnsemble e = lag ? CorrectionEnsemble::lue(s.tau) : CorrectionEnsemble::gue();
            r1[k] = r2[k] = 0;
            for (double x : grid)
                for (double y : grid) {
                    const double d = K(x, y) - airy_kernel(x, y, airy(x), airy(y)) - s.h * kernel_correction(e, 1, x, y);
                    r1[k] = std::max(r1[k], std::fabs(d));
                    r2[k] = std::max(r2[k], std::fabs(d - s.h * s.h * kernel_correction(e, 2, x, y)));
                }
            h[k] = s.h;
        }
        const double q = h[1] / h[0];
        const double f1 = r1[1] / r1[0] / (q * q), f2 = r2[1] / r2[0] / (q * q * q);
        worst = std::max({worst, std::fabs(f1 - 1), std::fabs(f2 - 1)});
        os << (lag ? "LUE" : "GUE") << ": h^2 ratio " << fmt("%.3f", f1) << ", h^3 ratio " << fmt("%.3f", f2) << "; ";
    }
    r.value = worst;
    r.pass = worst <= 0.4;
    r.detail = os.str() + "value is the worst relative departure from the predicted power";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 5a. The 13 x 4 system and its symbolic solution.
CheckResult m1_system() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "m1_system";
    r.tolerance = 0;
    const RatPoly t = RatPoly::variable("t"), t2 = t * t;
    const RatPoly M[13][4] = {{1, -1, 0, 0}, {2 * t, 2 * t, 1, 1}, {0, 0, 1, -1}, {2, 2, -t2, -t2}, {0, 0, 1, -1},
                              {0, 0, 1, 1},  {0, 0, 1, 1},         {0, 0, 1, -1}, {1, 1, 0, 0},     {0, 0, 1, 1},
                              {0, 0, 1, -1}, {0, 0, 1, 1},         {0, 0, 1, 1}};
    const RatPoly p11 = RatPoly::variable("p211"), p12 = RatPoly::variable("p212");
    const RatPoly rhs[13] = {0, 4 * t * p11 + 4 * p12, 0, 4 * p11 - 4 * t2 * p12, 0, 4 * p12, 4 * p12,
                             0, 2 * p11,                4 * p12, 0, 4 * p12, 4 * p12};
    const RelationSystem rs = assemble_system_m1(EnsembleKind::Gaussian, true);
    int bad = 0;
    if (rs.system.matrix.rows() != 13 || rs.system.matrix.cols() != 4) {
        bad = 1;
    } else {
        for (int i = 0; i < 13; ++i) {
            for (int j = 0; j < 4; ++j) bad += !(rs.system.matrix(i, j) == M[i][j]);
            bad += !(rs.system.rhs(i) == rhs[i]);
        }
        const PolyVector x = solve_exact(rs.system);
        bad += !(x(0) == p11) + !(x(1) == p11) + !(x(2) == 2 * p12) + !(x(3) == 2 * p12);
    }
    r.value = bad;
    r.pass = bad == 0;
    r.detail = bad == 0 ? "exact match: p_{+-,11} = p_{2,11}, p_{+-,12} = 2 p_{2,12}" : "mismatching entries";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 5. Derivation of the beta = 1, 4 terms, exactly.
CheckResult beta14_derivation() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "beta14_derivation";
    r.tolerance = 0;
    int bad = m1_system().pass ? 0 : 1;
    std::ostringstream os;
    auto at0 = [](const RatPoly& p) { return p.substitute("tau", BigRational(0)); };
    for (auto kind : {EnsembleKind::Gaussian, EnsembleKind::Laguerre}) {
        // assemble_and_solve raises unless p_{+,1k} = p_{-,1k}.
        const auto sol = assemble_and_solve(kind);
        const auto& e21 = expansion_term(2, 1, kind);
        bad += !(sol[0] == e21.coeffs[0]) + !(sol[1] == 2 * e21.coeffs[1]);
        for (int j = 1; j <= 3; ++j) {
            const ExpansionTerm d = derive_beta14(j, kind);
            for (int beta : {1, 4}) {
                const auto& h = expansion_term(beta, j, kind);
                if (d.coeffs.size() != h.coeffs.size()) {
                    ++bad;
                    continue;
                }
                for (std::size_t k = 0; k < d.coeffs.size(); ++k) bad += !(d.coeffs[k] == h.coeffs[k]);
            }
        }
    }
    // tau = 0 reduction of every derived Laguerre coefficient.
    for (int j = 1; j <= 3; ++j) {
        const auto l = derive_beta14(j, EnsembleKind::Laguerre), g = derive_beta14(j, EnsembleKind::Gaussian);
        for (std::size_t k = 0; k < l.coeffs.size(); ++k) bad += !(at0(l.coeffs[k]) == g.coeffs[k]);
    }
    for (int m : {2, 3}) {
        const auto l = transform_m23(m, EnsembleKind::Laguerre), g = transform_m23(m, EnsembleKind::Gaussian);
        for (std::size_t k = 0; k < l.size(); ++k) bad += !(at0(l[k]) == g[k]);
    }
    r.value = bad;
    r.pass = bad == 0;
    r.detail = "13 x 4 system, p_+ = p_-, m = 2, 3 transforms against the beta = 1, 4 terms, tau = 0 reduction; "
               "value counts mismatches";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 6. Turning-point recursions, exactly.
CheckResult turning_point_recursions() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "turning_point_recursions";
    r.tolerance = 0;
    int bad = 0;
    const RatPoly t = RatPoly::variable("t");
    const auto her = pq_recursion(PQCase::hermite(), 6);
    const auto Ph = displayed_P12(PQCase::Kind::Hermite);
    bad += !(her[1].P == Ph[0]) + !(her[2].P == Ph[1]);
    bad += !(her[1].P == Q(1, 24) * t * (6 - t * t));
    bad += !(her[1].Q == Q(-1, 8) * (3 * t * t + 2));
    const auto lag = pq_recursion(PQCase::laguerre_symbolic(), 6);
    const auto Pl = displayed_P12(PQCase::Kind::Laguerre);
    bad += !(lag[1].P == Pl[0]) + !(lag[2].P == Pl[1]);
    for (const PQCase& c : {PQCase::hermite(), PQCase::laguerre_symbolic()}) {
        const auto& T = c.kind == PQCase::Kind::Hermite ? her : lag;
        for (int k = 1; k <= 6; ++k) bad += !pq_residual(c, k, T[k]).is_zero();
        for (int k = 1; k <= 6; ++k) bad += T[k].P.degree("t") > pq_degree_bound(c, k);
        for (int k = 1; k <= 3; ++k) {
            // The t^{3(2k-1)} coefficient of P_{2k-1}.
            const auto cs = T[2 * k - 1].P.collect("t");
            const bool full = cs.size() == std::size_t(3 * (2 * k - 1) + 1);
            bad += !full || !(laurent_normalize(cs.back()) == lambda_closed(c, k));
            bad += !(T[2 * k - 1].lambda == lambda_closed(c, k));
        }
    }
    r.value = bad;
    r.pass = bad == 0;
    r.detail = "P_1, P_2, Q_1 against the displayed forms, leading coefficients of P_{1,3,5} against lambda_{1,3,5}, degree bounds and zero residuals for k <= 6; "
               "value counts mismatches";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 7. m = 3 wave-function truncation error decays like h^4.
CheckResult wave_expansion() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "wave_expansion";
    r.tolerance = 0.4;
    auto max_err = [](PQCase::Kind kind, int n, std::optional<int> p) {
        double e = 0;
        std::optional<double> pd;
        if (p) pd = *p;
        for (int i = 0; i <= 80; ++i) {
            const double s = -4 + 0.125 * i;
            e = std::max(e, std::fabs(wave_scaled_exact(kind, n, p, s) - wave_expansion_eval(kind, n, pd, s, 3)) *
                                std::exp(s));
        }
        return e;
    };
    const double rh = max_err(PQCase::Kind::Hermite, 400, std::nullopt) / max_err(PQCase::Kind::Hermite, 100, std::nullopt);
    const double ph = std::pow(wave_scaling(EnsembleKind::Gaussian, 400).h / wave_scaling(EnsembleKind::Gaussian, 100).h, 4);
    const double rl = max_err(PQCase::Kind::Laguerre, 400, 1600) / max_err(PQCase::Kind::Laguerre, 100, 400);
    const double pl = std::pow(wave_scaling(EnsembleKind::Laguerre, 400, 1600.0).h /
                                   wave_scaling(EnsembleKind::Laguerre, 100, 400.0).h,
                               4);
    r.value = std::max(std::fabs(rh / ph - 1), std::fabs(rl / pl - 1));
    r.pass = r.value <= 0.4;
    r.detail = "Hermite ratio/prediction " + fmt("%.3f", rh / ph) + ", Laguerre " + fmt("%.3f", rl / pl);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 8. Monte-Carlo checks of the sampler and the histogram-adjusted corrections.
CheckResult monte_carlo(const McOptions& opt) {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "monte_carlo";
    std::ostringstream os;
    bool ok = true;
    auto N = [&](double full) { return std::max<std::uint64_t>(1000, std::uint64_t(full * opt.scale)); };

    // (a) beta = 2 calibration, KS < 2e-3 at N = 10^6.
    double ks_max = 0;
    for (int n : {5, 10, 25}) {
        const auto b = sample_batch({2, EnsembleKind::Gaussian, n, 0}, N(1e6), opt.seed + n);
        ks_max = std::max(ks_max, ks_one_sample(b.values, FredholmCdf(EnsembleKind::Gaussian, n, 0)));
    }
    const double ks_tol = opt.scale >= 1 ? 2e-3 : 1.63 / std::sqrt(double(N(1e6)));
    ok &= ks_max < ks_tol;
    os << "calibration KS " << fmt("%.5f", ks_max) << " (<" << fmt("%.5f", ks_tol) << "); ";

    // (b) first-correction panels: eta = 1/2, central bins between the 2.5% and 97.5% points of F_2.
    auto quantile = [](double P) {
        double lo = -8, hi = 4;
        for (int i = 0; i < 50; ++i) {
            const double m = 0.5 * (lo + hi);
            (F_eval(TWLabel::Two, 0, m) < P ? lo : hi) = m;
        }
        return 0.5 * (lo + hi);
    };
    const double qa = quantile(0.025), qb = quantile(0.975);
    double cover_min = 1.0;
    for (auto [kind, n, p] : {std::tuple{EnsembleKind::Gaussian, 10, 0}, std::tuple{EnsembleKind::Laguerre, 10, 40}}) {
        const auto b = sample_batch({2, kind, n, p}, N(1e7), opt.seed + 100 + n + p);
        const Histogram H = mc_histogram(b, 0.5);
        const auto adj = histogram_adjust(expansion_terms(2, kind), BigRational(1, 2));
        int in = 0, tot = 0;
        for (std::size_t i = 0; i < H.counts.size(); ++i) {
            const double m = H.mid(i);
            if (m < qa || m > qb) continue;
            const auto [lo, hi] = H.ci(i);
            const double pred = eval_terms(b.scaling, adj, 2, m, 1);
            ++tot;
            in += pred >= lo && pred <= hi;
        }
        const double c = double(in) / tot;
        cover_min = std::min(cover_min, c);
        os << b.spec.label() << " histogram " << in << "/" << tot << " bins in 99% CI; ";
    }
    ok &= cover_min >= 0.95;

    // (c) decimation at 3 sigma, N = 10^5 each.
    const auto gse = decimation_check(DecimationFamily::GseGoe, 4, 0, N(1e5), opt.seed + 200);
    const auto lue = decimation_check(DecimationFamily::LueLoe, 5, 8, N(1e5), opt.seed + 201);
    ok &= gse.pass && lue.pass;
    os << "GSE_4 vs even(GOE_9) KS " << fmt("%.4f", gse.ks) << " (<" << fmt("%.4f", 3 * gse.fluctuation) << "); ";
    os << "LUE(5,8) vs even(LOE) KS " << fmt("%.4f", lue.ks) << " (<" << fmt("%.4f", 3 * lue.fluctuation) << "); ";
    {
        const ScalingParams s = make_scaling(EnsembleKind::Laguerre, 2, 5, 8.0);
        std::vector<double> t;
        for (double v : lue.decimated) t.push_back((v - s.mu) / s.sigma);
        const double ks = ks_one_sample(t, FredholmCdf(EnsembleKind::Laguerre, 5, 8));
        const double tol = 1.63 / std::sqrt(double(t.size()));
        ok &= ks < tol;
        os << "decimated arm vs Fredholm KS " << fmt("%.4f", ks) << " (<" << fmt("%.4f", tol) << "); ";
    }

    // (d) superposition identity for E_2(6; x) within 3 standard errors.
    {
        const ScalingParams s = make_scaling(EnsembleKind::Gaussian, 2, 6);
        std::vector<double> x;
        for (int i = 0; i <= 8; ++i) x.push_back(s.mu + s.sigma * (-3 + 0.5 * i));
        const auto a = count_exceed({1, EnsembleKind::Gaussian, 6, 0}, x, N(1e6), opt.seed + 300, true);
        const auto b = count_exceed({1, EnsembleKind::Gaussian, 7, 0}, x, N(1e6), opt.seed + 301, true);
        const auto est = superposition_e2(a, b);
        const KernelHandle K = KernelHandle::hermite(6, s.mu, s.sigma);
        double z = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (est.stderr_[i] > 0) z = std::max(z, std::fabs(est.value[i] - det_finite(K, -3 + 0.5 * i)) / est.stderr_[i]);
        ok &= z < 3;
        os << "superposition max |z| " << fmt("%.2f", z) << " (<3); ";
    }

    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    ok &= r.seconds <= 1800;
    r.value = cover_min;
    r.tolerance = 0.95;
    r.pass = ok;
    r.detail = os.str() + "runtime " + fmt("%.1f s (limit 1800 s)", r.seconds);
    return r;
}

// 9. Laguerre-to-Gaussian transition and Wishart symmetry.
CheckResult laguerre_gaussian() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "laguerre_gaussian";
    r.tolerance = 1e-10;
    const int n = 5;
    const ScalingParams g = make_scaling(EnsembleKind::Gaussian, 2, n);
    const KernelHandle KG = finite_kernel(g, n, 0);
    std::ostringstream os;
    bool decreasing = true;
    double prev = INFINITY;
    for (int p : {100, 1000, 10000}) {
        const ScalingParams l = make_scaling(EnsembleKind::Laguerre, 2, n, double(p));
        const KernelHandle KL = finite_kernel(l, n, p);
        double sup = 0;
        for (int i = 0; i <= 70; ++i) {
            const double t = -4 + 0.1 * i;
            sup = std::max(sup, std::fabs(det_finite(KL, t) - det_finite(KG, t)));
        }
        decreasing &= sup < prev;
        prev = sup;
        os << "p=" << p << ": sup " << fmt("%.3e", sup) << "; ";
    }
    // E_2(n, p; x) = E_2(p, n; x): Fredholm determinants in both orders against the moment determinant.
    double sym = 0;
    for (auto [a, b] : {std::pair{3, 7}, std::pair{5, 12}})
        for (double x : {2.0, 8.0, 15.0, 25.0}) {
            const double ref = lue_moment_oracle(std::min(a, b), std::abs(a - b), x);
            sym = std::max({sym, std::fabs(det_finite(KernelHandle::laguerre(a, b), x) - ref),
                            std::fabs(det_finite(KernelHandle::laguerre(b, a), x) - ref)});
        }
    const ScalingParams s1 = make_scaling(EnsembleKind::Laguerre, 2, 5, 12.0), s2 = make_scaling(EnsembleKind::Laguerre, 2, 12, 5.0);
    sym = std::max({sym, std::fabs(s1.mu - s2.mu), std::fabs(s1.sigma - s2.sigma), std::fabs(s1.h - s2.h)});
    r.value = sym;
    r.pass = decreasing && sym < 1e-10;
    r.detail = os.str() + (decreasing ? "strictly decreasing; " : "NOT decreasing; ") + "Wishart symmetry " +
               fmt("%.2e", sym);
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

// 10. Finite-rank corrections against the closed forms, and F_2'' = 2 F_2 u_01.
CheckResult finite_rank_corrections() {
    const auto t0 = Clock::now();
    CheckResult r;
    r.name = "finite_rank_corrections";
    r.tolerance = 1e-6;
    double worst = 0;
    for (double t : {-2.0, 0.0, 1.0}) {
        const ResolventTable u = resolvent_table(t);
        std::vector<TildeCoefficients> sets{TildeCoefficients::gue()};
        for (double tau : {0.0, 0.5, 1.0}) sets.push_back(TildeCoefficients::lue(tau));
        for (const auto& a : sets) {
            const CorrectionTerms c = finite_rank_correction(a, u);
            for (int j = 0; j < 3; ++j) worst = std::max(worst, std::fabs(c.numeric[j] - c.closed[j]));
        }
        const auto F = F_derivs(TWLabel::Two, 2, t);
        worst = std::max(worst, std::fabs(F[2] - 2 * F[0] * u(0, 1)));
    }
    r.value = worst;
    r.pass = worst < 1e-6;
    r.detail = "t in {-2, 0, 1}; GUE and LUE tau in {0, 1/2, 1}";
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names{
        "dual_oracle_F2",   "bound_gue_density", "expansion_orders", "kernel_expansion",
        "beta14_derivation",    "turning_point_recursions",  "wave_expansion",   "monte_carlo",
        "laguerre_gaussian", "finite_rank_corrections",       "m1_system"};
    return names;
}

CheckResult run_check(const std::string& name, const McOptions& opt) {
    static const std::map<std::string, std::function<CheckResult(const McOptions&)>> table{
        {"dual_oracle_F2", [](const McOptions&) { return dual_oracle_f2(); }},
        {"bound_gue_density", [](const McOptions&) { return bound_gue_density(); }},
        {"expansion_orders", [](const McOptions&) { return expansion_orders(); }},
        {"kernel_expansion", [](const McOptions&) { return kernel_expansion(); }},
        {"m1_system", [](const McOptions&) { return m1_system(); }},
        {"beta14_derivation", [](const McOptions&) { return beta14_derivation(); }},
        {"turning_point_recursions", [](const McOptions&) { return turning_point_recursions(); }},
        {"wave_expansion", [](const McOptions&) { return wave_expansion(); }},
        {"monte_carlo", [](const McOptions& o) { return monte_carlo(o); }},
        {"laguerre_gaussian", [](const McOptions&) { return laguerre_gaussian(); }},
        {"finite_rank_corrections", [](const McOptions&) { return finite_rank_corrections(); }},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw std::invalid_argument("unknown check: " + name);
    return it->second(opt);
}

}  // namespace softedge::checks
