#include "softedge/painleve.hpp"

#include "softedge/special.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace softedge {

namespace {

constexpr int kDegree = 24;
constexpr double kElementWidth = 1.0;

// Hastings-McLeod left asymptote sqrt(-t/2) (1 + t^-3/8 - 73 t^-6/128 + 10657 t^-9/1024).
double left_asymptote(double t) {
    double r = 1.0 / (t * t * t);
    return std::sqrt(-t / 2) * (1 + r / 8 - 73 * r * r / 128 + 10657 * r * r * r / 1024);
}

Eigen::MatrixXd diff_matrix(const std::vector<double>& x, const std::vector<double>& w) {
    const int n = static_cast<int>(x.size());
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double diag = 0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            D(i, j) = (w[j] / w[i]) / (x[i] - x[j]);
            diag -= D(i, j);
        }
        D(i, i) = diag;
    }
    return D;
}

// Chebyshev coefficients of the antiderivative of the interpolant through
// values f at x_j = -cos(pi j / N).
std::vector<double> antiderivative_coeffs(const double* f, int N) {
    std::vector<double> c(N + 3, 0.0);
    for (int k = 0; k <= N; ++k) {
        double s = 0;
        for (int j = 0; j <= N; ++j) {
            double term = f[j] * std::cos(k * std::numbers::pi * (N - j) / N);
            s += (j == 0 || j == N) ? 0.5 * term : term;
        }
        c[k] = 2.0 * s / N;
    }
    c[0] *= 0.5;
    c[N] *= 0.5;
    std::vector<double> C(N + 2, 0.0);
    C[1] = c[0] - 0.5 * c[2];
    for (int k = 2; k <= N + 1; ++k) C[k] = (c[k - 1] - c[k + 1]) / (2.0 * k);
    return C;
}

double cheb_sum(const std::vector<double>& C, double x) {
    // Clenshaw
    double b1 = 0, b2 = 0;
    for (int k = static_cast<int>(C.size()) - 1; k >= 1; --k) {
        double b0 = 2 * x * b1 - b2 + C[k];
        b2 = b1;
        b1 = b0;
    }
    return x * b1 - b2 + C[0];
}

double tail_int_q(double T) {
    QuadRule r = gauss_legendre(60, T, T + 14.0);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * airy(r.nodes[i]).ai;
    return s;
}

// int_T^inf (x - T) Ai(x)^2 dx in closed form.
double tail_int_u(double T) {
    AiryPair a = airy(T);
    return (2 * T * T * a.ai * a.ai - 2 * T * a.aip * a.aip - a.ai * a.aip) / 3;
}

}  // namespace

int HMTable::element_of(double t) const {
    if (!(t >= t_min() && t <= t_max())) throw std::out_of_range("t outside the Hastings-McLeod table");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    int e = static_cast<int>(it - breaks_.begin()) - 1;
    return std::clamp(e, 0, static_cast<int>(breaks_.size()) - 2);
}

double HMTable::interp(const std::vector<double>& v, int e, double x) const {
    const double* f = v.data() + static_cast<std::size_t>(e) * (degree_ + 1);
    double num = 0, den = 0;
    for (int j = 0; j <= degree_; ++j) {
        double dx = x - xref_[j];
        if (dx == 0.0) return f[j];
        double w = bary_[j] / dx;
        num += w * f[j];
        den += w;
    }
    return num / den;
}

namespace {
double to_ref(const std::vector<double>& breaks, int e, double t) {
    double a = breaks[e], b = breaks[e + 1];
    return (2 * t - a - b) / (b - a);
}
}  // namespace

double HMTable::q(double t) const {
    int e = element_of(t);
    return interp(q_, e, to_ref(breaks_, e, t));
}

double HMTable::qp(double t) const {
    int e = element_of(t);
    return interp(qp_, e, to_ref(breaks_, e, t));
}

double HMTable::qpp_interp(double t) const {
    int e = element_of(t);
    return interp(qpp_, e, to_ref(breaks_, e, t));
}

double HMTable::residual(double t) const {
    double v = q(t);
    return std::fabs(qpp_interp(t) - t * v - 2 * v * v * v);
}

double HMTable::tail_integral(const std::vector<std::vector<double>>& coeffs, const std::vector<double>& cum,
                              double t) const {
    int e = element_of(t);
    double half = 0.5 * (breaks_[e + 1] - breaks_[e]);
    double x = to_ref(breaks_, e, t);
    const auto& C = coeffs[e];
    return cum[e + 1] + half * (cheb_sum(C, 1.0) - cheb_sum(C, x));
}

double HMTable::int_q(double t) const { return tail_integral(iq_, cum_q_, t); }

double HMTable::int_shifted_q2(double t) const { return tail_integral(iu_, cum_u_, t); }

HMTable build_hm(double t_min, double t_max) {
    if (!(t_min <= -10.0) || !(t_max >= 8.0) || t_max > 100.0 || t_min < -60.0)
        throw std::invalid_argument("build_hm: need t_min <= -10 and t_max >= 8");
    HMTable tab;
    const int N = kDegree;
    const int E = static_cast<int>(std::ceil((t_max - t_min) / kElementWidth - 1e-9));
    tab.degree_ = N;
    tab.breaks_.resize(E + 1);
    for (int e = 0; e <= E; ++e) tab.breaks_[e] = t_min + (t_max - t_min) * e / E;
    tab.xref_.resize(N + 1);
    tab.bary_.resize(N + 1);
    for (int j = 0; j <= N; ++j) {
        tab.xref_[j] = -std::cos(std::numbers::pi * j / N);
        tab.bary_[j] = ((j % 2) ? -1.0 : 1.0) * ((j == 0 || j == N) ? 0.5 : 1.0);
    }
    const Eigen::MatrixXd D = diff_matrix(tab.xref_, tab.bary_);
    const Eigen::MatrixXd D2 = D * D;
    const double half = 0.5 * (t_max - t_min) / E;

    const int M = E * N + 1;
    auto gidx = [N](int e, int i) { return e * N + i; };
    auto node_t = [&](int e, int i) { return tab.breaks_[e] + half * (tab.xref_[i] + 1); };

    // Initial guess: backward RK4 from the Airy regime, the asymptote further left.
    Eigen::VectorXd q(M);
    {
        const double t0 = 6.0, t_join = -5.0, step = 1e-3;
        std::vector<double> ts, qs;
        AiryPair a0 = airy(t0);
        double y = a0.ai, yp = a0.aip, t = t0;
        auto rhs = [](double tt, double yy) { return tt * yy + 2 * yy * yy * yy; };
        ts.push_back(t);
        qs.push_back(y);
        while (t > t_join) {
            double h = -step;
            double k1 = yp, l1 = rhs(t, y);
            double k2 = yp + 0.5 * h * l1, l2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
            double k3 = yp + 0.5 * h * l2, l3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
            double k4 = yp + h * l3, l4 = rhs(t + h, y + h * k3);
            y += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6;
            yp += h * (l1 + 2 * l2 + 2 * l3 + l4) / 6;
            t += h;
            ts.push_back(t);
            qs.push_back(y);
        }
        for (int e = 0; e < E; ++e)
            for (int i = 0; i <= N; ++i) {
                double tt = node_t(e, i);
                double v;
                if (tt >= t0) {
                    v = airy(tt).ai;
                } else if (tt <= t_join) {
                    v = left_asymptote(tt);
                } else {
                    std::size_t k = std::min(ts.size() - 1, static_cast<std::size_t>((t0 - tt) / step));
                    v = qs[k];
                }
                q(gidx(e, i)) = v;
            }
    }

    const double qL = left_asymptote(t_min);
    const double qR = airy(t_max).ai;
    Eigen::MatrixXd J(M, M);
    Eigen::VectorXd R(M);
    bool converged = false;
    for (int iter = 0; iter < 40 && !converged; ++iter) {
        J.setZero();
        int row = 0;
        R(row) = q(0) - qL;
        J(row, 0) = 1.0;
        ++row;
        for (int e = 0; e < E; ++e) {
            for (int i = 1; i < N; ++i, ++row) {
                double acc = 0;
                for (int j = 0; j <= N; ++j) {
                    double c = D2(i, j) / (half * half);
                    acc += c * q(gidx(e, j));
                    J(row, gidx(e, j)) += c;
                }
                double v = q(gidx(e, i)), tt = node_t(e, i);
                R(row) = acc - tt * v - 2 * v * v * v;
                J(row, gidx(e, i)) -= tt + 6 * v * v;
            }
            if (e + 1 < E) {
                double acc = 0;
                for (int j = 0; j <= N; ++j) {
                    acc += D(N, j) / half * q(gidx(e, j)) - D(0, j) / half * q(gidx(e + 1, j));
                    J(row, gidx(e, j)) += D(N, j) / half;
                    J(row, gidx(e + 1, j)) -= D(0, j) / half;
                }
                R(row) = acc;
                ++row;
            }
        }
        R(row) = q(M - 1) - qR;
        J(row, M - 1) = 1.0;
        Eigen::VectorXd dq = J.partialPivLu().solve(R);
        q -= dq;
        if (!q.allFinite()) break;
        converged = dq.lpNorm<Eigen::Infinity>() < 1e-12 * std::max(1.0, q.lpNorm<Eigen::Infinity>());
    }
    if (!converged) throw std::runtime_error("build_hm: Newton iteration did not converge");

    const std::size_t per = static_cast<std::size_t>(N + 1);
    tab.q_.resize(E * per);
    tab.qp_.resize(E * per);
    tab.qpp_.resize(E * per);
    std::vector<double> u(per), qe(per);
    tab.iq_.resize(E);
    tab.iu_.resize(E);
    std::vector<double> full_q(E), full_u(E);
    for (int e = 0; e < E; ++e) {
        Eigen::VectorXd v(N + 1);
        for (int i = 0; i <= N; ++i) v(i) = q(gidx(e, i));
        Eigen::VectorXd d1 = D * v / half;
        Eigen::VectorXd d2 = D * d1 / half;
        for (int i = 0; i <= N; ++i) {
            tab.q_[e * per + i] = v(i);
            tab.qp_[e * per + i] = d1(i);
            tab.qpp_[e * per + i] = d2(i);
            double tt = node_t(e, i);
            qe[i] = v(i);
            // int_t^inf q^2 = q'^2 - t q^2 - q^4 along the Hastings-McLeod solution
            u[i] = d1(i) * d1(i) - tt * v(i) * v(i) - std::pow(v(i), 4);
        }
        tab.iq_[e] = antiderivative_coeffs(qe.data(), N);
        tab.iu_[e] = antiderivative_coeffs(u.data(), N);
        full_q[e] = half * (cheb_sum(tab.iq_[e], 1.0) - cheb_sum(tab.iq_[e], -1.0));
        full_u[e] = half * (cheb_sum(tab.iu_[e], 1.0) - cheb_sum(tab.iu_[e], -1.0));
    }
    tab.cum_q_.assign(E + 1, 0.0);
    tab.cum_u_.assign(E + 1, 0.0);
    tab.cum_q_[E] = tail_int_q(t_max);
    tab.cum_u_[E] = tail_int_u(t_max);
    for (int e = E - 1; e >= 0; --e) {
        tab.cum_q_[e] = tab.cum_q_[e + 1] + full_q[e];
        tab.cum_u_[e] = tab.cum_u_[e + 1] + full_u[e];
    }

    double worst = 0;
    const int checks = 40 * E;
    for (int k = 0; k <= checks; ++k) worst = std::max(worst, tab.residual(t_min + (t_max - t_min) * k / checks));
    tab.accuracy_ = worst;
    return tab;
}

const HMTable& default_hm() {
    static const HMTable table = build_hm();
    return table;
}

// ---------------------------------------------------------------- log-derivatives

namespace {

struct LogDerivs {
    std::vector<RatPoly> poly[3];  // Two, Plus, Minus
    std::vector<CompiledPoly> compiled[3];
};

const LogDerivs& log_derivs() {
    static const LogDerivs table = [] {
        LogDerivs d;
        const RatPoly t = RatPoly::variable("t"), q = RatPoly::variable("q"), qp = RatPoly::variable("qp");
        const RatPoly l2 = pow(qp, 2) - t * pow(q, 2) - pow(q, 4);
        const RatPoly half(BigRational(1, 2));
        const RatPoly first[3] = {l2, half * l2 + half * q, half * l2 - half * q};
        for (int b = 0; b < 3; ++b) {
            d.poly[b].push_back(RatPoly(1L));
            for (int k = 0; k < kMaxLogDerivOrder; ++k)
                d.poly[b].push_back(painleve_diff(d.poly[b][k]) + first[b] * d.poly[b][k]);
            for (const auto& p : d.poly[b]) d.compiled[b].emplace_back(p, std::vector<std::string>{"t", "q", "qp"});
        }
        return d;
    }();
    return table;
}

int slot(TWLabel beta) {
    switch (beta) {
        case TWLabel::Two: return 0;
        case TWLabel::Plus:
        case TWLabel::One: return 1;
        case TWLabel::Minus: return 2;
        case TWLabel::Four: break;
    }
    throw std::invalid_argument("F_4 is a sum; use the F_+ and F_- log-derivatives");
}

void check_order(int k) {
    if (k < 0 || k > kMaxLogDerivOrder) throw std::out_of_range("log-derivative order outside 0..8");
}

}  // namespace

RatPoly tw_logderiv(TWLabel beta, int k) {
    check_order(k);
    return log_derivs().poly[slot(beta)][k];
}

std::vector<double> F_derivs(TWLabel beta, int kmax, double t, const HMTable& hm) {
    check_order(kmax);
    const double iu = hm.int_shifted_q2(t), iq = hm.int_q(t);
    const double x[3] = {t, hm.q(t), hm.qp(t)};
    const auto& ld = log_derivs();
    auto series = [&](int b, double F) {
        std::vector<double> out(kmax + 1);
        for (int k = 0; k <= kmax; ++k) out[k] = F * ld.compiled[b][k](x);
        return out;
    };
    const double Fp = std::exp(-0.5 * iu - 0.5 * iq), Fm = std::exp(-0.5 * iu + 0.5 * iq);
    switch (beta) {
        case TWLabel::Two: return series(0, std::exp(-iu));
        case TWLabel::Plus:
        case TWLabel::One: return series(1, Fp);
        case TWLabel::Minus: return series(2, Fm);
        case TWLabel::Four: {
            auto a = series(1, Fp), b = series(2, Fm);
            for (int k = 0; k <= kmax; ++k) a[k] = 0.5 * (a[k] + b[k]);
            return a;
        }
    }
    throw std::invalid_argument("unknown distribution label");
}

double F_eval(TWLabel beta, int k, double t, const HMTable& hm) {
    check_order(k);
    return F_derivs(beta, k, t, hm)[k];
}

}  // namespace softedge
