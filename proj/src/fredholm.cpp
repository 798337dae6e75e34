#include "softedge/fredholm.hpp"

#include "softedge/painleve.hpp"
#include "softedge/special.hpp"

#include <cmath>
#include <stdexcept>

namespace softedge {

namespace {

constexpr double kDiagFloor = 1e-17;

RatPoly Q(long a, long b = 1) {
    BigRational r(a, b);
    r.canonicalize();
    return RatPoly(r);
}

}  // namespace

QuadGrid make_grid(double t, double T, int m) {
    if (!(T > t)) throw std::invalid_argument("make_grid: need T > t");
    QuadRule r = gauss_legendre(m, t, T);
    return {t, T, std::move(r.nodes), std::move(r.weights)};
}

// ---------------------------------------------------------------- kernels

KernelHandle KernelHandle::airy() { return KernelHandle{}; }

KernelHandle KernelHandle::hermite(int n, double mu, double sigma) {
    if (n < 1) throw std::invalid_argument("Hermite kernel needs n >= 1");
    if (!(sigma > 0)) throw std::invalid_argument("kernel scale must be positive");
    KernelHandle k;
    k.kind_ = Kind::HermiteN;
    k.n_ = n;
    k.mu_ = mu;
    k.sigma_ = sigma;
    k.c_ = std::sqrt(n / 2.0);
    return k;
}

KernelHandle KernelHandle::laguerre(int n, int p, double mu, double sigma) {
    if (n < 1 || p < 1) throw std::invalid_argument("Laguerre kernel needs n, p >= 1");
    if (!(sigma > 0)) throw std::invalid_argument("kernel scale must be positive");
    KernelHandle k;
    k.kind_ = Kind::LaguerreNP;
    k.n_ = n;
    k.p_ = p;
    k.mu_ = mu;
    k.sigma_ = sigma;
    k.c_ = std::sqrt(double(n) * p);
    return k;
}

KernelHandle KernelHandle::correction(CorrectionEnsemble e, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("only K_1 and K_2 are available");
    KernelHandle k;
    k.kind_ = Kind::Correction;
    k.j_ = j;
    k.ens_ = e;
    return k;
}

KernelHandle::Point KernelHandle::point(double x) const {
    switch (kind_) {
        case Kind::Airy: {
            AiryPair a = softedge::airy(x);
            return {a.ai, a.aip, a.aip, x * a.ai};
        }
        case Kind::HermiteN: {
            WaveTriple w = wave_triple(WaveFunctionSpec::hermite(n_), mu_ + sigma_ * x);
            return {w.phi, w.phi_prev, sigma_ * w.dphi, sigma_ * w.dphi_prev};
        }
        case Kind::LaguerreNP: {
            const double X = mu_ + sigma_ * x;
            if (!(X > 0)) return {0, 0, 0, 0};
            WaveTriple w = wave_triple(WaveFunctionSpec::laguerre_np(n_, p_), X);
            return {w.phi, w.phi_prev, sigma_ * w.dphi, sigma_ * w.dphi_prev};
        }
        case Kind::Correction: break;
    }
    throw std::logic_error("correction kernels are not of integrable form");
}

double KernelHandle::operator()(double x, double y) const {
    if (kind_ == Kind::Correction) return kernel_correction(ens_, j_, x, y);
    Point a = point(x);
    if (x == y) return c_ * (a.df * a.g - a.dg * a.f);
    Point b = point(y);
    return c_ * (a.f * b.g - a.g * b.f) / (x - y);
}

Eigen::MatrixXd KernelHandle::matrix(std::span<const double> x) const {
    const auto m = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd K(m, m);
    if (kind_ == Kind::Correction) {
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j <= i; ++j) K(i, j) = K(j, i) = (*this)(x[i], x[j]);
        return K;
    }
    std::vector<Point> pts(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) pts[i] = point(x[i]);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Point& a = pts[i];
        K(i, i) = c_ * (a.df * a.g - a.dg * a.f);
        for (Eigen::Index j = 0; j < i; ++j) {
            const Point& b = pts[j];
            K(i, j) = K(j, i) = c_ * (a.f * b.g - a.g * b.f) / (x[i] - x[j]);
        }
    }
    return K;
}

Eigen::VectorXd KernelHandle::column(std::span<const double> x, double y) const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = (*this)(x[i], y);
    return v;
}

double KernelHandle::support_left() const {
    if (kind_ == Kind::LaguerreNP) return -mu_ / sigma_;
    return -INFINITY;
}

double KernelHandle::truncation(double t) const {
    double edge = 0.0;
    if (kind_ == Kind::HermiteN) edge = (std::sqrt(2.0 * n_) - mu_) / sigma_;
    if (kind_ == Kind::LaguerreNP) {
        const double r = std::sqrt(double(n_)) + std::sqrt(double(p_));
        edge = (r * r - mu_) / sigma_;
    }
    double T = std::max(t, edge) + 1.0;
    for (int it = 0; it < 400; ++it) {
        if (std::fabs((*this)(T, T)) < kDiagFloor) return T;
        T += 0.5;
    }
    throw std::runtime_error("kernel diagonal does not decay");
}

// ---------------------------------------------------------------- determinants

namespace {

struct Factored {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    bool spd = false;
    double det = 0;

    explicit Factored(const Eigen::MatrixXd& M) {
        llt.compute(M);
        if (llt.info() == Eigen::Success) {
            spd = true;
            double d = 1;
            for (Eigen::Index i = 0; i < M.rows(); ++i) d *= llt.matrixL()(i, i);
            det = d * d;
        } else {
            lu.compute(M);
            det = lu.determinant();
        }
    }
    template <class B>
    Eigen::MatrixXd solve(const B& b) const {
        return spd ? Eigen::MatrixXd(llt.solve(b)) : Eigen::MatrixXd(lu.solve(b));
    }
};

Eigen::VectorXd sqrt_weights(const QuadGrid& g) {
    Eigen::VectorXd s(g.m());
    for (int i = 0; i < g.m(); ++i) s[i] = std::sqrt(g.weights[i]);
    return s;
}

}  // namespace

DetResult det_on_grid(const KernelHandle& K, const QuadGrid& grid) {
    const Eigen::VectorXd s = sqrt_weights(grid);
    Eigen::MatrixXd M = -(s.asDiagonal() * K.matrix(grid.nodes) * s.asDiagonal());
    M.diagonal().array() += 1.0;
    Factored f(M);
    Eigen::VectorXd k = s.asDiagonal() * K.column(grid.nodes, grid.t);
    double r = K(grid.t, grid.t) + k.dot(f.solve(k).col(0));
    return {f.det, r, 0.0, grid.m()};
}

DetResult fredholm_det(const KernelHandle& K, double t, double tol, int m0, int max_m) {
    const double a = std::max(t, K.support_left());
    const double T = K.truncation(a);
    if (t < K.support_left()) t = a;
    DetResult prev = det_on_grid(K, make_grid(t, T, m0));
    for (int m = 2 * m0; m <= max_m; m *= 2) {
        DetResult cur = det_on_grid(K, make_grid(t, T, m));
        cur.certificate = std::fabs(cur.value - prev.value);
        if (cur.certificate < tol) return cur;
        prev = cur;
    }
    throw std::runtime_error("Fredholm determinant: grid doubling did not converge");
}

double det_airy(double t) {
    if (!(t >= -15.0)) throw std::domain_error("det_airy: t must be >= -15");
    return fredholm_det(KernelHandle::airy(), t).value;
}

double det_finite(const KernelHandle& K, double x) {
    if (K.kind() != KernelHandle::Kind::HermiteN && K.kind() != KernelHandle::Kind::LaguerreNP)
        throw std::invalid_argument("det_finite: needs a Hermite or Laguerre kernel");
    return fredholm_det(K, x).value;
}

// ---------------------------------------------------------------- resolvent

std::pair<RatPoly, RatPoly> airy_derivative_reduction(int j) {
    if (j < 0) throw std::invalid_argument("negative derivative order");
    const RatPoly x = RatPoly::variable("x");
    RatPoly P(1L), Qp(0L);
    for (int k = 0; k < j; ++k) {
        RatPoly nP = P.derivative("x") + x * Qp;
        RatPoly nQ = P + Qp.derivative("x");
        P = std::move(nP);
        Qp = std::move(nQ);
    }
    return {P, Qp};
}

namespace {

Eigen::Matrix<double, 6, 6> resolvent_on_grid(const QuadGrid& g) {
    static const auto reductions = [] {
        std::array<std::pair<CompiledPoly, CompiledPoly>, 6> r;
        for (int j = 0; j < 6; ++j) {
            auto [P, Qp] = airy_derivative_reduction(j);
            r[j] = {CompiledPoly(P, {"x"}), CompiledPoly(Qp, {"x"})};
        }
        return r;
    }();
    const Eigen::VectorXd s = sqrt_weights(g);
    Eigen::MatrixXd M = -(s.asDiagonal() * KernelHandle::airy().matrix(g.nodes) * s.asDiagonal());
    M.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) throw std::runtime_error("resolvent: discretised operator not positive definite");
    Eigen::MatrixXd a(g.m(), 6);
    for (int i = 0; i < g.m(); ++i) {
        const double x = g.nodes[i];
        const AiryPair v = airy(x);
        for (int j = 0; j < 6; ++j) {
            const double xs[1] = {x};
            a(i, j) = s[i] * (reductions[j].first(xs) * v.ai + reductions[j].second(xs) * v.aip);
        }
    }
    Eigen::MatrixXd b = llt.matrixL().solve(a);
    Eigen::Matrix<double, 6, 6> u;
    for (int j = 0; j < 6; ++j)
        for (int k = j; k < 6; ++k) u(j, k) = u(k, j) = b.col(j).dot(b.col(k));
    return u;
}

}  // namespace

ResolventTable resolvent_table(double t, double tol) {
    if (!(t >= -15.0)) throw std::domain_error("resolvent_table: t must be >= -15");
    const double T = KernelHandle::airy().truncation(t);
    auto prev = resolvent_on_grid(make_grid(t, T, 32));
    for (int m = 64; m <= 1024; m *= 2) {
        auto cur = resolvent_on_grid(make_grid(t, T, m));
        const double scale = std::max(1.0, cur.cwiseAbs().maxCoeff());
        const double diff = (cur - prev).cwiseAbs().maxCoeff();
        if (diff < tol * scale) return {t, cur, diff};
        prev = cur;
    }
    throw std::runtime_error("resolvent_table: grid doubling did not converge");
}

double u_jk(double t, int j, int k) {
    if (j < 0 || j > 5 || k < 0 || k > 5) throw std::out_of_range("u_jk: indices must lie in 0..5");
    return resolvent_table(t)(j, k);
}

// ---------------------------------------------------------------- finite-rank corrections

TildeCoefficients TildeCoefficients::gue() { return lue(0.0); }

TildeCoefficients TildeCoefficients::lue(double tau) {
    const double t = tau, t2 = t * t, t3 = t2 * t;
    TildeCoefficients a;
    a.a01 = -(t - 3) / 10;
    a.a00 = -3 * (4 * t2 + 26 * t - 39) / 175;
    a.a03 = (11 * t2 + 54 * t - 81) / 280;
    a.a12 = -(51 * t2 - 106 * t + 159) / 1400;
    a.a02 = (44 * t3 - 346 * t2 + 3713 * t - 3713) / 2250;
    a.a05 = -(13 * t3 - 77 * t2 + 1171 * t - 1171) / 3600;
    a.a11 = -(466 * t3 + 406 * t2 - 3743 * t + 3743) / 7875;
    a.a14 = (583 * t3 + 553 * t2 - 3359 * t + 3359) / 42000;
    a.a23 = -(13 * t3 - 77 * t2 + 271 * t - 271) / 1800;
    return a;
}

CorrectionTerms finite_rank_correction(const TildeCoefficients& a, const ResolventTable& u) {
    CorrectionTerms r;
    r.numeric[0] = -2 * a.a01 * u(0, 1);
    r.numeric[1] = -a.a00 * u(0, 0) - 2 * a.a03 * u(0, 3) - 2 * a.a12 * u(1, 2) -
                   a.a01 * a.a01 * (u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0));
    r.numeric[2] = -2 * a.a02 * u(0, 2) - 2 * a.a05 * u(0, 5) - a.a11 * u(1, 1) - 2 * a.a14 * u(1, 4) -
                   2 * a.a23 * u(2, 3) - 2 * a.a01 * a.a03 * (u(0, 0) * u(1, 3) - u(0, 3) * u(1, 0)) -
                   2 * a.a01 * a.a12 * (u(1, 1) * u(0, 2) - u(1, 2) * u(0, 1));

    const double t = u.t;
    const auto F = F_derivs(TWLabel::Two, 6, t);
    const double a01s = a.a01 * a.a01;
    r.closed[0] = -a.a01 * F[2];
    r.closed[1] = -(6 * a.a00 + 7 * a.a03 - 3 * a.a12 + a01s) / 6 * F[1] - (2 * a.a03 - a01s) / 3 * t * F[2] -
                  (a.a03 + 3 * a.a12 + a01s) / 12 * F[4];
    const double m03 = a.a01 * a.a03, m12 = a.a01 * a.a12;
    r.closed[2] =
        -(30 * a.a02 + 101 * a.a05 - 15 * a.a11 - 65 * a.a14 + 20 * a.a23 + 9 * m03 + 5 * m12) / 45 * t * F[1] -
        (23 * a.a05 - 5 * a.a14 + 5 * a.a23 - 18 * m03 - 10 * m12) / 45 * t * t * F[2] -
        (20 * a.a02 + 59 * a.a05 + 20 * a.a11 + 55 * a.a14 - 10 * a.a23 - 9 * m03 + 5 * m12) / 60 * F[3] -
        (a.a05 + 2 * a.a14 + a.a23 + m12) / 9 * t * F[4] -
        (a.a05 + 5 * a.a14 + 10 * a.a23 + 9 * m03 - 5 * m12) / 360 * F[6];
    for (double& c : r.closed) c /= F[0];
    return r;
}

// ---------------------------------------------------------------- displayed kernel corrections

std::array<RatPoly, 4> kernel_correction_poly(bool laguerre, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("kernel_correction: only j = 1, 2 are displayed");
    const RatPoly x = RatPoly::variable("x"), y = RatPoly::variable("y");
    const RatPoly x2 = x * x, y2 = y * y, xy = x * y;
    if (!laguerre) {
        if (j == 1)
            return {Q(-1, 5) * (x2 + xy + y2), Q(3, 10), Q(3, 10), Q(1, 5) * (x + y)};
        const RatPoly c = Q(1, 1400);
        return {c * Q(6) * (Q(20) * (x2 * x + y2 * y) + Q(6) * xy * (x + y) + Q(21)),
                c * (Q(28) * (x2 * x2 + x2 * xy - xy * xy - xy * y2 - y2 * y2) - Q(135) * x - Q(261) * y),
                -c * (Q(28) * (x2 * x2 + x2 * xy + xy * xy - xy * y2 - y2 * y2) + Q(261) * x + Q(135) * y),
                c * Q(4) * (Q(5) * (x2 + y2) - Q(16) * xy)};
    }
    const RatPoly tau = RatPoly::variable("tau");
    const RatPoly t2 = tau * tau;
    if (j == 1) {
        const RatPoly g = Q(1, 5) * (Q(2) * tau - Q(1));
        const RatPoly o = -Q(1, 10) * (tau - Q(3));
        return {g * (x2 + xy + y2), o, o, -g * (x + y)};
    }
    const RatPoly s = pow(Q(2) * tau - Q(1), 2) * Q(1, 50);
    const RatPoly ax = Q(1, 280) * (Q(13) * t2 - Q(10) * tau - Q(27));
    const RatPoly ay = Q(1, 1400) * (Q(51) * t2 + Q(34) * tau - Q(261));
    return {-(Q(1, 70) * (Q(20) * t2 - Q(3) * tau - Q(6)) * (x2 * x + y2 * y) +
              Q(1, 350) * (Q(114) * t2 - Q(64) * tau - Q(9)) * xy * (x + y) - Q(1, 100) * pow(tau - Q(3), 2)),
            s * (x2 * x2 + x2 * xy - xy * xy - xy * y2 - y2 * y2) + ax * x + ay * y,
            -(s * (x2 * x2 + x2 * xy + xy * xy - xy * y2 - y2 * y2) - ay * x - ax * y),
            Q(1, 70) * (Q(20) * t2 - Q(17) * tau + Q(1)) * (x2 + y2) + Q(1, 175) * (Q(43) * t2 - Q(18) * tau - Q(8)) * xy};
}

double kernel_correction(CorrectionEnsemble e, int j, double x, double y) {
    if (j != 1 && j != 2) throw std::invalid_argument("kernel_correction: only j = 1, 2 are displayed");
    static const auto compiled = [] {
        std::array<std::array<CompiledPoly, 4>, 4> c;
        for (int l = 0; l < 2; ++l)
            for (int jj = 1; jj <= 2; ++jj) {
                auto polys = kernel_correction_poly(l == 1, jj);
                for (int k = 0; k < 4; ++k) c[2 * l + jj - 1][k] = CompiledPoly(polys[k], {"x", "y", "tau"});
            }
        return c;
    }();
    const auto& c = compiled[2 * (e.laguerre ? 1 : 0) + j - 1];
    const double args[3] = {x, y, e.laguerre ? e.tau : 0.0};
    const AiryPair ax = airy(x), ay = airy(y);
    return c[0](args) * ax.ai * ay.ai + c[1](args) * ax.ai * ay.aip + c[2](args) * ax.aip * ay.ai +
           c[3](args) * ax.aip * ay.aip;
}

}  // namespace softedge
