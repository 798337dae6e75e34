#pragma once

// Nystrom discretisation of det(I - K) on L^2(t, infinity) for the Airy kernel
// and the finite-n Hermite/Laguerre projection kernels, plus the resolvent
// inner products u_jk and the displayed kernel corrections K_1, K_2.

#include "softedge/polyalg.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <vector>

namespace softedge {

/// Gauss-Legendre nodes on (t, T). The kernel trace beyond T is negligible.
struct QuadGrid {
    double t = 0.0;
    double T = 0.0;
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // positive
    int m() const { return static_cast<int>(nodes.size()); }
};

QuadGrid make_grid(double t, double T, int m);

/// Which displayed correction: GUE, or LUE with its aspect parameter tau.
struct CorrectionEnsemble {
    bool laguerre = false;
    double tau = 0.0;
    static CorrectionEnsemble gue() { return {false, 0.0}; }
    static CorrectionEnsemble lue(double tau) { return {true, tau}; }
};

/// Symmetric real kernel on the scaled variable. For HermiteN and LaguerreNP
/// the handle evaluates sigma K_n(mu + sigma x, mu + sigma y); mu = 0 and
/// sigma = 1 give the unscaled kernel.
class KernelHandle {
public:
    enum class Kind { Airy, HermiteN, LaguerreNP, Correction };

    static KernelHandle airy();
    static KernelHandle hermite(int n, double mu = 0.0, double sigma = 1.0);
    static KernelHandle laguerre(int n, int p, double mu = 0.0, double sigma = 1.0);
    static KernelHandle correction(CorrectionEnsemble e, int j);

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    int p() const { return p_; }

    double operator()(double x, double y) const;
    /// K(x_i, x_j) over a node set.
    Eigen::MatrixXd matrix(std::span<const double> x) const;
    /// K(x_i, y) for fixed y.
    Eigen::VectorXd column(std::span<const double> x, double y) const;

    /// Left end of the kernel's support in the scaled variable.
    double support_left() const;
    /// Truncation point T > t where the diagonal has decayed below 1e-17.
    double truncation(double t) const;

private:
    // Integrable form c (f(x) g(y) - g(x) f(y)) / (x - y), derivatives in x.
    struct Point {
        double f, g, df, dg;
    };
    Point point(double x) const;

    Kind kind_ = Kind::Airy;
    int n_ = 0, p_ = 0, j_ = 0;
    double mu_ = 0.0, sigma_ = 1.0, c_ = 1.0;
    CorrectionEnsemble ens_;
};

struct DetResult {
    double value = 0.0;
    /// d/dt log det(I - K) on (t, inf), equal to the resolvent diagonal R(t, t).
    double dlog = 0.0;
    /// |det_m - det_2m| of the accepted doubling step.
    double certificate = 0.0;
    int m = 0;
};

/// det(I - K) on a fixed grid, with the resolvent diagonal at grid.t.
DetResult det_on_grid(const KernelHandle& K, const QuadGrid& grid);

/// Doubles m from m0 until two successive determinants differ by < tol.
/// Throws std::runtime_error when m would exceed max_m.
DetResult fredholm_det(const KernelHandle& K, double t, double tol = 1e-12, int m0 = 32, int max_m = 1024);

/// F_2(t) from the Airy kernel. Requires t >= -15.
double det_airy(double t);

/// E_2(n; x) for the unscaled Hermite kernel, or E_2(n, p; x) for Laguerre.
double det_finite(const KernelHandle& K, double x);

/// Central-difference derivative with one Richardson step, h and h/2.
template <class F>
double richardson_derivative(F&& f, double x, double h) {
    auto cd = [&](double s) { return (f(x + s) - f(x - s)) / (2 * s); };
    return (4 * cd(0.5 * h) - cd(h)) / 3;
}

/// u_jk(t) = <(I - K_Ai)^{-1} Ai^{(j)}, Ai^{(k)}> on L^2(t, inf), 0 <= j, k <= 5.
struct ResolventTable {
    double t = 0.0;
    Eigen::Matrix<double, 6, 6> u;
    double certificate = 0.0;
    double operator()(int j, int k) const { return u(j, k); }
};

/// Requires t >= -15. Symmetric by construction (Cholesky solve, mirrored).
ResolventTable resolvent_table(double t, double tol = 1e-10);
double u_jk(double t, int j, int k);

/// Ai^{(j)} = P_j Ai + Q_j Ai' with P_j, Q_j in Q[x].
std::pair<RatPoly, RatPoly> airy_derivative_reduction(int j);

/// Coefficients of the rank-finite perturbation sum_{j<=k} a_jk (Ai^(j) (x) Ai^(k) + Ai^(k) (x) Ai^(j)),
/// diagonal terms counted once.
struct TildeCoefficients {
    double a00 = 0, a01 = 0, a02 = 0, a03 = 0, a05 = 0, a11 = 0, a12 = 0, a14 = 0, a23 = 0;
    static TildeCoefficients gue();
    static TildeCoefficients lue(double tau);
};

struct CorrectionTerms {
    std::array<double, 3> numeric{};  // d_1, d_2, d_3 from the u_jk
    std::array<double, 3> closed{};   // the same from Tracy-Widom derivatives
};

/// d_1, d_2, d_3 in det(I - K_Ai - h K~_1 - h^2 K~_2 - ...) = F_2 (1 + d_1 h + d_2 h^2 + d_3 h^3 + ...).
CorrectionTerms finite_rank_correction(const TildeCoefficients& a, const ResolventTable& u);

/// Polynomial coefficients {p00, p01, p10, p11} in x, y (and tau for LUE) of
/// K_j = p00 Ai Ai + p01 Ai(x) Ai'(y) + p10 Ai'(x) Ai(y) + p11 Ai' Ai'.
std::array<RatPoly, 4> kernel_correction_poly(bool laguerre, int j);

/// Displayed K_j(x, y) or K_j(x, y; tau). Only j = 1, 2 exist; others raise.
double kernel_correction(CorrectionEnsemble e, int j, double x, double y);

}  // namespace softedge
