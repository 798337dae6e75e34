#pragma once

// Hastings-McLeod solution of Painleve II, q'' = t q + 2 q^3 with q ~ Ai at
// +infinity, and the Tracy-Widom distributions built from it.

#include "softedge/polyalg.hpp"

#include <vector>

namespace softedge {

/// Distribution labels. One is F_+, Four is (F_+ + F_-)/2.
enum class TWLabel { Two, Plus, Minus, One, Four };

/// Highest derivative order served by tw_logderiv and F_eval.
inline constexpr int kMaxLogDerivOrder = 8;

class HMTable {
public:
    double t_min() const { return breaks_.front(); }
    double t_max() const { return breaks_.back(); }

    double q(double t) const;
    double qp(double t) const;
    /// Second derivative of the interpolant itself (not of the ODE).
    double qpp_interp(double t) const;
    /// |q'' - t q - 2 q^3| with q'' from the interpolant.
    double residual(double t) const;

    /// Tail integrals over (t, infinity); the part beyond t_max uses q = Ai.
    double int_q(double t) const;
    /// int_t^inf (x - t) q(x)^2 dx, so that F_2 = exp(-int_shifted_q2(t)).
    double int_shifted_q2(double t) const;

    /// Max residual over a dense check grid, recorded at build time.
    double accuracy() const { return accuracy_; }

private:
    friend HMTable build_hm(double, double);

    std::vector<double> breaks_;
    int degree_ = 0;
    std::vector<double> xref_;    // reference nodes on [-1, 1], ascending
    std::vector<double> bary_;    // barycentric weights
    std::vector<double> q_, qp_, qpp_;   // nodal values, element-major, degree_+1 per element
    // Chebyshev coefficients of the antiderivatives, per element
    std::vector<std::vector<double>> iq_, iu_;
    std::vector<double> cum_q_, cum_u_;  // integral from element start to infinity
    double accuracy_ = 0.0;

    int element_of(double t) const;
    double interp(const std::vector<double>& v, int e, double x) const;
    double tail_integral(const std::vector<std::vector<double>>& coeffs, const std::vector<double>& cum,
                         double t) const;
};

/// Solves the boundary value problem on [t_min, t_max] by piecewise Chebyshev
/// collocation and Newton's method. Requires t_min <= -10, t_max >= 8.
HMTable build_hm(double t_min = -12.0, double t_max = 10.0);

/// Shared default table, built on first use.
const HMTable& default_hm();

/// F^{(k)}/F as an element of Q[t][q,q'] (variables t, q, qp).
/// One aliases Plus; Four has no single log-derivative and raises.
RatPoly tw_logderiv(TWLabel beta, int k);

/// F_beta^{(k)}(t).
double F_eval(TWLabel beta, int k, double t, const HMTable& hm = default_hm());

/// All derivatives F^{(0..kmax)}(t) in one pass.
std::vector<double> F_derivs(TWLabel beta, int kmax, double t, const HMTable& hm = default_hm());

}  // namespace softedge
