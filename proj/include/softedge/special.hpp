#pragma once

// Real-argument special functions: Airy Ai/Ai', Hermite and Laguerre wave
// functions, Bernoulli values, and Gauss-Legendre rules.

#include "softedge/polyalg.hpp"

#include <stdexcept>
#include <vector>

namespace softedge {

struct AiryPair {
    double ai;
    double aip;
};

/// Ai(s), Ai'(s) for |s| <= 200.
/// Long-double Maclaurin series on [-8, 2.5]; modulus/phase asymptotics for
/// s < -8; the exponentially scaled K_{1/3}, K_{2/3} continued fraction for
/// s > 2.5. Values below the double range (s > ~104) flush to zero; use
/// airy_scaled there.
AiryPair airy(double s);

/// For s > 0 returns exp(2/3 s^{3/2}) * (Ai(s), Ai'(s)); equals airy(s) for s <= 0.
AiryPair airy_scaled(double s);

/// The Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y)) / (x - y), diagonal Ai'(x)^2 - x Ai(x)^2.
double airy_kernel(double x, double y, const AiryPair& ax, const AiryPair& ay);

struct WaveFunctionSpec {
    enum class Family { Hermite, Laguerre };
    Family family = Family::Hermite;
    int n = 0;
    double alpha = 0.0;

    static WaveFunctionSpec hermite(int n);
    static WaveFunctionSpec laguerre(int n, double alpha);
    /// phi_{n,p} = phi_n^{(p-n)}; integer pairs with p < n go through the
    /// exact identity phi_{n,p} = phi_{p,n}.
    static WaveFunctionSpec laguerre_np(int n, int p);
};

/// phi_n(x), phi_{n-1}(x) and both derivatives from one orthonormal recurrence sweep.
struct WaveTriple {
    double phi;
    double phi_prev;
    double dphi;
    double dphi_prev;
};

inline constexpr int kMaxWaveOrder = 100000;

double wave_eval(const WaveFunctionSpec& spec, double x);
WaveTriple wave_triple(const WaveFunctionSpec& spec, double x);

/// Exact Bernoulli number B_n.
BigRational bernoulli(int n);
/// Exact B_{2k}(1/2) for 2 <= 2k <= 40, 2k even.
BigRational bernoulli_half(int two_k);

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// m-point Gauss-Legendre rule on [a, b]; nodes ascending.
QuadRule gauss_legendre(int m, double a, double b);

}  // namespace softedge
