#pragma once

// Soft-edge scaling parameters, the finite-size correction terms E_{beta,j}
// in their multilinear form sum_k p_jk(t) F^{(k)}(t), histogram-adjusted
// variants, and the turning-point machinery of the wave-function expansions.

#include "softedge/painleve.hpp"
#include "softedge/polyalg.hpp"
#include "softedge/special.hpp"

#include <array>
#include <optional>
#include <vector>

namespace softedge {

enum class EnsembleKind { Gaussian, Laguerre };

/// Maps beta in {1, 2, 4} to the Tracy-Widom label; anything else raises.
TWLabel tw_label(int beta);

struct ScalingParams {
    EnsembleKind kind = EnsembleKind::Gaussian;
    int beta = 2;
    double mu = 0.0;
    double sigma = 0.0;
    double h = 0.0;
    double tau = 0.0;  // 0 for Gaussian
    double n_prime = 0.0;
    std::optional<double> p_prime;
    BigRational gamma;  // 1/2 for beta = 1, else 1
};

/// n' = n - 1/2, n, 2n + 1/2 for beta = 1, 2, 4 (same for p').
/// Throws std::invalid_argument for n <= 0, a missing or non-positive p, or a bad beta.
ScalingParams make_scaling(EnsembleKind kind, int beta, double n, std::optional<double> p = {});

/// The n_+ = n + 1/2 parameters of the wave-function expansions.
ScalingParams wave_scaling(EnsembleKind kind, double n, std::optional<double> p = {});

/// E_{beta,j} = sum_{k=1}^{2j} coeffs[k-1](t, tau) F_beta^{(k)}(t).
struct ExpansionTerm {
    int beta = 2;
    int j = 1;
    EnsembleKind kind = EnsembleKind::Gaussian;
    std::vector<RatPoly> coeffs;

    /// F holds F^{(0)}, ..., F^{(2j + deriv)} at t.
    double eval(std::span<const double> F, double t, double tau, int deriv = 0) const;
    /// Exact t-derivative, one more slot.
    ExpansionTerm derivative() const;
};

/// The displayed terms, j = 1..3. Throws std::invalid_argument otherwise.
const ExpansionTerm& expansion_term(int beta, int j, EnsembleKind kind);

/// F_beta(t) + sum_{j<=m} E_{beta,j}(t) h^j, or its t-derivative for deriv = 1.
double eval_expansion(const ScalingParams& sp, int m, double t, int deriv = 0,
                      const HMTable& hm = default_hm());
double eval_expansion(EnsembleKind kind, int beta, double n, std::optional<double> p, int m, double t,
                      int deriv = 0, const HMTable& hm = default_hm());

/// Same sum with caller-supplied terms (e.g. histogram-adjusted ones).
double eval_terms(const ScalingParams& sp, std::span<const ExpansionTerm> terms, int m, double t, int deriv,
                  const HMTable& hm = default_hm());

/// E~_1 = E_1, E~_2 = E_2 + eta^2/24 F'', E~_3 = E_3 + eta^2/24 E_1''.
/// The bin-averaged density over bins of width eta*h is F' + sum E~_j' h^j + O(h^4).
std::array<ExpansionTerm, 3> histogram_adjust(const std::array<ExpansionTerm, 3>& terms, const BigRational& eta);
std::array<ExpansionTerm, 3> expansion_terms(int beta, EnsembleKind kind);

// Turning-point recursions. Polynomials are in t; a symbolic Laguerre
// parameter uses the indeterminates a2 = a^2 and ia2 = a^{-2}.

struct PQCase {
    enum class Kind { Hermite, Laguerre };
    Kind kind = Kind::Hermite;
    std::optional<BigRational> a2;  // unset for symbolic Laguerre

    static PQCase hermite() { return {Kind::Hermite, std::nullopt}; }
    static PQCase laguerre(const BigRational& a2) { return {Kind::Laguerre, a2}; }
    static PQCase laguerre_symbolic() { return {Kind::Laguerre, std::nullopt}; }
    bool symbolic() const { return kind == Kind::Laguerre && !a2; }
};

struct PQEntry {
    RatPoly P;
    RatPoly Q;
    RatPoly lambda;  // constant, or Laurent in a2 when symbolic; zero for even k
};

struct PQTable {
    PQCase pq_case;
    std::vector<PQEntry> entries;  // entries[k-1]
    const PQEntry& operator[](int k) const { return entries.at(static_cast<std::size_t>(k - 1)); }
    int size() const { return static_cast<int>(entries.size()); }
};

/// Throws std::invalid_argument for K outside 1..6 or a non-positive a^2, and
/// std::logic_error if a P_k of admissible degree does not exist.
PQTable pq_recursion(const PQCase& c, int K);

/// S^2 P_k' - 3k S S' P_k - Q_k with a2 * ia2 reduced; zero for a valid entry.
RatPoly pq_residual(const PQCase& c, int k, const PQEntry& e);

/// Admissible degree of P_k: 2k resp. 4k for even k over 2, 3k for odd k.
unsigned pq_degree_bound(const PQCase& c, int k);

/// lambda_{2k-1} in closed form, k = 1..3.
RatPoly lambda_closed(const PQCase& c, int k);

/// The displayed P_1, P_2 (Hermite or symbolic Laguerre).
std::array<RatPoly, 2> displayed_P12(PQCase::Kind kind);

/// Cancels a2^i ia2^j against each other.
RatPoly laurent_normalize(const RatPoly& p);

struct WaveExpansion {
    PQCase::Kind kind = PQCase::Kind::Hermite;
    int m = 0;
    std::vector<RatPoly> p;  // in s (and tau), k = 0..m
    std::vector<RatPoly> q;
};

/// Throws std::invalid_argument for m outside 0..3.
WaveExpansion wave_expansion(PQCase::Kind kind, int m);

/// Ai(s) sum p_k h^k + Ai'(s) sum q_k h^k with the n_+ scaling; approximates
/// phi_n(mu + sigma s) / (2^{1/2} h^{1/8}) resp. phi_{n,p}(mu + sigma s) / (tau h)^{1/2}.
/// Requires n >= 5.
double wave_expansion_eval(PQCase::Kind kind, double n, std::optional<double> p, double s, int m);

/// The normalised wave function the expansion approximates.
double wave_scaled_exact(PQCase::Kind kind, int n, std::optional<int> p, double s);

/// u^{2/3} zeta at x = mu + sigma s as a series in h through h^3, coefficients in s
/// (and tau for Laguerre), obtained from the local expansion of zeta at the turning point.
TruncatedSeries zeta_series(PQCase::Kind kind);

}  // namespace softedge
