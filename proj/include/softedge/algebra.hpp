#pragma once

// Exact derivation of the beta = 1, 4 correction terms from the beta = 2 ones:
// the local series of the interrelated scalings, the first-order relation,
// the (q, q')-monomial linear system, and the closed m = 2, 3 transformations.

#include "softedge/expansion.hpp"
#include "softedge/polyalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace softedge {

/// t_nu, h_nu and tau_nu as series in h^{1/2}; delta_1 only for Laguerre.
struct SeriesParams {
    EnsembleKind kind = EnsembleKind::Gaussian;
    RatPoly alpha1, alpha2, beta1, gamma1;
    std::optional<RatPoly> delta1;
};

SeriesParams series_params(EnsembleKind kind);

/// t_nu - t through hr^order, with nu = 0 taking the upper signs.
TruncatedSeries shift_series(const SeriesParams& sp, int nu, int order);

/// E_2 / F_2 from the product of the F_+-, F_- expansions through order h, in hr = h^{1/2}.
/// The first-order unknowns enter as ep = E_{+,1}/F_+ and em = E_{-,1}/F_-.
struct RelationJ1 {
    TruncatedSeries series{"hr", 2};
    /// (F_+ F_-'' - 2 F_+' F_-' + F_+'' F_-) / F_2 in Q[t][q, q'].
    RatPoly bracket;
};

/// Throws std::logic_error if the odd hr-coefficient does not cancel.
RelationJ1 build_relation_j1(EnsembleKind kind);

/// Overdetermined system for p_{+,m mu}, p_{-,m mu}; only m = 1 is assembled.
struct RelationSystem {
    int m = 1;
    ExactLinearSystem system;
    /// Row labels: (power of q, power of q').
    std::vector<std::pair<unsigned, unsigned>> monomials;
};

/// The 13 x 4 system with rows in the order q, q^2, q^3, q^4, q^5, q^6, q^8,
/// q', q'^2, q'^4, q q'^2, q^2 q'^2, q^4 q'^2, each divided by its content.
/// With symbolic_rhs the right side keeps p211, p212 as indeterminates.
RelationSystem assemble_system_m1(EnsembleKind kind, bool symbolic_rhs = false);

/// {p_{+,11}, p_{+,12}} after checking p_{+,1k} = p_{-,1k}.
std::vector<RatPoly> assemble_and_solve(EnsembleKind kind);

/// {p_{+,m1}, ..., p_{+,m,2m}} by the closed transformations, m = 2, 3.
std::vector<RatPoly> transform_m23(int m, EnsembleKind kind);

/// E_{beta,j} for beta = 1, 4 from the derived coefficients, j = 1..3.
ExpansionTerm derive_beta14(int j, EnsembleKind kind);

}  // namespace softedge
