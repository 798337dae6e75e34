#pragma once

// Monte-Carlo sampling of the largest eigenvalue of the Gaussian and Laguerre
// beta-ensembles through the Dumitriu-Edelman tridiagonal and bidiagonal
// models, with Sturm-count bisection, exceedance counts, histograms and
// empirical CDFs carrying binomial confidence intervals.
//
// Every draw i of a batch reads its own Philox4x32-10 stream keyed by the
// seed with counter (block, i), so a batch is bit-identical however the
// index range is split across workers.

#include "softedge/expansion.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace softedge {

inline constexpr const char* kCodeVersion = "1.0.0";

/// Philox4x32-10 block function (Salmon et al.).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

/// Sequential view of one Philox stream. Uniforms lie in the open interval (0, 1).
class PhiloxStream {
public:
    PhiloxStream(std::uint64_t seed, std::uint64_t stream);

    std::uint32_t next_u32();
    double uniform();
    /// Box-Muller; the second variate of each pair is cached.
    double normal();
    /// Marsaglia-Tsang; shapes below 1 use the U^{1/k} boost.
    double gamma(double shape);
    /// Chi-square with dof degrees of freedom (2 * Gamma(dof / 2)); zero for dof = 0.
    double chi_square(double dof);

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int pos_ = 4;
    std::optional<double> spare_;
};

/// Symmetric tridiagonal matrix stored as diagonal and squared off-diagonal.
struct Tridiagonal {
    std::vector<double> d;
    std::vector<double> e2;  // size d.size() - 1

    /// Number of eigenvalues strictly below x (LDL^T inertia).
    int count_below(double x) const;
    /// Gershgorin interval containing the spectrum.
    std::pair<double, double> bounds() const;
    /// k-th largest eigenvalue (k = 1 is the maximum) to absolute tolerance
    /// rel_tol times the Gershgorin diameter.
    double kth_largest(int k, double rel_tol = 1e-10) const;
};

struct EnsembleSpec {
    int beta = 2;
    EnsembleKind kind = EnsembleKind::Gaussian;
    int n = 1;
    int p = 0;  // Laguerre only

    /// Throws std::invalid_argument for beta outside {1, 2, 4}, n < 1, or a
    /// Laguerre p < 1. Integer p < n is the Wishart case and is accepted.
    void validate() const;
    /// Laguerre exponent beta (p - n + 1) / 2 - 1.
    double alpha() const;
    ScalingParams scaling() const;
    std::string label() const;
};

/// One draw of the model, eigenvalues already in the gamma_beta weight convention.
Tridiagonal draw_model(const EnsembleSpec& spec, PhiloxStream& rng);

/// Counts of "no eigenvalue above x" and "exactly one above x" per threshold.
struct ExceedanceCounts {
    std::vector<double> x;  // thresholds in the unscaled variable
    std::vector<std::uint64_t> zero, one;
    std::uint64_t N = 0;

    double e10(std::size_t i) const { return double(zero[i]) / double(N); }
    double e11(std::size_t i) const { return double(one[i]) / double(N); }
    double e_plus(std::size_t i) const { return e10(i); }
    double e_minus(std::size_t i) const { return e10(i) + 2 * e11(i); }
    double var_plus(std::size_t i) const;
    double var_minus(std::size_t i) const;
    double cov_plus_minus(std::size_t i) const;
};

struct SampleBatch {
    EnsembleSpec spec;
    std::uint64_t seed = 0;
    std::uint64_t N = 0;
    ScalingParams scaling;
    /// Scaled largest eigenvalues (lambda_max - mu) / sigma, in draw order.
    std::vector<double> values;
    std::optional<ExceedanceCounts> exceed;
};

/// Worker count from SOFTEDGE_THREADS, else the hardware concurrency.
int worker_count();

/// Draws [first, first + count) of the (spec, seed) sequence, scaled.
std::vector<double> sample_range(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t first,
                                 std::uint64_t count);

/// N draws of the scaled lambda_max; thresholds (scaled t) also record exceedance counts
/// from the same draws. Throws std::invalid_argument for N = 0 or an invalid spec.
SampleBatch sample_batch(const EnsembleSpec& spec, std::uint64_t N, std::uint64_t seed,
                         std::span<const double> thresholds = {});

/// Exceedance counts by Sturm counts alone. The grid is in the scaled variable unless raw.
ExceedanceCounts count_exceed(const EnsembleSpec& spec, std::span<const double> x_grid, std::uint64_t N,
                              std::uint64_t seed, bool raw = false);

/// E_2(n; x) = (E_+(n) E_-(n+1) + E_+(n+1) E_-(n)) / 2 from independent beta = 1
/// counts at the same raw thresholds, with delta-method standard errors.
struct SuperpositionEstimate {
    std::vector<double> value, stderr_;
};
SuperpositionEstimate superposition_e2(const ExceedanceCounts& n, const ExceedanceCounts& n1);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// The scale sqrt((N1 + N2) / (N1 N2)) of the two-sample statistic.
double ks_fluctuation(std::size_t n1, std::size_t n2);

enum class DecimationFamily { GseGoe, LueLoe, GueGoe };

struct DecimationReport {
    DecimationFamily family;
    int n = 0, p = 0;
    double ks = 0.0;
    double fluctuation = 0.0;
    bool pass = false;  // ks < 3 fluctuation
    /// Raw lambda_max of the target ensemble and the decimated top level.
    std::vector<double> direct, decimated;
};

/// (a) lambda_max of SE_n against the second level of OOE_{2n+1}; (b) lambda_max of
/// UE_n (or LUE_{n,p}) against the second level of OOE_n u OOE_{n+1} (p moved along).
/// Requires n <= 50; p is ignored for GseGoe and GueGoe.
DecimationReport decimation_check(DecimationFamily family, int n, int p, std::uint64_t N, std::uint64_t seed);

/// E_2 in the scaled variable from the Fredholm determinant, tabulated on a
/// uniform grid and interpolated by cubic Hermite with the exact derivative.
class FredholmCdf {
public:
    FredholmCdf(EnsembleKind kind, int n, int p, double lo = -8.0, double hi = 6.0, double step = 0.05);
    double operator()(double t) const;
    double density(double t) const;

private:
    double lo_, step_;
    std::vector<double> F_, dF_;
};

/// sup |F_N - F| over the sorted sample.
template <class Cdf>
double ks_one_sample(std::vector<double> v, const Cdf& F);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t N = 0;
    double eta = 0.0;
    double width = 0.0;
    double mid(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
    double density(std::size_t i) const { return double(counts[i]) / (double(N) * width); }
    /// Wilson 99% interval of the bin density.
    std::pair<double, double> ci(std::size_t i) const;
    /// Associative merge of histograms with identical edges.
    void merge(const Histogram& o);
};

/// Bins of width eta * h anchored at multiples of the width and covering the whole batch.
/// Throws std::invalid_argument unless eta * h gives at least 40 bins across [-5, 4].
Histogram mc_histogram(const SampleBatch& batch, double eta);

struct EmpiricalCdf {
    std::vector<double> x, value, ci_lo, ci_hi;
};
EmpiricalCdf empirical_cdf(const SampleBatch& batch, std::span<const double> x_grid);

/// Wilson score interval at 99% for k successes in N trials.
std::pair<double, double> wilson99(std::uint64_t k, std::uint64_t N);

/// Flat little-endian float64 file plus a JSON sidecar at path + ".json".
void write_batch(const SampleBatch& batch, const std::string& path);
SampleBatch read_batch(const std::string& path);

/// t_mid,count,density,ci_lo,ci_hi with 17 significant digits.
std::string histogram_csv(const Histogram& h);

// ---- template definitions

template <class Cdf>
double ks_one_sample(std::vector<double> v, const Cdf& F) {
    std::sort(v.begin(), v.end());
    const double N = double(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = F(v[i]);
        d = std::max({d, double(i + 1) / N - f, f - double(i) / N});
    }
    return d;
}

}  // namespace softedge
