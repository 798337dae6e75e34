#include "softedge/sampler.hpp"

#include "softedge/fredholm.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace softedge {

// ---------------------------------------------------------------- Philox

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += W0;
            key[1] += W1;
        }
        const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
        const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
        const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream)
    : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
      ctr_{0u, 0u, std::uint32_t(stream), std::uint32_t(stream >> 32)} {}

std::uint32_t PhiloxStream::next_u32() {
    if (pos_ == 4) {
        buf_ = philox4x32(ctr_, key_);
        if (++ctr_[0] == 0) ++ctr_[1];
        pos_ = 0;
    }
    return buf_[pos_++];
}

double PhiloxStream::uniform() {
    const std::uint64_t hi = next_u32(), lo = next_u32();
    const std::uint64_t u = ((hi << 32) | lo) >> 11;
    return (double(u) + 0.5) * 0x1.0p-53;
}

double PhiloxStream::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    return r * std::cos(a);
}

double PhiloxStream::gamma(double shape) {
    if (!(shape > 0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1) return gamma(shape + 1) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3, c = 1 / std::sqrt(9 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1 + c * x;
        } while (v <= 0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1 - v + std::log(v))) return d * v;
    }
}

double PhiloxStream::chi_square(double dof) {
    if (dof < 0) throw std::invalid_argument("chi_square: negative degrees of freedom");
    return dof == 0 ? 0.0 : 2 * gamma(dof / 2);
}

// ---------------------------------------------------------------- Sturm

namespace {

double pivot_floor(const Tridiagonal& T) {
    double m = 1.0;
    for (double e : T.e2) m = std::max(m, e);
    return std::numeric_limits<double>::min() * m;
}

int count_below_piv(const Tridiagonal& T, double x, double pivmin) {
    int cnt = 0;
    double q = T.d[0] - x;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0) ++cnt;
    for (std::size_t i = 1; i < T.d.size(); ++i) {
        q = T.d[i] - x - T.e2[i - 1] / q;
        if (std::fabs(q) < pivmin) q = -pivmin;
        if (q < 0) ++cnt;
    }
    return cnt;
}

}  // namespace

int Tridiagonal::count_below(double x) const { return count_below_piv(*this, x, pivot_floor(*this)); }

std::pair<double, double> Tridiagonal::bounds() const {
    const std::size_t n = d.size();
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::sqrt(e2[i - 1]);
        if (i + 1 < n) r += std::sqrt(e2[i]);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    return {lo, hi};
}

double Tridiagonal::kth_largest(int k, double rel_tol) const {
    const int n = static_cast<int>(d.size());
    if (k < 1 || k > n) throw std::out_of_range("kth_largest: k must lie in 1..n");
    auto [lo, hi] = bounds();
    const double diam = std::max(hi - lo, std::numeric_limits<double>::min());
    lo -= 1e-12 * diam;
    hi += 1e-12 * diam;
    const double tol = rel_tol * diam, pivmin = pivot_floor(*this);
    // x > lambda_k exactly when at least n - k + 1 eigenvalues lie below x.
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (count_below_piv(*this, mid, pivmin) >= n - k + 1)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- ensembles

void EnsembleSpec::validate() const {
    if (beta != 1 && beta != 2 && beta != 4) throw std::invalid_argument("EnsembleSpec: beta must be 1, 2 or 4");
    if (n < 1) throw std::invalid_argument("EnsembleSpec: n must be positive");
    if (kind == EnsembleKind::Laguerre && p < 1) throw std::invalid_argument("EnsembleSpec: Laguerre needs p >= 1");
}

double EnsembleSpec::alpha() const { return beta * (p - n + 1) / 2.0 - 1; }

ScalingParams EnsembleSpec::scaling() const {
    validate();
    if (kind == EnsembleKind::Gaussian) return make_scaling(kind, beta, n);
    return make_scaling(kind, beta, n, double(p));
}

std::string EnsembleSpec::label() const {
    static const char* g[] = {"", "GOE", "GUE", "", "GSE"};
    static const char* l[] = {"", "LOE", "LUE", "", "LSE"};
    if (kind == EnsembleKind::Gaussian) return std::string(g[beta]) + "(" + std::to_string(n) + ")";
    return std::string(l[beta]) + "(" + std::to_string(n) + "," + std::to_string(p) + ")";
}

Tridiagonal draw_model(const EnsembleSpec& spec, PhiloxStream& rng) {
    const int n = spec.n, b = spec.beta;
    // The models carry the weights exp(-x^2/2) and x^alpha exp(-x/2); the target
    // exp(-gamma x^2) and exp(-gamma x) follow by x -> x / sqrt(2 gamma) and x / (2 gamma).
    const double gamma = b == 1 ? 0.5 : 1.0;
    Tridiagonal T;
    T.d.resize(n);
    T.e2.resize(n - 1);
    if (spec.kind == EnsembleKind::Gaussian) {
        const double c = 1 / std::sqrt(2 * gamma);
        for (int i = 0; i < n; ++i) T.d[i] = c * rng.normal();
        // Off-diagonal chi_{beta(n-1-i)} / sqrt(2), squared: Gamma(beta(n-1-i)/2).
        for (int i = 0; i + 1 < n; ++i) T.e2[i] = c * c * rng.gamma(b * (n - 1 - i) / 2.0);
        return T;
    }
    // Lower bidiagonal B with diagonal chi_{beta(p-i)} for i < min(n, p) and
    // subdiagonal chi_{beta(n-1-i)} for i < min(n-1, p); T = B B^T.
    const int p = spec.p;
    const double c = 1 / (2 * gamma);
    std::vector<double> a2(n, 0.0), s2(std::max(n - 1, 0), 0.0);
    for (int i = 0; i < std::min(n, p); ++i) a2[i] = rng.chi_square(b * double(p - i));
    for (int i = 0; i < std::min(n - 1, p); ++i) s2[i] = rng.chi_square(b * double(n - 1 - i));
    for (int i = 0; i < n; ++i) T.d[i] = c * (a2[i] + (i > 0 ? s2[i - 1] : 0.0));
    for (int i = 0; i + 1 < n; ++i) T.e2[i] = c * c * a2[i] * s2[i];
    return T;
}

// ---------------------------------------------------------------- batches

int worker_count() {
    if (const char* s = std::getenv("SOFTEDGE_THREADS")) {
        const int w = std::atoi(s);
        if (w >= 1) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Runs body(begin, end, worker) on contiguous slices of [0, N).
void parallel_slices(std::uint64_t N, int W, const std::function<void(std::uint64_t, std::uint64_t, int)>& body) {
    W = static_cast<int>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(W, N)));
    if (W == 1) {
        body(0, N, 0);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < W; ++w)
        pool.emplace_back(body, N * w / W, N * (w + 1) / W, w);
    for (auto& th : pool) th.join();
}

std::vector<double> raw_thresholds(const ScalingParams& s, std::span<const double> x, bool raw) {
    std::vector<double> out(x.begin(), x.end());
    if (!raw)
        for (double& v : out) v = s.mu + s.sigma * v;
    return out;
}

// Per-draw top levels in the raw variable, k = 1 or 2.
std::vector<std::array<double, 2>> top_levels(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t N) {
    std::vector<std::array<double, 2>> out(N);
    parallel_slices(N, worker_count(), [&](std::uint64_t b, std::uint64_t e, int) {
        for (std::uint64_t i = b; i < e; ++i) {
            PhiloxStream rng(seed, i);
            const Tridiagonal T = draw_model(spec, rng);
            out[i][0] = T.kth_largest(1);
            out[i][1] = spec.n >= 2 ? T.kth_largest(2) : -INFINITY;
        }
    });
    return out;
}

}  // namespace

std::vector<double> sample_range(const EnsembleSpec& spec, std::uint64_t seed, std::uint64_t first,
                                 std::uint64_t count) {
    const ScalingParams s = spec.scaling();
    std::vector<double> v(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        PhiloxStream rng(seed, first + i);
        v[i] = (draw_model(spec, rng).kth_largest(1) - s.mu) / s.sigma;
    }
    return v;
}

SampleBatch sample_batch(const EnsembleSpec& spec, std::uint64_t N, std::uint64_t seed,
                         std::span<const double> thresholds) {
    if (N == 0) throw std::invalid_argument("sample_batch: N must be at least 1");
    SampleBatch out;
    out.spec = spec;
    out.seed = seed;
    out.N = N;
    out.scaling = spec.scaling();
    out.values.resize(N);
    const ScalingParams& s = out.scaling;
    const std::vector<double> x = raw_thresholds(s, thresholds, false);
    const int W = worker_count();
    std::vector<std::vector<std::uint64_t>> zero(W, std::vector<std::uint64_t>(x.size())), one = zero;
    parallel_slices(N, W, [&](std::uint64_t b, std::uint64_t e, int w) {
        for (std::uint64_t i = b; i < e; ++i) {
            PhiloxStream rng(seed, i);
            const Tridiagonal T = draw_model(spec, rng);
            out.values[i] = (T.kth_largest(1) - s.mu) / s.sigma;
            for (std::size_t k = 0; k < x.size(); ++k) {
                const int above = spec.n - T.count_below(x[k]);
                zero[w][k] += above == 0;
                one[w][k] += above == 1;
            }
        }
    });
    for (double v : out.values)
        if (!std::isfinite(v)) throw std::runtime_error("sample_batch: non-finite draw");
    if (!x.empty()) {
        ExceedanceCounts ec;
        ec.x = x;
        ec.N = N;
        ec.zero.assign(x.size(), 0);
        ec.one.assign(x.size(), 0);
        for (int w = 0; w < W; ++w)
            for (std::size_t k = 0; k < x.size(); ++k) {
                ec.zero[k] += zero[w][k];
                ec.one[k] += one[w][k];
            }
        out.exceed = std::move(ec);
    }
    return out;
}

ExceedanceCounts count_exceed(const EnsembleSpec& spec, std::span<const double> x_grid, std::uint64_t N,
                              std::uint64_t seed, bool raw) {
    if (N == 0) throw std::invalid_argument("count_exceed: N must be at least 1");
    const ScalingParams s = spec.scaling();
    ExceedanceCounts ec;
    ec.x = raw_thresholds(s, x_grid, raw);
    ec.N = N;
    const int W = worker_count();
    std::vector<std::vector<std::uint64_t>> zero(W, std::vector<std::uint64_t>(ec.x.size())), one = zero;
    parallel_slices(N, W, [&](std::uint64_t b, std::uint64_t e, int w) {
        for (std::uint64_t i = b; i < e; ++i) {
            PhiloxStream rng(seed, i);
            const Tridiagonal T = draw_model(spec, rng);
            for (std::size_t k = 0; k < ec.x.size(); ++k) {
                const int above = spec.n - T.count_below(ec.x[k]);
                zero[w][k] += above == 0;
                one[w][k] += above == 1;
            }
        }
    });
    ec.zero.assign(ec.x.size(), 0);
    ec.one.assign(ec.x.size(), 0);
    for (int w = 0; w < W; ++w)
        for (std::size_t k = 0; k < ec.x.size(); ++k) {
            ec.zero[k] += zero[w][k];
            ec.one[k] += one[w][k];
        }
    return ec;
}

double ExceedanceCounts::var_plus(std::size_t i) const { return e10(i) * (1 - e10(i)) / double(N); }

double ExceedanceCounts::var_minus(std::size_t i) const {
    // Per draw Z = 1{0 above} + 2 1{1 above}.
    const double m = e_minus(i);
    return (e10(i) + 4 * e11(i) - m * m) / double(N);
}

double ExceedanceCounts::cov_plus_minus(std::size_t i) const {
    return (e10(i) - e10(i) * e_minus(i)) / double(N);
}

SuperpositionEstimate superposition_e2(const ExceedanceCounts& a, const ExceedanceCounts& b) {
    if (a.x != b.x) throw std::invalid_argument("superposition_e2: threshold grids differ");
    SuperpositionEstimate out;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        const double Pa = a.e_plus(i), Ma = a.e_minus(i), Pb = b.e_plus(i), Mb = b.e_minus(i);
        out.value.push_back(0.5 * (Pa * Mb + Pb * Ma));
        // Gradient (Mb, Pb) / 2 on batch a's (E+, E-), (Ma, Pa) / 2 on batch b's.
        const double va = Mb * Mb * a.var_plus(i) + Pb * Pb * a.var_minus(i) + 2 * Mb * Pb * a.cov_plus_minus(i);
        const double vb = Ma * Ma * b.var_plus(i) + Pa * Pa * b.var_minus(i) + 2 * Ma * Pa * b.cov_plus_minus(i);
        out.stderr_.push_back(0.5 * std::sqrt(va + vb));
    }
    return out;
}

// ---------------------------------------------------------------- KS and decimation

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = double(a.size()), nb = double(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(double(i) / na - double(j) / nb));
    }
    return d;
}

double ks_fluctuation(std::size_t n1, std::size_t n2) {
    return std::sqrt(double(n1 + n2) / (double(n1) * double(n2)));
}

DecimationReport decimation_check(DecimationFamily family, int n, int p, std::uint64_t N, std::uint64_t seed) {
    if (n < 1 || n > 50) throw std::invalid_argument("decimation_check: n must lie in 1..50");
    if (N == 0) throw std::invalid_argument("decimation_check: N must be at least 1");
    DecimationReport r;
    r.family = family;
    r.n = n;
    r.p = p;
    const std::uint64_t s0 = splitmix64(seed), s1 = splitmix64(seed + 1), s2 = splitmix64(seed + 2);
    auto first = [](const std::vector<std::array<double, 2>>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i][0];
        return out;
    };
    // Second largest of the union of two top-two lists.
    auto second_of_union = [](const std::array<double, 2>& a, const std::array<double, 2>& b) {
        std::array<double, 4> u{a[0], a[1], b[0], b[1]};
        std::sort(u.begin(), u.end(), std::greater<>());
        return u[1];
    };
    switch (family) {
        case DecimationFamily::GseGoe: {
            r.direct = first(top_levels({4, EnsembleKind::Gaussian, n, 0}, s0, N));
            const auto goe = top_levels({1, EnsembleKind::Gaussian, 2 * n + 1, 0}, s1, N);
            for (const auto& v : goe) r.decimated.push_back(v[1]);
            break;
        }
        case DecimationFamily::GueGoe:
        case DecimationFamily::LueLoe: {
            const bool lag = family == DecimationFamily::LueLoe;
            const auto kind = lag ? EnsembleKind::Laguerre : EnsembleKind::Gaussian;
            if (lag && p < 1) throw std::invalid_argument("decimation_check: Laguerre needs p >= 1");
            const int q = lag ? p : 0, q1 = lag ? p + 1 : 0;
            r.direct = first(top_levels({2, kind, n, q}, s0, N));
            const auto a = top_levels({1, kind, n, q}, s1, N);
            const auto b = top_levels({1, kind, n + 1, q1}, s2, N);
            for (std::uint64_t i = 0; i < N; ++i) r.decimated.push_back(second_of_union(a[i], b[i]));
            break;
        }
        default: throw std::invalid_argument("decimation_check: unknown family");
    }
    r.ks = ks_two_sample(r.direct, r.decimated);
    r.fluctuation = ks_fluctuation(r.direct.size(), r.decimated.size());
    r.pass = r.ks < 3 * r.fluctuation;
    return r;
}

// ---------------------------------------------------------------- Fredholm CDF

FredholmCdf::FredholmCdf(EnsembleKind kind, int n, int p, double lo, double hi, double step)
    : lo_(lo), step_(step) {
    if (!(hi > lo) || !(step > 0)) throw std::invalid_argument("FredholmCdf: bad grid");
    const ScalingParams s = kind == EnsembleKind::Gaussian ? make_scaling(kind, 2, n)
                                                           : make_scaling(kind, 2, n, double(p));
    const KernelHandle K = kind == EnsembleKind::Gaussian ? KernelHandle::hermite(n, s.mu, s.sigma)
                                                          : KernelHandle::laguerre(n, p, s.mu, s.sigma);
    const int m = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= m; ++i) {
        const double t = lo + i * step;
        if (t <= K.support_left()) {
            F_.push_back(0.0);
            dF_.push_back(0.0);
            continue;
        }
        const DetResult d = fredholm_det(K, t);
        F_.push_back(d.value);
        dF_.push_back(d.value * d.dlog);
    }
}

double FredholmCdf::operator()(double t) const {
    const double u = (t - lo_) / step_;
    if (u <= 0) return F_.front();
    if (u >= double(F_.size() - 1)) return F_.back();
    const auto i = static_cast<std::size_t>(u);
    const double s = u - double(i), s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * F_[i] + (s3 - 2 * s2 + s) * step_ * dF_[i] + (-2 * s3 + 3 * s2) * F_[i + 1] +
           (s3 - s2) * step_ * dF_[i + 1];
}

double FredholmCdf::density(double t) const {
    const double u = (t - lo_) / step_;
    if (u <= 0 || u >= double(F_.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(u);
    const double s = u - double(i), s2 = s * s;
    return ((6 * s2 - 6 * s) * F_[i] + (-6 * s2 + 6 * s) * F_[i + 1]) / step_ + (3 * s2 - 4 * s + 1) * dF_[i] +
           (3 * s2 - 2 * s) * dF_[i + 1];
}

// ---------------------------------------------------------------- histograms

std::pair<double, double> wilson99(std::uint64_t k, std::uint64_t N) {
    constexpr double z = 2.5758293035489004;  // standard normal 0.995 quantile
    const double n = double(N), ph = double(k) / n, z2 = z * z;
    const double c = (ph + z2 / (2 * n)) / (1 + z2 / n);
    const double r = z / (1 + z2 / n) * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
    return {std::max(0.0, c - r), std::min(1.0, c + r)};
}

std::pair<double, double> Histogram::ci(std::size_t i) const {
    const auto [lo, hi] = wilson99(counts[i], N);
    return {lo / width, hi / width};
}

void Histogram::merge(const Histogram& o) {
    if (edges != o.edges) throw std::invalid_argument("Histogram::merge: edges differ");
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    N += o.N;
}

Histogram mc_histogram(const SampleBatch& batch, double eta) {
    const double H = eta * batch.scaling.h;
    if (!(H > 0) || !std::isfinite(H) || 9.0 / H < 40.0)
        throw std::invalid_argument("mc_histogram: bin width must give at least 40 bins across [-5, 4]");
    if (batch.values.empty()) throw std::invalid_argument("mc_histogram: empty batch");
    const auto [mn, mx] = std::minmax_element(batch.values.begin(), batch.values.end());
    const auto k0 = static_cast<long long>(std::floor(*mn / H));
    const auto k1 = static_cast<long long>(std::floor(*mx / H)) + 1;
    if (k1 - k0 > 10'000'000) throw std::invalid_argument("mc_histogram: too many bins");
    Histogram h;
    h.eta = eta;
    h.width = H;
    h.N = batch.values.size();
    for (long long k = k0; k <= k1; ++k) h.edges.push_back(double(k) * H);
    h.counts.assign(h.edges.size() - 1, 0);
    for (double v : batch.values) {
        auto i = static_cast<long long>(std::floor(v / H)) - k0;
        // Guard the rounding of v / H against the stored edges.
        while (i > 0 && v < h.edges[i]) --i;
        while (i + 1 < static_cast<long long>(h.counts.size()) && v >= h.edges[i + 1]) ++i;
        ++h.counts[i];
    }
    return h;
}

EmpiricalCdf empirical_cdf(const SampleBatch& batch, std::span<const double> x_grid) {
    std::vector<double> v = batch.values;
    std::sort(v.begin(), v.end());
    EmpiricalCdf out;
    for (double x : x_grid) {
        const auto k = static_cast<std::uint64_t>(std::upper_bound(v.begin(), v.end(), x) - v.begin());
        const auto [lo, hi] = wilson99(k, v.size());
        out.x.push_back(x);
        out.value.push_back(double(k) / double(v.size()));
        out.ci_lo.push_back(lo);
        out.ci_hi.push_back(hi);
    }
    return out;
}

// ---------------------------------------------------------------- persistence

namespace {

std::uint64_t to_le(std::uint64_t u) {
    if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(u);
    return u;
}

}  // namespace

void write_batch(const SampleBatch& batch, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_batch: cannot open " + path);
    for (double v : batch.values) {
        const std::uint64_t u = to_le(std::bit_cast<std::uint64_t>(v));
        out.write(reinterpret_cast<const char*>(&u), sizeof u);
    }
    nlohmann::ordered_json j;
    j["format"] = "float64-le";
    j["code_version"] = kCodeVersion;
    j["spec"] = {{"beta", batch.spec.beta},
                 {"kind", batch.spec.kind == EnsembleKind::Gaussian ? "gaussian" : "laguerre"},
                 {"n", batch.spec.n},
                 {"p", batch.spec.p}};
    j["seed"] = batch.seed;
    j["N"] = batch.N;
    j["scaling"] = {{"mu", batch.scaling.mu}, {"sigma", batch.scaling.sigma}, {"h", batch.scaling.h},
                    {"tau", batch.scaling.tau}};
    std::ofstream side(path + ".json");
    if (!side) throw std::runtime_error("write_batch: cannot open sidecar for " + path);
    side << j.dump(2) << '\n';
}

SampleBatch read_batch(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw std::runtime_error("read_batch: missing sidecar for " + path);
    const auto j = nlohmann::json::parse(side);
    if (j.at("format") != "float64-le") throw std::runtime_error("read_batch: unknown format");
    SampleBatch b;
    b.spec.beta = j.at("spec").at("beta");
    b.spec.kind = j.at("spec").at("kind") == "gaussian" ? EnsembleKind::Gaussian : EnsembleKind::Laguerre;
    b.spec.n = j.at("spec").at("n");
    b.spec.p = j.at("spec").at("p");
    b.seed = j.at("seed");
    b.N = j.at("N");
    b.scaling = b.spec.scaling();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_batch: cannot open " + path);
    b.values.resize(b.N);
    for (auto& v : b.values) {
        std::uint64_t u;
        if (!in.read(reinterpret_cast<char*>(&u), sizeof u)) throw std::runtime_error("read_batch: truncated file");
        v = std::bit_cast<double>(to_le(u));
    }
    return b;
}

std::string histogram_csv(const Histogram& h) {
    std::ostringstream os;
    os << "t_mid,count,density,ci_lo,ci_hi\n";
    char buf[160];
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const auto [lo, hi] = h.ci(i);
        std::snprintf(buf, sizeof buf, "%.17g,%llu,%.17g,%.17g,%.17g\n", h.mid(i),
                      static_cast<unsigned long long>(h.counts[i]), h.density(i), lo, hi);
        os << buf;
    }
    return os.str();
}

}  // namespace softedge
