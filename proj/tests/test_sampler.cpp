#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "softedge/fredholm.hpp"
#include "softedge/sampler.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace softedge;

namespace {

const EnsembleSpec gue10{2, EnsembleKind::Gaussian, 10, 0};

struct ThreadsEnv {
    explicit ThreadsEnv(const char* w) { setenv("SOFTEDGE_THREADS", w, 1); }
    ~ThreadsEnv() { unsetenv("SOFTEDGE_THREADS"); }
};

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("variate moments") {
    PhiloxStream rng(123, 0);
    const int N = 200000;
    double su = 0, sz = 0, sz2 = 0;
    for (int i = 0; i < N; ++i) {
        const double u = rng.uniform();
        REQUIRE(u > 0);
        REQUIRE(u < 1);
        su += u;
        const double z = rng.normal();
        sz += z;
        sz2 += z * z;
    }
    CHECK(su / N == doctest::Approx(0.5).epsilon(0.005));
    CHECK(std::fabs(sz / N) < 0.01);
    CHECK(sz2 / N == doctest::Approx(1.0).epsilon(0.01));
    for (double k : {0.5, 1.0, 3.7, 20.0}) {
        double s = 0, s2 = 0;
        for (int i = 0; i < N; ++i) {
            const double g = rng.gamma(k);
            s += g;
            s2 += g * g;
        }
        const double m = s / N, v = s2 / N - m * m;
        CHECK(m == doctest::Approx(k).epsilon(0.01));
        CHECK(v == doctest::Approx(k).epsilon(0.03));
    }
    CHECK(rng.chi_square(0) == 0.0);
    CHECK_THROWS_AS(rng.gamma(0), std::invalid_argument);
}

TEST_CASE("Sturm bisection against a dense eigensolver") {
    PhiloxStream rng(5, 1);
    for (int n : {1, 2, 7, 30}) {
        Tridiagonal T;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) A(i, i) = rng.normal();
        for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = A(i + 1, i) = rng.normal();
        for (int i = 0; i < n; ++i) T.d.push_back(A(i, i));
        for (int i = 0; i + 1 < n; ++i) T.e2.push_back(A(i, i + 1) * A(i, i + 1));
        Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A).eigenvalues();
        const auto [lo, hi] = T.bounds();
        CHECK(lo <= ev(0));
        CHECK(hi >= ev(n - 1));
        for (int k = 1; k <= n; ++k) CHECK(std::fabs(T.kth_largest(k) - ev(n - k)) <= 1e-9 * (hi - lo) + 1e-14);
        CHECK(T.count_below(ev(n - 1) + 1e-6) == n);
        CHECK(T.count_below(ev(0) - 1e-6) == 0);
        CHECK_THROWS_AS(T.kth_largest(n + 1), std::out_of_range);
    }
}

TEST_CASE("ensemble specs") {
    CHECK_THROWS_AS(sample_batch({3, EnsembleKind::Gaussian, 4, 0}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_batch({2, EnsembleKind::Gaussian, 0, 0}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_batch({2, EnsembleKind::Laguerre, 4, 0}, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(sample_batch(gue10, 0, 1), std::invalid_argument);
    CHECK(EnsembleSpec{1, EnsembleKind::Laguerre, 10, 40}.alpha() == doctest::Approx(14.5));
    CHECK(EnsembleSpec{1, EnsembleKind::Laguerre, 10, 40}.label() == "LOE(10,40)");
    // LOE (10, 40) carries the displayed tau and h.
    const ScalingParams s = EnsembleSpec{1, EnsembleKind::Laguerre, 10, 40}.scaling();
    CHECK(s.tau == doctest::Approx(0.88309).epsilon(1e-4));
    CHECK(s.h == doctest::Approx(0.094885).epsilon(1e-4));
}

TEST_CASE("1 x 1 models against closed forms") {
    const std::uint64_t N = 1000000;
    const double crit = 1.63 / std::sqrt(double(N));
    // GUE n = 1: density proportional to exp(-x^2).
    const auto g = sample_batch({2, EnsembleKind::Gaussian, 1, 0}, N, 11);
    std::vector<double> x(N);
    for (std::size_t i = 0; i < N; ++i) x[i] = g.scaling.mu + g.scaling.sigma * g.values[i];
    CHECK(ks_one_sample(x, [](double v) { return 0.5 * (1 + std::erf(v)); }) < crit);
    // LUE n = 1: x^{p-1} e^{-x}, a Gamma(p) law; LOE n = 1: x^{p/2-1} e^{-x/2}, chi^2_p.
    for (int beta : {1, 2}) {
        const int p = 3;
        const auto l = sample_batch({beta, EnsembleKind::Laguerre, 1, p}, 200000, 12);
        std::vector<double> y(l.values.size());
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = l.scaling.mu + l.scaling.sigma * l.values[i];
        const double shape = beta == 2 ? p : p / 2.0, scale = beta == 2 ? 1.0 : 2.0;
        CHECK(ks_one_sample(y, [&](double v) { return v <= 0 ? 0.0 : boost::math::gamma_p(shape, v / scale); }) <
              1.63 / std::sqrt(double(y.size())));
    }
}

TEST_CASE("determinism and partitioning") {
    const auto a = sample_batch(gue10, 5000, 99);
    const auto b = sample_batch(gue10, 5000, 99);
    CHECK(a.values == b.values);
    const auto c = sample_batch(gue10, 5000, 100);
    CHECK(a.values != c.values);
    {
        ThreadsEnv env("3");
        CHECK(worker_count() == 3);
        CHECK(sample_batch(gue10, 5000, 99).values == a.values);
    }
    std::vector<double> joined = sample_range(gue10, 99, 0, 1234);
    const auto tail = sample_range(gue10, 99, 1234, 5000 - 1234);
    joined.insert(joined.end(), tail.begin(), tail.end());
    CHECK(joined == a.values);
}

TEST_CASE("beta = 2 calibration against the Fredholm determinant") {
    // Reduced N; the full 10^6 runs in the acceptance binary.
    const std::uint64_t N = 200000;
    for (auto [kind, n, p] : {std::tuple{EnsembleKind::Gaussian, 5, 0}, std::tuple{EnsembleKind::Laguerre, 6, 15}}) {
        const auto b = sample_batch({2, kind, n, p}, N, 2024);
        const FredholmCdf F(kind, n, p);
        CHECK(ks_one_sample(b.values, F) < 1.63 / std::sqrt(double(N)));
    }
    const FredholmCdf F(EnsembleKind::Gaussian, 10, 0);
    const auto K = KernelHandle::hermite(10, gue10.scaling().mu, gue10.scaling().sigma);
    for (double t : {-3.33, -1.01, 0.47}) {
        CHECK(F(t) == doctest::Approx(det_finite(K, t)).epsilon(1e-7));
        const DetResult d = fredholm_det(K, t);
        CHECK(F.density(t) == doctest::Approx(d.value * d.dlog).epsilon(1e-4));
    }
}

TEST_CASE("Wishart symmetry at Monte-Carlo level") {
    const std::uint64_t N = 100000;
    const auto a = sample_batch({2, EnsembleKind::Laguerre, 3, 7}, N, 1);
    const auto b = sample_batch({2, EnsembleKind::Laguerre, 7, 3}, N, 2);
    CHECK(a.scaling.mu == doctest::Approx(b.scaling.mu));
    CHECK(ks_two_sample(a.values, b.values) < 3 * ks_fluctuation(N, N));
    // Both agree with the symmetric Fredholm oracle.
    CHECK(ks_one_sample(b.values, FredholmCdf(EnsembleKind::Laguerre, 7, 3)) < 1.63 / std::sqrt(double(N)));
}

TEST_CASE("exceedance counts") {
    const EnsembleSpec goe6{1, EnsembleKind::Gaussian, 6, 0};
    const std::vector<double> grid{-30.0, -4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
    const std::uint64_t N = 40000;
    const auto batch = sample_batch(goe6, N, 8, grid);
    REQUIRE(batch.exceed.has_value());
    const auto& ec = *batch.exceed;
    CHECK(ec.zero[0] == 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        // Same event per draw: lambda_max <= x and no eigenvalue above x.
        const auto le = std::count_if(batch.values.begin(), batch.values.end(), [&](double v) { return v <= grid[i]; });
        CHECK(std::uint64_t(le) == ec.zero[i]);
        CHECK(ec.e_plus(i) <= ec.e_minus(i));
        if (i > 0) CHECK(ec.e10(i) >= ec.e10(i - 1));
    }
    const auto direct = count_exceed(goe6, grid, N, 8);
    CHECK(direct.zero == ec.zero);
    CHECK(direct.one == ec.one);
}

TEST_CASE("superposition identity for E_2") {
    // E_2(6; x) from independent GOE_6 and GOE_7 exceedance counts at the GUE_6 thresholds.
    const std::uint64_t N = 200000;
    const ScalingParams s = make_scaling(EnsembleKind::Gaussian, 2, 6);
    const std::vector<double> t{-3.0, -2.0, -1.5, -1.0, -0.5, 0.0, 1.0};
    std::vector<double> x;
    for (double v : t) x.push_back(s.mu + s.sigma * v);
    const auto a = count_exceed({1, EnsembleKind::Gaussian, 6, 0}, x, N, 31, true);
    const auto b = count_exceed({1, EnsembleKind::Gaussian, 7, 0}, x, N, 32, true);
    const auto est = superposition_e2(a, b);
    const auto K = KernelHandle::hermite(6, s.mu, s.sigma);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e2 = det_finite(K, t[i]);
        CHECK(std::fabs(est.value[i] - e2) < 3 * est.stderr_[i]);
    }
}

TEST_CASE("decimation checks") {
    const std::uint64_t N = 20000;
    const auto gse = decimation_check(DecimationFamily::GseGoe, 4, 0, N, 3);
    CHECK(gse.pass);
    const auto lue = decimation_check(DecimationFamily::LueLoe, 5, 8, N, 4);
    CHECK(lue.pass);
    // The beta = 2 arm against the Fredholm oracle directly.
    const ScalingParams s = make_scaling(EnsembleKind::Laguerre, 2, 5, 8.0);
    std::vector<double> t;
    for (double v : lue.decimated) t.push_back((v - s.mu) / s.sigma);
    CHECK(ks_one_sample(t, FredholmCdf(EnsembleKind::Laguerre, 5, 8)) < 1.63 / std::sqrt(double(N)));
    // A wrong pairing is detected: GSE_4 against the top level of GOE_9.
    auto bad = gse;
    bad.decimated.clear();
    const auto goe9 = sample_batch({1, EnsembleKind::Gaussian, 9, 0}, N, 5);
    for (double v : goe9.values) bad.decimated.push_back(goe9.scaling.mu + goe9.scaling.sigma * v);
    CHECK(ks_two_sample(bad.direct, bad.decimated) > 3 * ks_fluctuation(N, N));
    CHECK_THROWS_AS(decimation_check(DecimationFamily::GseGoe, 51, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(decimation_check(static_cast<DecimationFamily>(9), 4, 0, 10, 1), std::invalid_argument);
}

TEST_CASE("histograms and empirical CDFs") {
    const auto b = sample_batch(gue10, 20000, 17);
    const Histogram h = mc_histogram(b, 2.0);
    std::uint64_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == b.N);
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) REQUIRE(h.edges[i] < h.edges[i + 1]);
    CHECK(h.width == doctest::Approx(2 * b.scaling.h));
    double mass = 0;
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        mass += h.density(i) * h.width;
        const auto [lo, hi] = h.ci(i);
        CHECK(lo <= h.density(i));
        CHECK(hi >= h.density(i));
    }
    CHECK(mass == doctest::Approx(1.0));
    CHECK_THROWS_AS(mc_histogram(b, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(mc_histogram(b, 0.0), std::invalid_argument);

    Histogram m = h;
    m.merge(h);
    CHECK(m.N == 2 * h.N);
    CHECK(m.counts[h.counts.size() / 2] == 2 * h.counts[h.counts.size() / 2]);

    const std::string csv = histogram_csv(h);
    CHECK(csv.rfind("t_mid,count,density,ci_lo,ci_hi\n", 0) == 0);

    const std::vector<double> grid{-3.0, -1.5, 0.0, 1.0};
    const EmpiricalCdf cdf = empirical_cdf(b, grid);
    const FredholmCdf F(EnsembleKind::Gaussian, 10, 0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(cdf.ci_lo[i] <= cdf.value[i]);
        CHECK(cdf.ci_hi[i] >= cdf.value[i]);
        CHECK(F(grid[i]) >= cdf.ci_lo[i]);
        CHECK(F(grid[i]) <= cdf.ci_hi[i]);
    }
    const auto [lo, hi] = wilson99(0, 100);
    CHECK(lo == 0.0);
    CHECK(hi > 0.0);
}

TEST_CASE("batch persistence") {
    const auto b = sample_batch({1, EnsembleKind::Laguerre, 4, 9}, 1000, 77);
    const auto path = (std::filesystem::temp_directory_path() / "softedge_batch_test.bin").string();
    write_batch(b, path);
    CHECK(std::filesystem::file_size(path) == 8 * b.N);
    const SampleBatch r = read_batch(path);
    CHECK(r.values == b.values);
    CHECK(r.seed == 77);
    CHECK(r.spec.p == 9);
    CHECK(r.scaling.tau == b.scaling.tau);
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
    CHECK_THROWS(read_batch(path));
}
