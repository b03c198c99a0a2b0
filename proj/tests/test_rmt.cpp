#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/la.hpp"
#include "sdw/measures.hpp"
#include "sdw/rmt.hpp"

using namespace sdw;
using namespace std::complex_literals;

namespace {
const EntryLaw kGauss{LawKind::gaussian, 1.0};

DeformationSpec diag_spec(double theta, int N) {
    return {theta, std::vector<double>(static_cast<std::size_t>(N - 1), 0.0), std::nullopt};
}
} // namespace

TEST_CASE("wigner entry moments match the model") {
    // pool several medium matrices for the off-diagonal second moment
    double sum_off = 0.0, sum_diag = 0.0;
    int n_off = 0, n_diag = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Eigen::MatrixXcd W(100, 100);
        Rng rng(900 + seed);
        fill_wigner(W, kGauss, rng);
        for (int i = 0; i < 100; ++i) {
            sum_diag += W(i, i).real() * W(i, i).real();
            ++n_diag;
            for (int j = i + 1; j < 100; ++j) {
                sum_off += std::norm(W(i, j));
                ++n_off;
            }
        }
    }
    CHECK(std::abs(sum_off / n_off - 1.0) < 0.02);   // ~6 stderr
    CHECK(std::abs(sum_diag / n_diag - 1.0) < 0.16); // ~5 stderr
}

TEST_CASE("samples are hermitian and seed-deterministic") {
    const auto spec = diag_spec(2.0, 50);
    const auto a = sample_deformed(50, spec, kGauss, 77);
    const auto b = sample_deformed(50, spec, kGauss, 77);
    const auto c = sample_deformed(50, spec, kGauss, 78);
    CHECK((a.M - a.M.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((a.M - b.M).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.M - c.M).cwiseAbs().maxCoeff() > 0.0);
    CHECK(a.W11 == b.W11);
    CHECK(a.M(0, 0).real() == doctest::Approx(2.0 + a.W11 / std::sqrt(50.0)));

    DeformationSpec bad{2.0, {0.0, 2.0, 0.0}, std::nullopt};
    CHECK_THROWS_AS((void)sample_deformed(4, bad, kGauss, 1), DomainError);
    CHECK_THROWS_AS((void)sample_deformed(9, diag_spec(2.0, 4), kGauss, 1),
                    DomainError); // size mismatch
}

TEST_CASE("haar-rotated deformation keeps the spike corner and the spectrum") {
    DeformationSpec spec{2.0, {0.5, -0.5, 0.25, -0.25, 0.1, -0.1, 0.0, 0.3}, 99};
    const auto def = Deformation::build(spec);
    CHECK(def.A(0, 0).real() == 2.0);
    CHECK(def.A.row(0).tail(8).cwiseAbs().maxCoeff() == 0.0);
    CHECK((def.A - def.A.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
    // rotation preserves the sub-spectrum
    const auto eigs = la::eigenvalues(def.A.bottomRightCorner(8, 8));
    std::vector<double> sorted(spec.sub_spectrum);
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 8; ++i) CHECK(eigs(i) == doctest::Approx(sorted[i]).epsilon(1e-12));

    const auto q = haar_unitary(16, 5);
    CHECK((q * q.adjoint() - Eigen::MatrixXcd::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("outlier eigenpair on a noiseless synthetic matrix") {
    DeformedSample s;
    s.N = 6;
    s.theta = 2.0;
    s.M = Eigen::MatrixXcd::Zero(6, 6);
    s.M(0, 0) = 2.0;
    for (int i = 1; i < 6; ++i) s.M(i, i) = -1.0 + 0.4 * (i - 1);
    const auto res = outlier_eigenpair(s, 2.0, {.window = 0.4});
    REQUIRE(res.ok);
    CHECK(res.lambda == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(res.vector(0) - 1.0) < 1e-12);
    CHECK(res.count_in_window == 1);

    // no eigenvalue in the window
    const auto none = outlier_eigenpair(s, 4.0, {.window = 0.3});
    CHECK_FALSE(none.ok);
    CHECK(none.count_in_window == 0);

    // two candidates: shrink the spike gap
    DeformedSample t = s;
    t.M(1, 1) = 2.1;
    const auto clash = outlier_eigenpair(t, 2.0, {.window = 0.4});
    CHECK_FALSE(clash.ok);
    CHECK(clash.count_in_window == 2);
}

TEST_CASE("outlier extraction at desk scale") {
    const int N = 300;
    const Deformation def = Deformation::build(diag_spec(2.0, N));
    int ok_count = 0;
    double overlap_sum = 0.0, overlap_sq = 0.0;
    const int trials = 80;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto sample = sample_deformed(def, kGauss, 4000 + t);
        const auto res = outlier_eigenpair(sample, 2.5, {.window = 0.25});
        if (!res.ok) continue;
        ++ok_count;
        CHECK(std::abs(res.lambda - 2.5) < 0.2);
        CHECK(res.residual <= 1e-10 * std::abs(res.lambda));
        CHECK(res.vector(0).imag() == doctest::Approx(0.0).epsilon(1e-14));
        CHECK(res.vector(0).real() >= 0.0);
        CHECK(res.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
        const double overlap = spike_overlap(res.vector);
        CHECK(overlap >= 0.0);
        CHECK(overlap <= 1.0);
        overlap_sum += overlap;
        overlap_sq += overlap * overlap;
    }
    CHECK(ok_count >= trials * 99 / 100);
    // mean overlap near tau_N = 3/4 (all sub-spectrum atoms at zero)
    const double mean = overlap_sum / ok_count;
    const double sd = std::sqrt(overlap_sq / ok_count - mean * mean);
    CHECK(std::abs(mean - 0.75) < 3.0 * sd / std::sqrt(double(ok_count)) + 0.01);
}

TEST_CASE("bulk stays inside the shifted semicircle edges") {
    const auto sample = sample_deformed(Deformation::build(diag_spec(2.0, 600)), kGauss, 31);
    const auto eigs = la::eigenvalues(sample.M);
    CHECK(eigs(599) == doctest::Approx(2.5).epsilon(0.08)); // outlier
    CHECK(eigs(598) < 2.2);
    CHECK(eigs(0) > -2.2);
}

TEST_CASE("spike overlap") {
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Unit(4, 0);
    CHECK(spike_overlap(e1) == 1.0);
    Eigen::VectorXcd mix = Eigen::VectorXcd::Zero(4);
    mix(0) = 1.0 / std::sqrt(2.0);
    mix(1) = 1.0 / std::sqrt(2.0);
    CHECK(spike_overlap(mix) == doctest::Approx(0.5).epsilon(1e-14));
    const cplx phase = std::exp(cplx(0.0, 0.83));
    CHECK(spike_overlap(phase * mix) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS((void)spike_overlap(2.0 * e1), DomainError);
}

TEST_CASE("resolvent of the zero matrix") {
    DeformedSample s;
    s.N = 5;
    s.M = Eigen::MatrixXcd::Zero(5, 5);
    ResolventRequest req;
    req.g11 = true;
    req.trace = true;
    const auto stats = resolvent_stats(s, 1.0i, req);
    CHECK(std::abs(stats.g11 - (-1.0i)) < 1e-14);
    CHECK(std::abs(stats.trace - (-1.0i)) < 1e-14);
    CHECK_THROWS_AS((void)resolvent_stats(s, cplx(1.0, 0.0), req), DomainError);
}

TEST_CASE("schur complement identity holds to solver precision") {
    const int N = 120;
    const Deformation def = Deformation::build(diag_spec(2.0, N));
    const auto sample = sample_deformed(def, kGauss, 5150);
    const cplx z(0.4, 1.3);

    ResolventRequest req;
    req.g11 = true;
    const cplx g11 = resolvent_stats(sample, z, req).g11;
    CHECK(std::abs(g11) <= 1.0 / z.imag() + 1e-12);
    // conjugation symmetry
    const cplx g11c = resolvent_stats(sample, std::conj(z), req).g11;
    CHECK(std::abs(g11c - std::conj(g11)) < 1e-13);

    // assemble Schur's formula: Y holds the scaled first column of W
    const Eigen::MatrixXcd mhat = sample.M.bottomRightCorner(N - 1, N - 1);
    const Eigen::VectorXcd y = std::sqrt(double(N)) * sample.M.col(0).tail(N - 1);
    Eigen::MatrixXcd a = -mhat;
    a.diagonal().array() += z;
    const Eigen::VectorXcd ghat_y = a.partialPivLu().solve(y);
    const cplx quad = y.dot(ghat_y); // y^* Ghat y
    const cplx denom = z - sample.W11 / std::sqrt(double(N)) - sample.theta -
                       quad / static_cast<double>(N);
    CHECK(std::abs(g11 - 1.0 / denom) < 1e-10);
}

TEST_CASE("submatrix products match a dense oracle") {
    const int N = 60;
    const auto sample = sample_deformed(Deformation::build(diag_spec(2.0, N)), kGauss, 808);
    const cplx z1(0.5, 1.0), z2(-0.3, 2.0);
    ResolventRequest req;
    req.product_z2 = z2;
    const auto stats = resolvent_stats(sample, z1, req);

    const Eigen::MatrixXcd mhat = sample.M.bottomRightCorner(N - 1, N - 1);
    auto resolvent = [&](cplx z) {
        Eigen::MatrixXcd a = -mhat;
        a.diagonal().array() += z;
        return Eigen::MatrixXcd(a.inverse());
    };
    const Eigen::MatrixXcd g1 = resolvent(z1), g2 = resolvent(z2);
    cplx diag = 0.0;
    for (int i = 0; i < N - 1; ++i) diag += g1(i, i) * g2(i, i);
    diag /= (N - 1);
    const cplx trace = (g1 * g2).trace() / static_cast<double>(N);
    CHECK(std::abs(stats.diag_products - diag) < 1e-11);
    CHECK(std::abs(stats.trace_product - trace) < 1e-11);
}
