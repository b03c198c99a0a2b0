#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/spike.hpp"

using namespace sdw;

namespace {
SpectralMeasure two_atoms() { return SpectralMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}); }
const EntryLaw kGauss{LawKind::gaussian, 1.0};
const EntryLaw kLaplace{LawKind::laplace, 1.0};

SpectralMeasure shifted(const SpectralMeasure& m, double s) {
    std::vector<Atom> atoms;
    for (const auto& a : m.atoms()) atoms.push_back({a.x + s, a.w});
    std::vector<AcPiece> pieces;
    for (const auto& p : m.pieces()) pieces.push_back({p.a + s, p.b + s, p.density});
    return SpectralMeasure(std::move(atoms), std::move(pieces));
}
} // namespace

TEST_CASE("outlier condition and margin") {
    auto [ok0, m0] = check_outlier_condition(SpectralMeasure::dirac(0.0), 1.0, 2.0);
    CHECK(ok0);
    CHECK(m0 == doctest::Approx(0.75).epsilon(1e-15));

    auto [ok1, m1] = check_outlier_condition(SpectralMeasure::dirac(0.0), 1.0, 1.0);
    CHECK_FALSE(ok1);
    CHECK(m1 == 0.0);

    auto [ok2, m2] = check_outlier_condition(two_atoms(), 1.0, 2.0);
    CHECK(ok2);
    CHECK(m2 == doctest::Approx(4.0 / 9.0).epsilon(1e-15));

    CHECK_THROWS_AS(check_outlier_condition(SpectralMeasure::dirac(0.0), 1.0, 0.0), DomainError);
}

TEST_CASE("point-mass spike constants against hand values") {
    // residues by hand for nu = delta_0, theta = 2, sigma2 = 1:
    // R_nu(0) = g''(2)/2 - tau/4 = 1/8 - 3/16 = -1/16, so A = 1/256;
    // B = int (g''(2)/(2.5-x) - tau^2/(2.5-x)^2)^2 dsc(x) = 1/24 via the
    // semicircle moments at rho = 2.5 (g' = -1/3, g'' = 16/27, g''' = -160/81)
    const auto pred = predict(SpectralMeasure::dirac(0.0), 1.0, 2.0, kGauss);
    CHECK(pred.rho == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(pred.tau == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(pred.c_eigenvalue == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(pred.v2_eigenvalue == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(pred.c_eigenvector == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pred.A_coef == doctest::Approx(1.0 / 256.0).epsilon(1e-14));
    CHECK(pred.B_coef == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    CHECK(pred.varZ == doctest::Approx(1.0 / 24.0).epsilon(1e-14));
    CHECK_FALSE(pred.near_critical);

    const auto lap = predict(SpectralMeasure::dirac(0.0), 1.0, 2.0, kLaplace);
    CHECK(lap.varZ == doctest::Approx(73.0 / 1536.0).epsilon(1e-14));
    CHECK(lap.v2_eigenvalue == doctest::Approx(17.0 / 24.0).epsilon(1e-14));

    CHECK_THROWS_AS(predict(SpectralMeasure::dirac(0.0), 1.0, 1.0, kGauss), DomainError);
}

TEST_CASE("finite-N centerings") {
    const std::vector<double> zeros3 = {0.0, 0.0, 0.0};
    auto [tau3, rho3] = finite_n_centerings(zeros3, 1.0, 2.0);
    CHECK(tau3 == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(rho3 == doctest::Approx(2.5).epsilon(1e-15));

    const std::vector<double> pm = {-1.0, 1.0};
    auto [tau2, rho2] = finite_n_centerings(pm, 1.0, 2.0);
    CHECK(tau2 == doctest::Approx(4.0 / 9.0).epsilon(1e-15));
    CHECK(rho2 == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

    const auto qs = discretize_quantiles(SpectralMeasure::uniform(-1.0, 1.0), 400);
    auto [tau_u, rho_u] = finite_n_centerings(qs, 1.0, 2.0);
    CHECK(std::abs(tau_u - 2.0 / 3.0) < 5e-3);
    CHECK(std::abs(rho_u - (2.0 + 0.5 * std::log(3.0))) < 5e-3);

    CHECK_THROWS_AS(finite_n_centerings(std::vector<double>{2.0}, 1.0, 2.0), DomainError);
}

TEST_CASE("subordination identity residual") {
    CHECK(subordination_identity_residual(SpectralMeasure::dirac(0.0), 1.0, 2.0) < 1e-9);
    CHECK(subordination_identity_residual(two_atoms(), 1.0, 2.0) < 1e-7);
    CHECK(subordination_identity_residual(SpectralMeasure::dirac(0.0), 1e-10, 2.0) < 1e-8);
}

TEST_CASE("residue at rho") {
    CHECK(residue_at_rho(SpectralMeasure::dirac(0.0), 1.0, 2.0) ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(residue_at_rho(two_atoms(), 1.0, 2.0) == doctest::Approx(28.0 / 27.0).epsilon(1e-14));
    // linear in sigma2 (theta chosen so the condition holds for both)
    const double r1 = residue_at_rho(SpectralMeasure::dirac(0.0), 1.0, 3.0);
    const double r2 = residue_at_rho(SpectralMeasure::dirac(0.0), 2.0, 3.0);
    CHECK(r2 == doctest::Approx(2.0 * r1).epsilon(1e-14));
}

TEST_CASE("internal consistency identities") {
    const auto measures = {SpectralMeasure::dirac(0.0), two_atoms(),
                           SpectralMeasure::uniform(-1.0, 1.0)};
    for (const auto& nu : measures) {
        const auto pred = predict(nu, 1.0, 2.0, kGauss);
        CHECK(pred.c_eigenvector == residue_at_rho(nu, 1.0, 2.0)); // same formula, two paths
        // Gaussian case collapses to the full-rank GUE limit variance
        CHECK(pred.v2_eigenvalue + 1.0 == doctest::Approx(1.0 / pred.tau).epsilon(1e-12));
        CHECK(pred.A_coef >= 0.0); // squared residues integrated
        CHECK(pred.B_coef >= 0.0);
        CHECK(pred.varZ >= 0.0);
        // the negative-kurtosis law keeps the variance nonnegative too
        CHECK(predict(nu, 1.0, 2.0, EntryLaw(LawKind::uniform, 1.0)).varZ >= 0.0);
        CHECK(subordination_identity_residual(nu, 1.0, 2.0) < 1e-7);
    }
}

TEST_CASE("zero-weight atoms and shifts") {
    const auto nu = two_atoms();
    const auto nu_padded =
        SpectralMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}, {0.3, 0.0}});
    const auto a = predict(nu, 1.0, 2.0, kGauss);
    const auto b = predict(nu_padded, 1.0, 2.0, kGauss);
    CHECK(a.rho == b.rho);
    CHECK(a.varZ == b.varZ);

    const double s = 0.7;
    const auto c = predict(shifted(nu, s), 1.0, 2.0 + s, kGauss);
    CHECK(c.rho == doctest::Approx(a.rho + s).epsilon(1e-13));
    CHECK(c.tau == doctest::Approx(a.tau).epsilon(1e-13));
    CHECK(c.varZ == doctest::Approx(a.varZ).epsilon(1e-12));
    CHECK(c.c_eigenvector == doctest::Approx(a.c_eigenvector).epsilon(1e-12));
}
