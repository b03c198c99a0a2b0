#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/hsquad.hpp"
#include "sdw/rmt.hpp"
#include "sdw/spike.hpp"

using namespace sdw;
using namespace std::complex_literals;

namespace {

// Complex-step dbar oracle. F = u + iv with
//   u = chi(y) sum_{l even} (-1)^{l/2} y^l/l! h^{(l)}(x)
//   v = chi(y) sum_{l odd}  (-1)^{(l-1)/2} y^l/l! h^{(l)}(x)
// and each sum extends analytically in x or y separately.
cplx dbar_complex_step(const AlmostAnalyticExtension& ext, double x, double y) {
    const double eps = 1e-20;
    const int k = ext.k();
    auto part = [&](bool even_part, cplx zx, cplx zy) {
        cplx acc = 0.0;
        double factorial = 1.0;
        cplx ypow = 1.0;
        for (int l = 0; l <= k; ++l) {
            if (l > 0) {
                factorial *= l;
                ypow *= zy;
            }
            const bool even = l % 2 == 0;
            if (even != even_part) continue;
            const double sign = (even ? ((l / 2) % 2 == 0 ? 1.0 : -1.0)
                                      : (((l - 1) / 2) % 2 == 0 ? 1.0 : -1.0));
            acc += sign * ypow / factorial * ext.bump().eval_complex(zx, l);
        }
        return acc * ext.chi().eval_complex(zy, 0);
    };
    const double ux = std::imag(part(true, cplx(x, eps), cplx(y, 0.0))) / eps;
    const double vx = std::imag(part(false, cplx(x, eps), cplx(y, 0.0))) / eps;
    const double uy = std::imag(part(true, cplx(x, 0.0), cplx(y, eps))) / eps;
    const double vy = std::imag(part(false, cplx(x, 0.0), cplx(y, eps))) / eps;
    return cplx(0.5 * (ux - vy), 0.5 * (vx + uy));
}

SpectralMeasure two_atoms() { return SpectralMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}}); }

} // namespace

TEST_CASE("bump plateau, support and smoothness") {
    SmoothBump h(2.5, 0.1, 4);
    CHECK(h.eval(2.5) == 1.0);
    CHECK(h.eval(2.6) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.eval(2.4) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.eval(2.7) == 0.0);
    CHECK(h.eval(2.29) == 0.0);
    CHECK(h.eval(2.31) > 0.0); // inside the rising transition
    CHECK(h.eval(2.31) < 0.01);
    const double mid = h.eval(2.65);
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    for (double x = 2.29; x <= 2.71; x += 0.007) {
        CHECK(h.eval(x) >= 0.0);
        CHECK(h.eval(x) <= 1.0);
    }
    // C^p junctions: one-sided derivative values up to order p approach each
    // other at the rate set by the next derivative (|h^(l+1)| ~ delta^-(l+1))
    for (int l = 0; l <= 4; ++l) {
        double lipschitz = 1.0;
        for (double t = 2.3; t < 2.7; t += 1e-4)
            lipschitz = std::max(lipschitz, std::abs(h.eval(t, l + 1)));
        const double step = 1e-9;
        for (double x0 : {2.4, 2.6, 2.3, 2.7}) {
            const double left = h.eval(x0 - step, l);
            const double right = h.eval(x0 + step, l);
            CHECK(std::abs(left - right) <= 2.0 * lipschitz * step + 1e-14);
        }
    }
    // exact transition derivatives against finite differences of eval
    for (int l = 1; l <= 3; ++l) {
        const double x = 2.655, step = 1e-6;
        const double fd = (h.eval(x + step, l - 1) - h.eval(x - step, l - 1)) / (2.0 * step);
        CHECK(h.eval(x, l) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("dbar vanishes where it must") {
    AlmostAnalyticExtension ext(SmoothBump(0.0, 0.2, 4), 1.0, 3);
    for (double x : {-0.19, 0.0, 0.1, 0.19})
        for (double y : {-0.49, -0.1, 0.0, 0.2, 0.49})
            CHECK(ext.dbar(cplx(x, y)) == cplx(0.0, 0.0)); // plateau x, inner chi
    for (double x : {-0.5, 0.41, 7.0})
        for (double y : {0.0, 0.3, 0.9})
            CHECK(ext.dbar(cplx(x, y)) == cplx(0.0, 0.0)); // outside bump support
    for (double y : {-1.0, 1.0, 2.5})
        CHECK(ext.dbar(cplx(0.3, y)) == cplx(0.0, 0.0)); // outside chi support
    // F restricts to h on the real axis
    for (double x : {-0.3, 0.05, 0.33})
        CHECK(ext.F(cplx(x, 0.0)) == cplx(ext.bump().eval(x), 0.0));
}

TEST_CASE("dbar agrees with the complex-step derivative of F") {
    for (int k : {2, 3}) {
        AlmostAnalyticExtension ext(SmoothBump(0.0, 0.2, k + 2), 1.0, k);
        // transition band with chi = 1, band with chi' != 0, plateau with chi' != 0
        const std::vector<std::pair<double, double>> pts = {
            {0.27, 0.2},  {-0.33, 0.41}, {0.31, 0.77}, {-0.29, -0.63},
            {0.05, 0.88}, {0.37, -0.92}, {0.23, 0.49}};
        for (auto [x, y] : pts) {
            const cplx exact = ext.dbar(cplx(x, y));
            const cplx oracle = dbar_complex_step(ext, x, y);
            CHECK(std::abs(exact - oracle) <= 1e-10 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("hs integral of analytic integrands vanishes") {
    AlmostAnalyticExtension ext(SmoothBump(2.5, 0.1, 4), 0.6, 3);
    // no pole to resolve, so the 1e-6 target just needs enough panels
    const HsGrid grid{1200, 1200, 0.0};
    CHECK(hs_integral(ext, [](cplx) { return cplx(0.0); }, grid) == cplx(0.0));
    CHECK(std::abs(hs_integral(ext, [](cplx) { return cplx(1.0); }, grid)) < 1e-6);
    CHECK(std::abs(hs_integral(ext, [](cplx z) { return z * z; }, grid)) < 1e-6);
    // pole outside the bump support contributes nothing
    CHECK(std::abs(hs_integral(ext, [](cplx z) { return 1.0 / (z - 3.2); }, grid)) < 1e-6);
}

TEST_CASE("hs integral picks up minus the residue of a simple pole") {
    AlmostAnalyticExtension ext(SmoothBump(2.5, 0.1, 4), 0.6, 3);
    auto phi = [](cplx z) { return 1.0 / (z - 2.5); };
    const cplx val = hs_integral(ext, phi);
    CHECK(std::abs(val - cplx(-1.0)) < 1e-3);
    // halves of the reflection trick agree with full integration
    const cplx full = hs_integral(ext, phi, {}, false);
    CHECK(std::abs(val - full) < 1e-10);
}

TEST_CASE("residue check for the test measures") {
    const auto rc0 = residue_check(SpectralMeasure::dirac(0.0), 1.0, 2.0);
    CHECK(rc0.minus_residue == doctest::Approx(-0.25).epsilon(1e-14));
    CHECK(rc0.abs_diff < 1e-3);

    const auto rc2 = residue_check(two_atoms(), 1.0, 2.0);
    CHECK(rc2.minus_residue == doctest::Approx(-28.0 / 27.0).epsilon(1e-13));
    CHECK(rc2.abs_diff < 1e-3);

    CHECK_THROWS_AS((void)residue_check(SpectralMeasure::dirac(0.0), 1.0, 1.0), DomainError);
    // a bump wide enough to hit supp(lambda) is rejected
    CHECK_THROWS_AS((void)residue_check(SpectralMeasure::dirac(0.0), 1.0, 2.0, 0.4), DomainError);
}

TEST_CASE("variance coefficients match an independent quadrature route") {
    // A = int I_A(x)^2 dnu and B = int I_B(x)^2 dlambda with the inner
    // integrals evaluated by the HS machinery and the lambda density by
    // Stieltjes inversion; compared against predict()'s closed forms.
    const EntryLaw gauss(LawKind::gaussian, 1.0);
    for (const auto& nu : {SpectralMeasure::dirac(0.0), two_atoms()}) {
        const double sigma2 = 1.0, theta = 2.0;
        const auto pred = predict(nu, sigma2, theta, gauss);
        FreeConvolution fc(nu, sigma2);
        const double delta = std::min(0.1, 0.25 * fc.outlier_clearance(theta));
        AlmostAnalyticExtension ext(SmoothBump(pred.rho, delta, 2), std::min(1.0, 6 * delta), 1);
        const HsGrid grid{96, 96, 0.0};

        auto inner = [&](double x, bool nu_side) {
            auto phi = [&](cplx z) {
                const cplx om = z - sigma2 * fc.g(z);
                const cplx den = om - theta;
                return 1.0 / (den * den * ((nu_side ? om : z) - x));
            };
            return hs_integral(ext, phi, grid).real();
        };

        const double A = nu.integrate([&](double x) {
            const double ia = inner(x, true);
            return ia * ia;
        });
        CHECK(A == doctest::Approx(pred.A_coef).epsilon(2e-3));

        // lambda integral over the bulk by Simpson on the inverted density;
        // the integrand spikes within dist(rho, edge) of the upper edge, so
        // that strip gets its own panels
        const double hi = fc.bulk_edge_toward(theta) + 1e-3;
        const double lo = -hi; // both test measures are symmetric
        const double cut = hi - std::min(1.0, (hi - lo) / 4.0);
        double B = 0.0;
        for (auto [a, b, panels] :
             {std::tuple{lo, cut, 60}, std::tuple{cut, hi, 240}}) {
            const double h = (b - a) / panels;
            double acc = 0.0;
            for (int i = 0; i <= panels; ++i) {
                const double x = a + i * h;
                const double ib = inner(x, false);
                const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
                acc += w * ib * ib * fc.density(x);
            }
            B += acc * h / 3.0;
        }
        CHECK(B == doctest::Approx(pred.B_coef).epsilon(2e-2));
    }
}

TEST_CASE("doubling the grid cuts the quadrature error by at least 4x") {
    const HsGrid coarse{200, 200, 0.0};
    const HsGrid fine{400, 400, 0.0};
    const auto e1 = residue_check(SpectralMeasure::dirac(0.0), 1.0, 2.0, 0.0, 3, coarse).abs_diff;
    const auto e2 = residue_check(SpectralMeasure::dirac(0.0), 1.0, 2.0, 0.0, 3, fine).abs_diff;
    CHECK(e1 / e2 >= 4.0);
}

TEST_CASE("block variance estimator smoke and determinism") {
    const EntryLaw gauss(LawKind::gaussian, 1.0);
    CHECK(0.5 * (gauss.m4() - 3.0) == 0.0); // kurtosis weight vanishes exactly

    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(60, 60);
    const auto a = block_variance_estimate(zero, gauss, 2.0, 6, {48, 48, 0.0}, 17);
    const auto b = block_variance_estimate(zero, gauss, 2.0, 6, {48, 48, 0.0}, 17);
    CHECK(a.varZN == b.varZN);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.varZN > 0.02);
    CHECK(a.varZN < 0.09); // near varZ = 1/24 at this block size

    // Haar-rotating the zero block is exactly the zero block
    DeformationSpec spec{2.0, std::vector<double>(60, 0.0), 5};
    const auto rotated = Deformation::build(spec).A.bottomRightCorner(60, 60);
    const auto c = block_variance_estimate(rotated, gauss, 2.0, 6, {48, 48, 0.0}, 17);
    CHECK(c.varZN == a.varZN);

    CHECK_THROWS_AS((void)block_variance_estimate(zero, gauss, 0.5, 6, {48, 48, 0.0}, 1), DomainError);
}
