#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sdw/quadrature.hpp"

using namespace sdw;

namespace {
double integrate(const QuadRule& rule, double (*f)(double)) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.w[i] * f(rule.x[i]);
    return acc;
}
} // namespace

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1 exactly") {
    QuadRule gl = gauss_legendre(5);
    // int_{-1}^{1} x^k
    for (int k = 0; k <= 9; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < gl.size(); ++i) acc += gl.w[i] * std::pow(gl.x[i], k);
        const double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
        CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("mapped gauss-legendre and smooth integrands") {
    QuadRule gl = gauss_legendre(32, 0.0, 2.0);
    CHECK(integrate(gl, [](double x) { return std::exp(x); }) ==
          doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
    double mass = 0.0;
    for (double w : gl.w) mass += w;
    CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gauss-hermite moments") {
    QuadRule gh = gauss_hermite(40);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < gh.size(); ++i) {
        m0 += gh.w[i];
        m2 += gh.w[i] * gh.x[i] * gh.x[i];
    }
    CHECK(m0 == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-13));
}

TEST_CASE("legendre series reproduces nodal polynomials and antiderivatives") {
    // f(x) = 1 + 2x - x^2 + 0.5 x^3 sampled at 8 GL nodes
    auto f = [](double x) { return 1.0 + 2.0 * x - x * x + 0.5 * x * x * x; };
    auto F = [](double x) { // antiderivative with F(-1) = 0
        auto prim = [](double t) { return t + t * t - t * t * t / 3.0 + t * t * t * t / 8.0; };
        return prim(x) - prim(-1.0);
    };
    QuadRule gl = gauss_legendre(8);
    std::vector<double> values(gl.size());
    for (std::size_t i = 0; i < gl.size(); ++i) values[i] = f(gl.x[i]);
    const auto coeffs = legendre_coeffs(values);
    for (double t : {-0.9, -0.3, 0.0, 0.4, 1.0}) {
        CHECK(legendre_eval(coeffs, t) == doctest::Approx(f(t)).epsilon(1e-13));
        CHECK(legendre_antiderivative(coeffs, t) == doctest::Approx(F(t)).epsilon(1e-13));
    }
}

TEST_CASE("extrapolation to zero removes polynomial error terms") {
    const std::vector<double> xs = {0.1, 0.05, 0.025};
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        ys[i] = 3.0 + 2.0 * xs[i] + 7.0 * xs[i] * xs[i];
    CHECK(extrapolate_to_zero(xs, ys) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("composite simpson converges at fourth order") {
    auto sum = [](int m) {
        QuadRule rule = simpson(0.0, std::numbers::pi, m);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.w[i] * std::sin(rule.x[i]);
        return acc;
    };
    const double e1 = std::abs(sum(16) - 2.0);
    const double e2 = std::abs(sum(32) - 2.0);
    CHECK(e1 / e2 > 12.0);
    CHECK(e2 < 1e-5);
}
