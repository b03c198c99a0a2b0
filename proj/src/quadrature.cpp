#include "sdw/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sdw {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix, weights are mu0 * (first eigenvector component)^2.
QuadRule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
    const int n = static_cast<int>(offdiag.size()) + 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(Eigen::VectorXd::Zero(n), offdiag);
    QuadRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = es.eigenvalues()(i);
        const double q0 = es.eigenvectors()(0, i);
        rule.w[i] = mu0 * q0 * q0;
    }
    return rule;
}

} // namespace

QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k) b(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    return golub_welsch(b, 2.0);
}

QuadRule gauss_legendre(int n, double a, double b) {
    QuadRule rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.x[i] = mid + half * rule.x[i];
        rule.w[i] *= half;
    }
    return rule;
}

QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
    Eigen::VectorXd b(n - 1);
    for (int k = 1; k < n; ++k) b(k - 1) = std::sqrt(0.5 * k);
    return golub_welsch(b, std::sqrt(std::numbers::pi));
}

std::vector<double> legendre_coeffs(std::span<const double> node_values) {
    const int n = static_cast<int>(node_values.size());
    QuadRule gl = gauss_legendre(n);
    // c_l = (2l+1)/2 * sum_i w_i P_l(x_i) f(x_i); the quadrature is exact
    // because deg(P_l * f) <= 2n-2.
    std::vector<double> coeffs(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double xi = gl.x[i];
        const double wf = gl.w[i] * node_values[i];
        double pm1 = 0.0, p = 1.0; // P_{l-1}, P_l
        for (int l = 0; l < n; ++l) {
            coeffs[l] += (2.0 * l + 1.0) / 2.0 * wf * p;
            const double pn = ((2.0 * l + 1.0) * xi * p - l * pm1) / (l + 1.0);
            pm1 = p;
            p = pn;
        }
    }
    return coeffs;
}

double legendre_eval(std::span<const double> coeffs, double t) {
    double acc = 0.0, pm1 = 0.0, p = 1.0;
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        acc += coeffs[l] * p;
        const double pn = ((2.0 * l + 1.0) * t * p - static_cast<double>(l) * pm1) / (l + 1.0);
        pm1 = p;
        p = pn;
    }
    return acc;
}

double legendre_antiderivative(std::span<const double> coeffs, double t) {
    // int_{-1}^t P_0 = t + 1; int_{-1}^t P_l = (P_{l+1}(t) - P_{l-1}(t)) / (2l+1)
    // using P_l(-1) cancellation.
    if (coeffs.empty()) return 0.0;
    double acc = coeffs[0] * (t + 1.0);
    double pm1 = 1.0, p = t; // P_0, P_1
    for (std::size_t l = 1; l < coeffs.size(); ++l) {
        const double pn = ((2.0 * l + 1.0) * t * p - static_cast<double>(l) * pm1) / (l + 1.0);
        acc += coeffs[l] * (pn - pm1) / (2.0 * l + 1.0);
        pm1 = p;
        p = pn;
    }
    return acc;
}

double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("extrapolate_to_zero: bad input sizes");
    std::vector<double> t(ys.begin(), ys.end());
    const std::size_t n = t.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            const double x0 = xs[i], x1 = xs[i + level];
            t[i] = (x0 * t[i + 1] - x1 * t[i]) / (x0 - x1);
        }
    }
    return t[0];
}

QuadRule simpson(double a, double b, int m) {
    if (m < 2) m = 2;
    if (m % 2 != 0) ++m;
    const double h = (b - a) / m;
    QuadRule rule;
    rule.x.resize(m + 1);
    rule.w.resize(m + 1);
    for (int i = 0; i <= m; ++i) {
        rule.x[i] = a + h * i;
        double c = (i == 0 || i == m) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        rule.w[i] = c * h / 3.0;
    }
    return rule;
}

} // namespace sdw
