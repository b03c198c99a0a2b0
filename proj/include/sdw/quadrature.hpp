#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdw {

// Nodes and weights of a quadrature rule.
struct QuadRule {
    std::vector<double> x;
    std::vector<double> w;
    std::size_t size() const { return x.size(); }
};

// Gauss-Legendre rule on [-1,1] (Golub-Welsch on the Jacobi matrix).
QuadRule gauss_legendre(int n);
// Gauss-Legendre rule mapped to [a,b].
QuadRule gauss_legendre(int n, double a, double b);

// Gauss-Hermite rule for weight exp(-x^2); sum w_i = sqrt(pi).
QuadRule gauss_hermite(int n);

// Legendre series for a polynomial known by its values at the n-point
// Gauss-Legendre nodes of [-1,1]. Exact for degree <= n-1.
std::vector<double> legendre_coeffs(std::span<const double> node_values);
// Evaluate sum c_l P_l(t).
double legendre_eval(std::span<const double> coeffs, double t);
// Evaluate int_{-1}^{t} sum c_l P_l(s) ds, exactly.
double legendre_antiderivative(std::span<const double> coeffs, double t);

// Polynomial extrapolation of (x_i, y_i) to x = 0 (Neville). Inputs need
// not be sorted; x_i must be pairwise distinct.
double extrapolate_to_zero(std::span<const double> xs, std::span<const double> ys);

// Composite Simpson nodes/weights on [a,b] with m panels (m rounded up to
// even, at least 2).
QuadRule simpson(double a, double b, int m);

} // namespace sdw
