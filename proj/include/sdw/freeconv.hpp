#pragma once

#include <array>
#include <span>

#include "sdw/measures.hpp"

namespace sdw {

struct SolverOptions {
    int max_iterations = 400;
    double tolerance = 1e-12;
    double damping = 0.5;
};

inline constexpr std::array<double, 3> kDefaultDensityEpsilons = {1e-2, 5e-3, 2.5e-3};

// Stieltjes transform g of lambda = semicircle(sigma2) boxplus nu, defined by
// the subordination fixed point g(z) = g_nu(z - sigma2 g(z)).
class FreeConvolution {
public:
    FreeConvolution(SpectralMeasure nu, double sigma2, SolverOptions opts = {});

    const SpectralMeasure& base() const { return base_; }
    double sigma2() const { return sigma2_; }
    const SolverOptions& options() const { return opts_; }

    // order 0: g(z); order 1: g'(z) by implicit differentiation at omega(z).
    // Real z are reached by a homotopy from the upper half plane and must lie
    // outside supp(lambda).
    cplx g(cplx z, int order = 0) const;

    cplx omega(cplx z) const { return z - sigma2_ * g(z); }

    // -(1/pi) Im g(x + i eps) extrapolated to eps = 0.
    double density(double x, std::span<const double> epsilons = kDefaultDensityEpsilons) const;

    bool is_outside_support(double x, double threshold = 1e-6) const;

    // Edge of supp(lambda) nearest to rho_theta on theta's side, found from the
    // critical point of H(u) = u + sigma2 g_nu(u).
    double bulk_edge_toward(double theta) const;
    // dist(rho_theta, supp(lambda)); positive iff theta generates an outlier.
    double outlier_clearance(double theta) const;

private:
    cplx solve_interior(cplx z) const;     // Im z != 0
    cplx solve_real_axis(double x) const;  // x outside supp(lambda)
    cplx g_at(cplx z) const;               // dispatch on Im z

    SpectralMeasure base_;
    double sigma2_;
    SolverOptions opts_;
};

inline cplx subordinated_g(const FreeConvolution& fc, cplx z, int order = 0) {
    return fc.g(z, order);
}
inline double density_at(const FreeConvolution& fc, double x,
                         std::span<const double> epsilons = kDefaultDensityEpsilons) {
    return fc.density(x, epsilons);
}
inline bool is_outside_support(const FreeConvolution& fc, double x) {
    return fc.is_outside_support(x);
}

} // namespace sdw
