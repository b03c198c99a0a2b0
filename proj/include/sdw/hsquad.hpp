#pragma once

#include <Eigen/Dense>
#include <functional>

#include "sdw/freeconv.hpp"
#include "sdw/measures.hpp"

namespace sdw {

// C^p plateau bump with polynomial smoothstep transitions of degree 2p+1:
// identically 1 on [center-delta, center+delta], 0 outside
// (center-2delta, center+2delta). All derivatives are evaluated exactly.
class SmoothBump {
public:
    SmoothBump(double center, double delta, int smoothness);

    double center() const { return center_; }
    double delta() const { return delta_; }
    int smoothness() const { return p_; }

    double eval(double x, int deriv = 0) const;
    // Per-piece analytic continuation (test oracle for complex-step checks).
    cplx eval_complex(cplx x, int deriv = 0) const;

private:
    double center_, delta_;
    int p_;
    // monomial coefficients of d^l/dt^l S_p for l = 0..2p+1
    std::vector<std::vector<double>> deriv_coeffs_;
};

// F_k almost-analytic extension of a bump h with vertical cutoff chi (same
// bump family, = 1 on [-L/2, L/2], supported in (-L, L)).
class AlmostAnalyticExtension {
public:
    AlmostAnalyticExtension(SmoothBump bump, double L, int k);

    const SmoothBump& bump() const { return bump_; }
    const SmoothBump& chi() const { return chi_; }
    int k() const { return k_; }
    double L() const { return L_; }

    cplx F(cplx z) const;
    cplx dbar(cplx z) const;

private:
    SmoothBump bump_;
    SmoothBump chi_;
    double L_;
    int k_;
};

inline cplx dbar_extension(const AlmostAnalyticExtension& ext, cplx z) { return ext.dbar(z); }

struct HsGrid {
    int nx = 400;      // nodes across [center-2delta, center+2delta]
    int ny = 400;      // nodes across the y segments
    double y_min = 0.0;
};

// (1/pi) int dbar F_k(h) phi d^2z by composite Simpson per smooth segment.
// With conj_symmetric_phi (phi(conj z) = conj phi(z)) only the upper half
// plane is sampled and the total is 2 Re of it. Columns are independent
// tasks; partial sums are reduced in column order, so the result does not
// depend on the thread count.
cplx hs_integral(const AlmostAnalyticExtension& ext,
                 const std::function<cplx(cplx)>& phi, const HsGrid& grid = {},
                 bool conj_symmetric_phi = true, int jobs = 0);

struct ResidueCheck {
    double integral = 0.0;
    double minus_residue = 0.0;
    double abs_diff = 0.0;
    double delta = 0.0;
    double rho = 0.0;
};

// HS integral of 1/(z - sigma2 g(z) - theta)^2 against -residue from the
// spike module. delta <= 0 selects min(0.1, clearance/4).
ResidueCheck residue_check(const SpectralMeasure& nu, double sigma2, double theta,
                           double delta = 0.0, int k = 3, const HsGrid& grid = {},
                           int jobs = 0);

struct BlockVarianceResult {
    double varZN = 0.0;
    double stderr_ = 0.0;
    int trials = 0;
    double rho = 0.0;
    double delta = 0.0;
};

// Monte Carlo estimator of Var(Z_N) for the block case: the resolvent kernel
// kappa_N is sampled over mc_trials draws of the sub-block Wigner matrix and
// pushed through the double HS quadrature. One set of draws is shared by all
// grid nodes. The identity holds for any k >= 1; k = 1 keeps the coarse
// default grid accurate (the quadrature constant grows like (y/delta)^k).
BlockVarianceResult block_variance_estimate(const Eigen::MatrixXcd& subA, const EntryLaw& law,
                                            double theta, int mc_trials,
                                            const HsGrid& grid = {48, 48, 0.0},
                                            std::uint64_t seed = 1, int k = 1, int jobs = 0);

} // namespace sdw
