#include "sdw/freeconv.hpp"

#include <cmath>
#include <numbers>

#include "sdw/errors.hpp"

namespace sdw {

namespace {
// Real evaluations during edge-finding may approach the support; bypass the
// public proximity guard.
constexpr double kNoGuard = 0.0;
} // namespace

FreeConvolution::FreeConvolution(SpectralMeasure nu, double sigma2, SolverOptions opts)
    : base_(std::move(nu)), sigma2_(sigma2), opts_(opts) {
    if (!(sigma2 > 0.0)) throw DomainError("free convolution requires sigma2 > 0");
}

cplx FreeConvolution::solve_interior(cplx z) const {
    // Damped fixed point g <- (1-d) g + d g_nu(z - sigma2 g), then Newton.
    const double d = opts_.damping;
    cplx g = 1.0 / z;
    double residual = std::numeric_limits<double>::infinity();
    const int damped_budget = std::min(200, opts_.max_iterations);
    for (int it = 0; it < damped_budget; ++it) {
        const cplx t = base_.stieltjes(z - sigma2_ * g, 0, kNoGuard);
        residual = std::abs(g - t);
        if (residual < opts_.tolerance) return g;
        g = (1.0 - d) * g + d * t;
    }
    for (int it = damped_budget; it < opts_.max_iterations; ++it) {
        const cplx omega = z - sigma2_ * g;
        const cplx f = g - base_.stieltjes(omega, 0, kNoGuard);
        residual = std::abs(f);
        if (residual < opts_.tolerance) return g;
        const cplx fp = 1.0 + sigma2_ * base_.stieltjes(omega, 1, kNoGuard);
        cplx step = f / fp;
        // crude backtracking; the damped warm start usually makes this a no-op
        for (int half = 0; half < 30; ++half) {
            const cplx trial = g - step;
            const cplx ft = trial - base_.stieltjes(z - sigma2_ * trial, 0, kNoGuard);
            if (std::abs(ft) < residual) {
                g = trial;
                break;
            }
            step *= 0.5;
            if (half == 29) g -= step;
        }
    }
    const cplx f = g - base_.stieltjes(z - sigma2_ * g, 0, kNoGuard);
    if (std::abs(f) < opts_.tolerance) return g;
    throw SolverError("subordination fixed point did not converge", std::abs(f));
}

cplx FreeConvolution::solve_real_axis(double x) const {
    // Continuation from C+: z + i eta with eta halving over 10 steps, then a
    // Newton polish on the axis.
    cplx g = 0.0;
    double eta = 1.0;
    for (int step = 0; step < 10; ++step) {
        g = solve_interior(cplx(x, eta));
        eta *= 0.5;
    }
    const cplx z(x, 0.0);
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < opts_.max_iterations; ++it) {
        const cplx omega = z - sigma2_ * g;
        const cplx f = g - base_.stieltjes(omega, 0, kNoGuard);
        residual = std::abs(f);
        if (residual < opts_.tolerance) break;
        const cplx fp = 1.0 + sigma2_ * base_.stieltjes(omega, 1, kNoGuard);
        g -= f / fp;
    }
    if (residual >= opts_.tolerance)
        throw SolverError("real-axis subordination solve did not converge", residual);
    if (std::abs(g.imag()) > 1e-8 * std::max(1.0, std::abs(g.real())))
        throw DomainError("real evaluation point appears to lie inside supp(lambda)");
    return cplx(g.real(), 0.0);
}

cplx FreeConvolution::g_at(cplx z) const {
    if (z.imag() != 0.0) return solve_interior(z);
    return solve_real_axis(z.real());
}

cplx FreeConvolution::g(cplx z, int order) const {
    if (order != 0 && order != 1) throw DomainError("subordinated_g: order must be 0 or 1");
    const cplx g0 = g_at(z);
    if (order == 0) return g0;
    const cplx omega = z - sigma2_ * g0;
    const cplx gp = base_.stieltjes(omega, 1, kNoGuard);
    return gp / (1.0 + sigma2_ * gp);
}

double FreeConvolution::density(double x, std::span<const double> epsilons) const {
    if (epsilons.empty()) throw DomainError("density_at: epsilons must be nonempty");
    std::vector<double> xs(epsilons.begin(), epsilons.end());
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw DomainError("density_at: epsilons must be positive");
        const cplx gi = solve_interior(cplx(x, xs[i]));
        ys[i] = -gi.imag() / std::numbers::pi;
    }
    return extrapolate_to_zero(xs, ys);
}

bool FreeConvolution::is_outside_support(double x, double threshold) const {
    try {
        if (density(x) >= threshold) return false;
        solve_real_axis(x); // throws unless g extends real-analytically
        return true;
    } catch (const SolverError&) {
        return false;
    } catch (const DomainError&) {
        return false;
    }
}

double FreeConvolution::bulk_edge_toward(double theta) const {
    // Critical point of H(u) = u + sigma2 g_nu(u): the edge of supp(lambda) on
    // theta's side is H(u*) with 1 - sigma2 int dnu/(u*-x)^2 = 0.
    const auto margin = [&](double u) {
        return 1.0 + sigma2_ * base_.stieltjes(cplx(u, 0.0), 1, kNoGuard).real();
    };
    const auto H = [&](double u) {
        return u + sigma2_ * base_.stieltjes(cplx(u, 0.0), 0, kNoGuard).real();
    };

    double lo, hi;
    bool above;
    if (theta > base_.support_max()) {
        above = true;
        lo = base_.support_max();
        hi = theta;
    } else if (theta < base_.support_min()) {
        above = false;
        lo = base_.support_min();
        hi = theta;
    } else {
        // theta sits in a gap of supp(nu): bracket against the gap edge on the
        // side facing theta's nearest support point below/above.
        if (base_.support_distance(theta) == 0.0)
            throw DomainError("bulk_edge_toward: theta lies in supp(nu)");
        double below = -std::numeric_limits<double>::infinity();
        double above_pt = std::numeric_limits<double>::infinity();
        for (const auto& atom : base_.atoms()) {
            if (atom.x < theta) below = std::max(below, atom.x);
            if (atom.x > theta) above_pt = std::min(above_pt, atom.x);
        }
        for (const auto& piece : base_.pieces()) {
            if (piece.b < theta) below = std::max(below, piece.b);
            if (piece.a > theta) above_pt = std::min(above_pt, piece.a);
        }
        // use the closer side; clearance on the other side is handled by the caller
        above = (theta - below) <= (above_pt - theta);
        lo = above ? below : above_pt;
        hi = theta;
    }

    if (!(margin(hi) > 0.0))
        throw DomainError("bulk_edge_toward: theta violates the outlier condition");
    const double offset = 1e-12 * std::max(1.0, std::abs(lo));
    const double lo_inner = above ? lo + offset : lo - offset;
    if (margin(lo_inner) > 0.0) return H(lo_inner); // no critical point: soft edge
    double a = lo_inner, b = hi;
    for (int it = 0; it < 120; ++it) {
        const double mid = 0.5 * (a + b);
        if (margin(mid) > 0.0)
            b = mid;
        else
            a = mid;
    }
    return H(0.5 * (a + b));
}

double FreeConvolution::outlier_clearance(double theta) const {
    const double rho =
        theta + sigma2_ * base_.stieltjes(cplx(theta, 0.0), 0, kNoGuard).real();
    const double edge = bulk_edge_toward(theta);
    return std::abs(rho - edge);
}

} // namespace sdw
