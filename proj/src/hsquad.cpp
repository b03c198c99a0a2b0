#include "sdw/hsquad.hpp"

#include <cmath>
#include <numbers>

#include "sdw/errors.hpp"
#include "sdw/la.hpp"
#include "sdw/parallel.hpp"
#include "sdw/quadrature.hpp"
#include "sdw/rmt.hpp"
#include "sdw/spike.hpp"

namespace sdw {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

// Generalized smoothstep S_p on [0,1]: degree 2p+1, S(0)=0, S(1)=1, with p
// vanishing derivatives at both ends.
std::vector<double> smoothstep_coeffs(int p) {
    std::vector<double> c(2 * p + 2, 0.0);
    for (int k = 0; k <= p; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        c[static_cast<std::size_t>(p + k + 1)] = sign * binom(p + k, k) * binom(2 * p + 1, p - k);
    }
    return c;
}

std::vector<double> poly_derivative(const std::vector<double>& c) {
    if (c.size() <= 1) return {0.0};
    std::vector<double> d(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
    return d;
}

template <class T>
T horner(const std::vector<double>& c, T t) {
    T acc{};
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
    return acc;
}

} // namespace

// ---------------------------------------------------------------------------
// SmoothBump
// ---------------------------------------------------------------------------

SmoothBump::SmoothBump(double center, double delta, int smoothness)
    : center_(center), delta_(delta), p_(smoothness) {
    if (!(delta > 0.0)) throw DomainError("bump requires delta > 0");
    if (smoothness < 1) throw DomainError("bump smoothness must be >= 1");
    deriv_coeffs_.push_back(smoothstep_coeffs(p_));
    for (int l = 1; l <= 2 * p_ + 1; ++l)
        deriv_coeffs_.push_back(poly_derivative(deriv_coeffs_.back()));
}

double SmoothBump::eval(double x, int deriv) const {
    const double u = x - center_;
    if (std::abs(u) <= delta_) return deriv == 0 ? 1.0 : 0.0;
    if (std::abs(u) >= 2.0 * delta_) return 0.0;
    if (deriv >= static_cast<int>(deriv_coeffs_.size())) return 0.0;
    const double scale = std::pow(1.0 / delta_, deriv);
    if (u > 0.0) {
        const double t = (2.0 * delta_ - u) / delta_;
        const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
        return sign * scale * horner(deriv_coeffs_[static_cast<std::size_t>(deriv)], t);
    }
    const double t = (u + 2.0 * delta_) / delta_;
    return scale * horner(deriv_coeffs_[static_cast<std::size_t>(deriv)], t);
}

cplx SmoothBump::eval_complex(cplx x, int deriv) const {
    const double u = x.real() - center_;
    if (std::abs(u) <= delta_) return deriv == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    if (std::abs(u) >= 2.0 * delta_) return 0.0;
    if (deriv >= static_cast<int>(deriv_coeffs_.size())) return 0.0;
    const double scale = std::pow(1.0 / delta_, deriv);
    if (u > 0.0) {
        const cplx t = (cplx(center_ + 2.0 * delta_, 0.0) - x) / delta_;
        const double sign = (deriv % 2 == 0) ? 1.0 : -1.0;
        return sign * scale * horner(deriv_coeffs_[static_cast<std::size_t>(deriv)], t);
    }
    const cplx t = (x - cplx(center_ - 2.0 * delta_, 0.0)) / delta_;
    return scale * horner(deriv_coeffs_[static_cast<std::size_t>(deriv)], t);
}

// ---------------------------------------------------------------------------
// AlmostAnalyticExtension
// ---------------------------------------------------------------------------

AlmostAnalyticExtension::AlmostAnalyticExtension(SmoothBump bump, double L, int k)
    : bump_(std::move(bump)), chi_(0.0, 0.5 * L, bump_.smoothness()), L_(L), k_(k) {
    if (k < 1) throw DomainError("almost-analytic extension requires k >= 1");
    if (k + 1 > bump_.smoothness())
        throw DomainError("need k + 1 <= bump smoothness for exact dbar");
}

cplx AlmostAnalyticExtension::F(cplx z) const {
    const double x = z.real(), y = z.imag();
    const double chi = chi_.eval(y);
    if (chi == 0.0) return 0.0;
    cplx sum = 0.0, iy_pow = 1.0;
    double factorial = 1.0;
    for (int l = 0; l <= k_; ++l) {
        if (l > 0) {
            iy_pow *= cplx(0.0, y);
            factorial *= l;
        }
        sum += iy_pow / factorial * bump_.eval(x, l);
    }
    return chi * sum;
}

cplx AlmostAnalyticExtension::dbar(cplx z) const {
    const double x = z.real(), y = z.imag();
    const double chi = chi_.eval(y);
    const double chi_p = chi_.eval(y, 1);
    if (chi == 0.0 && chi_p == 0.0) return 0.0;
    cplx sum = 0.0, iy_pow = 1.0;
    double factorial = 1.0;
    for (int l = 0; l <= k_; ++l) {
        if (l > 0) {
            iy_pow *= cplx(0.0, y);
            factorial *= l;
        }
        if (chi_p != 0.0) sum += iy_pow / factorial * bump_.eval(x, l);
    }
    // (iy)^k / k! already accumulated; one more power for the first term
    cplx first = 0.0;
    if (chi != 0.0) first = 0.5 * chi * iy_pow / factorial * bump_.eval(x, k_ + 1);
    return first + cplx(0.0, 0.5) * chi_p * sum;
}

// ---------------------------------------------------------------------------
// HS quadrature
// ---------------------------------------------------------------------------

namespace {

// Simpson nodes per smooth segment; counts are split so that doubling the
// grid doubles every segment.
QuadRule x_rule(const SmoothBump& h, int nx) {
    const double c = h.center(), d = h.delta();
    const int band = std::max(2, nx / 4);
    const int mid = std::max(2, nx / 2);
    QuadRule rule;
    for (const auto& [a, b, m] : {std::tuple{c - 2 * d, c - d, band},
                                  std::tuple{c - d, c + d, mid},
                                  std::tuple{c + d, c + 2 * d, band}}) {
        QuadRule seg = simpson(a, b, m);
        rule.x.insert(rule.x.end(), seg.x.begin(), seg.x.end());
        rule.w.insert(rule.w.end(), seg.w.begin(), seg.w.end());
    }
    return rule;
}

// The integrand varies on the bump scale delta near the axis (the pole sits
// on the real line), so [y_min, 2 delta] gets its own panels.
QuadRule y_rule(double L, double y_min, int ny, double delta) {
    const int half = std::max(2, ny / 2);
    const double split = std::min(2.0 * delta, 0.5 * L);
    QuadRule rule;
    for (const auto& [a, b, m] : {std::tuple{y_min, split, half},
                                  std::tuple{split, 0.5 * L, half},
                                  std::tuple{0.5 * L, L, half}}) {
        if (!(a < b)) continue;
        QuadRule seg = simpson(a, b, m);
        rule.x.insert(rule.x.end(), seg.x.begin(), seg.x.end());
        rule.w.insert(rule.w.end(), seg.w.begin(), seg.w.end());
    }
    return rule;
}

} // namespace

cplx hs_integral(const AlmostAnalyticExtension& ext, const std::function<cplx(cplx)>& phi,
                 const HsGrid& grid, bool conj_symmetric_phi, int jobs) {
    const QuadRule xs = x_rule(ext.bump(), grid.nx);
    const QuadRule ys = y_rule(ext.L(), grid.y_min, grid.ny, ext.bump().delta());

    auto column = [&](std::size_t i) {
        cplx acc = 0.0;
        const double x = xs.x[i], wx = xs.w[i];
        for (std::size_t j = 0; j < ys.size(); ++j) {
            for (int side = 0; side < (conj_symmetric_phi ? 1 : 2); ++side) {
                const double y = side == 0 ? ys.x[j] : -ys.x[j];
                if (y == 0.0 && side == 1) continue;
                const cplx z(x, y);
                const cplx db = ext.dbar(z);
                if (db == cplx(0.0, 0.0)) continue;
                const cplx value = phi(z);
                if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
                    throw SolverError("hs_integral: non-finite integrand sample",
                                      std::abs(db));
                acc += wx * ys.w[j] * db * value;
            }
        }
        return acc;
    };

    const auto partials = map_indexed<cplx>(xs.size(), jobs, column);
    cplx total = 0.0;
    for (const cplx& p : partials) total += p;
    if (conj_symmetric_phi) total += std::conj(total);
    return total / std::numbers::pi;
}

ResidueCheck residue_check(const SpectralMeasure& nu, double sigma2, double theta, double delta,
                           int k, const HsGrid& grid, int jobs) {
    auto [ok, margin] = check_outlier_condition(nu, sigma2, theta);
    if (!ok) throw DomainError("residue_check: spike has no outlier");

    FreeConvolution fc(nu, sigma2);
    const double rho = theta + sigma2 * nu.stieltjes(cplx(theta, 0.0)).real();
    const double clearance = fc.outlier_clearance(theta);
    if (delta <= 0.0) delta = std::min(0.1, 0.25 * clearance);
    if (2.0 * delta >= clearance)
        throw DomainError("residue_check: bump support would reach supp(lambda)");

    // cutoff on the bump scale: the F_k terms grow like (y/delta)^k, so a
    // fixed-height chi would make the quadrature cancel catastrophically
    AlmostAnalyticExtension ext(SmoothBump(rho, delta, k + 1), std::min(1.0, 6.0 * delta), k);
    auto phi = [&](cplx z) {
        const cplx den = z - sigma2 * fc.g(z) - theta;
        return 1.0 / (den * den);
    };
    ResidueCheck out;
    out.integral = hs_integral(ext, phi, grid, true, jobs).real();
    out.minus_residue = -residue_at_rho(nu, sigma2, theta);
    out.abs_diff = std::abs(out.integral - out.minus_residue);
    out.delta = delta;
    out.rho = rho;
    return out;
}

BlockVarianceResult block_variance_estimate(const Eigen::MatrixXcd& subA, const EntryLaw& law,
                                            double theta, int mc_trials, const HsGrid& grid,
                                            std::uint64_t seed, int k, int jobs) {
    if (mc_trials < 2) throw DomainError("block_variance_estimate: need mc_trials >= 2");
    const int n = static_cast<int>(subA.rows());
    const int N = n + 1;
    const double sigma2 = law.sigma2();

    const Eigen::VectorXd sub_eigs = la::eigenvalues(subA);
    const SpectralMeasure nu_emp =
        SpectralMeasure::empirical(std::span<const double>(sub_eigs.data(),
                                                           static_cast<std::size_t>(n)));
    auto [ok, margin] = check_outlier_condition(nu_emp, sigma2, theta);
    if (!ok) throw DomainError("block_variance_estimate: theta generates no outlier");

    FreeConvolution fc(nu_emp, sigma2);
    const double rho = theta + sigma2 * nu_emp.stieltjes(cplx(theta, 0.0)).real();
    const double clearance = fc.outlier_clearance(theta);
    const double delta = std::min(0.1, 0.25 * clearance);
    AlmostAnalyticExtension ext(SmoothBump(rho, delta, k + 1), std::min(1.0, 6.0 * delta), k);

    // Upper-half nodes with nonzero dbar weight, scaled by the squared
    // subordination denominator.
    struct Node {
        cplx z;
        cplx w; // quad weight * dbar / (z - sigma2 g - theta)^2
    };
    std::vector<Node> nodes;
    {
        const QuadRule xs = x_rule(ext.bump(), grid.nx);
        const QuadRule ys = y_rule(ext.L(), grid.y_min, grid.ny, ext.bump().delta());
        for (std::size_t i = 0; i < xs.size(); ++i)
            for (std::size_t j = 0; j < ys.size(); ++j) {
                const cplx z(xs.x[i], ys.x[j]);
                const cplx db = ext.dbar(z);
                if (db == cplx(0.0, 0.0)) continue;
                const cplx den = z - sigma2 * fc.g(z) - theta;
                nodes.push_back({z, xs.w[i] * ys.w[j] * db / (den * den)});
            }
    }

    const double m4 = law.m4();
    const double s4 = sigma2 * sigma2;
    const double inv_pi2 = 1.0 / (std::numbers::pi * std::numbers::pi);

    auto draw_value = [&](std::size_t t) {
        Rng rng(seed + t);
        Eigen::MatrixXcd what(n, n);
        fill_wigner(what, law, rng);
        const Eigen::MatrixXcd mhat = what / std::sqrt(static_cast<double>(N)) + subA;
        const la::Eigensystem es = la::eigensystem(mhat);

        // kappa_N factorizes over the eigen index, so the double quadrature
        // reduces to sums of squared single integrals per draw.
        Eigen::VectorXcd c_sum = Eigen::VectorXcd::Zero(n);
        for (const Node& node : nodes)
            for (int j = 0; j < n; ++j) c_sum(j) += node.w / (node.z - es.values(j));
        Eigen::MatrixXd P(n, n);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row) P(row, col) = std::norm(es.vectors(row, col));
        const Eigen::VectorXcd s_sum = P * c_sum; // diag resolvent integrals

        double sum_s2 = 0.0, sum_t2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double si = 2.0 * s_sum(i).real(); // plus the mirrored half plane
            sum_s2 += si * si;
        }
        for (int j = 0; j < n; ++j) {
            const double tj = 2.0 * c_sum(j).real();
            sum_t2 += tj * tj;
        }
        return inv_pi2 *
               (0.5 * (m4 - 3.0 * s4) * sum_s2 / N + s4 * sum_t2 / N);
    };

    const auto values = map_indexed<double>(static_cast<std::size_t>(mc_trials), jobs, draw_value);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= mc_trials;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= (mc_trials - 1);

    BlockVarianceResult res;
    res.varZN = mean;
    res.stderr_ = std::sqrt(var / mc_trials);
    res.trials = mc_trials;
    res.rho = rho;
    res.delta = delta;
    return res;
}

} // namespace sdw
