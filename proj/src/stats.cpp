#include "sdw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sdw/errors.hpp"
#include "sdw/quadrature.hpp"

namespace sdw {

namespace {

double normal_cdf(double t, double variance) {
    return 0.5 * std::erfc(-t / std::sqrt(2.0 * variance));
}

// Quadrature of E_X[ Phi((t - c X)/s) ] with nodes adapted to the law: the
// integrand is analytic in x, so fixed rules reach ~1e-12.
struct LawQuadrature {
    std::vector<double> x;
    std::vector<double> w; // includes the density
};

LawQuadrature law_rule(const EntryLaw& law, int gh_order) {
    LawQuadrature q;
    switch (law.kind()) {
        case LawKind::gaussian: {
            QuadRule gh = gauss_hermite(gh_order);
            const double s = std::sqrt(2.0 * law.sigma2());
            const double norm = 1.0 / std::sqrt(std::numbers::pi);
            for (std::size_t i = 0; i < gh.size(); ++i) {
                q.x.push_back(s * gh.x[i]);
                q.w.push_back(norm * gh.w[i]);
            }
            break;
        }
        case LawKind::uniform: {
            const double a = std::sqrt(3.0 * law.sigma2());
            QuadRule gl = gauss_legendre(64, -a, a);
            for (std::size_t i = 0; i < gl.size(); ++i) {
                q.x.push_back(gl.x[i]);
                q.w.push_back(gl.w[i] / (2.0 * a));
            }
            break;
        }
        case LawKind::laplace: {
            const double b = std::sqrt(0.5 * law.sigma2());
            // panels out to 64 b; the exponential tail beyond is ~1e-28
            double lo = 0.0;
            for (double hi : {1.0, 3.0, 7.0, 15.0, 31.0, 64.0}) {
                QuadRule gl = gauss_legendre(32, lo * b, hi * b);
                for (std::size_t i = 0; i < gl.size(); ++i) {
                    const double dens = std::exp(-gl.x[i] / b) / (2.0 * b);
                    q.x.push_back(gl.x[i]);
                    q.w.push_back(gl.w[i] * dens);
                    q.x.push_back(-gl.x[i]);
                    q.w.push_back(gl.w[i] * dens);
                }
                lo = hi;
            }
            break;
        }
    }
    return q;
}

} // namespace

DistributionHandle gaussian_cdf(double variance) {
    if (variance < 0.0) throw DomainError("gaussian_cdf: negative variance");
    if (variance == 0.0)
        return {[](double t) { return t >= 0.0 ? 1.0 : 0.0; }, "point-mass(0)"};
    return {[variance](double t) { return normal_cdf(t, variance); },
            "normal(0," + std::to_string(variance) + ")"};
}

DistributionHandle convolved_cdf(const EntryLaw& law, double scale, double gaussian_var) {
    if (gaussian_var < 0.0) throw DomainError("convolved_cdf: negative gaussian_var");
    const double c = std::abs(scale); // laws are symmetric
    if (c == 0.0) return gaussian_cdf(gaussian_var);
    if (gaussian_var == 0.0) {
        return {[law, c](double t) { return law.cdf(t / c); },
                to_string(law.kind()) + "-scaled"};
    }
    auto rule = law_rule(law, 80);
    auto cdf = [rule, c, gaussian_var](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            acc += rule.w[i] * normal_cdf(t - c * rule.x[i], gaussian_var);
        return std::clamp(acc, 0.0, 1.0);
    };
    return {std::move(cdf), to_string(law.kind()) + "*normal"};
}

double ks_statistic(std::span<const double> samples, const DistributionHandle& handle) {
    if (samples.empty()) throw DomainError("ks_statistic: empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = handle.cdf(sorted[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / sa.size() -
                                 static_cast<double>(j) / sb.size()));
    }
    return d;
}

MomentSummary summarize(std::span<const double> samples) {
    if (samples.size() < 2) throw DomainError("summarize: need at least 2 samples");
    const double n = static_cast<double>(samples.size());
    MomentSummary s;
    s.n = samples.size();
    for (double v : samples) s.mean += v;
    s.mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    s.variance = m2 * n / (n - 1.0);
    s.stderr_mean = std::sqrt(s.variance / n);
    // Var(s^2) ~ (m4 - (n-3)/(n-1) s^4) / n
    const double v4 = m4 - (n - 3.0) / (n - 1.0) * s.variance * s.variance;
    s.stderr_variance = std::sqrt(std::max(0.0, v4) / n);
    s.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.excess_kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;
    return s;
}

} // namespace sdw
