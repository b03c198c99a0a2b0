#include "sdw/spike.hpp"

#include <cmath>

#include "sdw/errors.hpp"

namespace sdw {

namespace {
double real_g(const SpectralMeasure& nu, double theta, int order) {
    return nu.stieltjes(cplx(theta, 0.0), order).real();
}
} // namespace

std::pair<bool, double> check_outlier_condition(const SpectralMeasure& nu, double sigma2,
                                                double theta) {
    if (nu.support_distance(theta) == 0.0)
        throw DomainError("check_outlier_condition: theta lies in supp(nu)");
    // int dnu/(theta-x)^2 = -g_nu'(theta)
    const double margin = 1.0 + sigma2 * real_g(nu, theta, 1);
    return {margin > 0.0, margin > 0.0 ? margin : 0.0};
}

SpikePrediction predict(const SpectralMeasure& nu, double sigma2, double theta,
                        const EntryLaw& law) {
    auto [ok, margin] = check_outlier_condition(nu, sigma2, theta);
    if (!ok)
        throw DomainError("predict: no outlier, int dnu/(theta-x)^2 >= 1/sigma2");

    const double g0 = real_g(nu, theta, 0);
    const double g1 = real_g(nu, theta, 1);
    const double g2 = real_g(nu, theta, 2);
    const double g3 = real_g(nu, theta, 3);
    const double i2 = -g1; // int dnu/(theta-x)^2
    const double s4 = sigma2 * sigma2;

    SpikePrediction pred;
    pred.theta = theta;
    pred.sigma2 = sigma2;
    pred.condition_ok = true;
    pred.margin = margin;
    pred.rho = theta + sigma2 * g0;
    pred.tau = margin;
    pred.c_eigenvalue = 1.0 / margin;
    pred.m4 = law.m4();
    pred.v2_eigenvalue = 0.5 * (pred.m4 - 3.0 * s4) * i2 + s4 * i2 / margin;
    pred.c_eigenvector = sigma2 * g2;

    // Var Z = (1/2)(m4 - 3 s^4) A + s^4 B from the covariance of the resolvent
    // entry process pushed through the contour calculus. The residues of
    // 1/((z - s2 g(z) - theta)^2 (z - s2 g(z) - x)) and
    // 1/((z - s2 g(z) - theta)^2 (z - x)) at rho are
    //   R_nu(x)  = s2 g''(theta)/(theta-x) - tau/(theta-x)^2,
    //   R_lam(x) = s2 g''(theta)/(rho-x)  - tau^2/(rho-x)^2,
    // so A = int R_nu^2 dnu and B = int R_lam^2 dlambda. Both reduce to
    // g_nu-derivatives at theta; the lambda moments enter through the
    // subordination images g_lam'(rho) = g'/tau, g_lam''(rho) = g''/tau^3, ...
    const double tau = margin;
    pred.A_coef = -tau * tau * g3 / 6.0 - sigma2 * g2 * g2 * (1.0 + 2.0 * sigma2 * g1);
    const double t3 = tau * tau * tau, t4 = t3 * tau, t5 = t4 * tau;
    const double gl1 = g1 / tau;
    const double gl2 = g2 / t3;
    const double gl3 = g3 / t3 - 3.0 * sigma2 * g2 * g2 / t4 +
                       3.0 * s4 * g1 * g2 * g2 / t5 - sigma2 * g1 * g3 / t4;
    pred.B_coef = -t4 * gl3 / 6.0 - tau * tau * sigma2 * g2 * gl2 - s4 * g2 * g2 * gl1;
    pred.varZ = 0.5 * (pred.m4 - 3.0 * s4) * pred.A_coef + s4 * pred.B_coef;
    pred.near_critical = margin < kNearCriticalMargin;
    return pred;
}

std::pair<double, double> finite_n_centerings(std::span<const double> sub_spectrum,
                                              double sigma2, double theta) {
    if (sub_spectrum.empty())
        throw DomainError("finite_n_centerings: empty sub-spectrum");
    double sum1 = 0.0, sum2 = 0.0;
    for (double lam : sub_spectrum) {
        const double d = theta - lam;
        if (std::abs(d) < 1e-12)
            throw DomainError("finite_n_centerings: theta collides with the sub-spectrum");
        sum1 += 1.0 / d;
        sum2 += 1.0 / (d * d);
    }
    const double inv = 1.0 / static_cast<double>(sub_spectrum.size());
    return {1.0 - sigma2 * inv * sum2, theta + sigma2 * inv * sum1};
}

double subordination_identity_residual(const SpectralMeasure& nu, double sigma2, double theta) {
    auto [ok, margin] = check_outlier_condition(nu, sigma2, theta);
    if (!ok) throw DomainError("subordination_identity_residual: condition violated");
    const double i2 = -real_g(nu, theta, 1);
    const double lhs = i2 / margin;

    FreeConvolution fc(nu, sigma2);
    const double rho = theta + sigma2 * real_g(nu, theta, 0);
    const double rhs = -fc.g(cplx(rho, 0.0), 1).real();
    return std::abs(lhs - rhs);
}

double residue_at_rho(const SpectralMeasure& nu, double sigma2, double theta) {
    auto [ok, margin] = check_outlier_condition(nu, sigma2, theta);
    if (!ok) throw DomainError("residue_at_rho: condition violated");
    // phi(z) = z + sigma2 g_nu(z); the residue equals phi''(theta).
    return sigma2 * real_g(nu, theta, 2);
}

nlohmann::ordered_json SpikePrediction::to_json() const {
    return {{"theta", theta},
            {"sigma2", sigma2},
            {"condition_ok", condition_ok},
            {"margin", margin},
            {"rho", rho},
            {"tau", tau},
            {"c_eigenvalue", c_eigenvalue},
            {"v2_eigenvalue", v2_eigenvalue},
            {"c_eigenvector", c_eigenvector},
            {"A_coef", A_coef},
            {"B_coef", B_coef},
            {"varZ", varZ},
            {"m4", m4},
            {"near_critical", near_critical}};
}

} // namespace sdw
