#pragma once

#include <span>

#include "sdw/freeconv.hpp"
#include "sdw/measures.hpp"

namespace sdw {

// Closed-form constants for one multiplicity-1 spike theta, all derived from
// g_nu and its derivatives at theta.
struct SpikePrediction {
    double theta = 0.0;
    double sigma2 = 0.0;
    bool condition_ok = false;
    double margin = 0.0;        // 1 - sigma2 int dnu/(theta-x)^2
    double rho = 0.0;           // theta + sigma2 g_nu(theta)
    double tau = 0.0;           // limiting eigenvector overlap (= margin)
    double c_eigenvalue = 0.0;  // 1 / tau
    double v2_eigenvalue = 0.0; // Gaussian part of the eigenvalue limit law
    double c_eigenvector = 0.0; // sigma2 g''_nu(theta)
    double A_coef = 0.0;        // int R_nu(x)^2 dnu, kurtosis-weighted part of Var Z
    double B_coef = 0.0;        // int R_lam(x)^2 dlambda, universal part of Var Z
    double varZ = 0.0;          // (1/2)(m4 - 3 sigma^4) A + sigma^4 B
    double m4 = 0.0;
    bool near_critical = false; // margin below the conditioning threshold

    nlohmann::ordered_json to_json() const;
};

inline constexpr double kNearCriticalMargin = 0.05;

// (condition holds, margin). theta must lie outside supp(nu).
std::pair<bool, double> check_outlier_condition(const SpectralMeasure& nu, double sigma2,
                                                double theta);

SpikePrediction predict(const SpectralMeasure& nu, double sigma2, double theta,
                        const EntryLaw& law);

// Finite-N centerings from the realized sub-spectrum (size N-1):
// tau_N = 1 - sigma2 (1/(N-1)) sum 1/(theta-l_j)^2,
// rho_N = theta + sigma2 (1/(N-1)) sum 1/(theta-l_j).
std::pair<double, double> finite_n_centerings(std::span<const double> sub_spectrum,
                                              double sigma2, double theta);

// | int dnu/(theta-x)^2 / margin  -  (-g_lambda'(rho)) |, the subordination
// identity behind the eigenvalue variance formula.
double subordination_identity_residual(const SpectralMeasure& nu, double sigma2, double theta);

// Residue of 1/(z - sigma2 g(z) - theta)^2 at rho, i.e. sigma2 g''_nu(theta).
double residue_at_rho(const SpectralMeasure& nu, double sigma2, double theta);

} // namespace sdw
