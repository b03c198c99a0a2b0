#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sdw/measures.hpp"

namespace sdw {

// A_N = diag(theta, A_{N-1}); the lower-right block is diag(sub_spectrum),
// optionally conjugated by a Haar unitary.
struct DeformationSpec {
    double theta = 0.0;
    std::vector<double> sub_spectrum;
    std::optional<std::uint64_t> haar_seed;
};

// Materialized deformation; build once, share across trials.
struct Deformation {
    DeformationSpec spec;
    Eigen::MatrixXcd A;
    static Deformation build(const DeformationSpec& spec);
};

struct DeformedSample {
    int N = 0;
    Eigen::MatrixXcd M;
    double W11 = 0.0;
    std::uint64_t seed = 0;
    double theta = 0.0;
};

// Hermitian Wigner fill: diagonal iid mu, Re/Im of the strict upper triangle
// iid mu/sqrt(2), row-major draw order.
void fill_wigner(Eigen::MatrixXcd& W, const EntryLaw& law, Rng& rng);

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

DeformedSample sample_deformed(const Deformation& deformation, const EntryLaw& law,
                               std::uint64_t seed);
DeformedSample sample_deformed(int N, const DeformationSpec& spec, const EntryLaw& law,
                               std::uint64_t seed);

struct OutlierOptions {
    double window = 0.25;        // isolation radius around rho_guess
    double residual_tol = 1e-10; // relative to a spectral-norm lower bound
};

struct OutlierResult {
    bool ok = false;
    std::string reason;   // set when !ok
    double lambda = 0.0;
    Eigen::VectorXcd vector; // unit, <e1, v> real nonnegative
    int count_in_window = 0;
    double residual = 0.0;
};

// Eigenpair of the unique eigenvalue within `window` of rho_guess. Zero or
// several candidates are non-fatal rejections; experiments count them.
OutlierResult outlier_eigenpair(const DeformedSample& sample, double rho_guess,
                                const OutlierOptions& opts = {});

// |<e1, v>|^2 for a unit vector.
double spike_overlap(const Eigen::VectorXcd& v);

struct ResolventRequest {
    bool g11 = false;
    bool trace = false;               // normalized (1/N) Tr G(z)
    std::optional<cplx> product_z2;   // enables the two submatrix products
};

struct ResolventStats {
    cplx g11{};
    cplx trace{};
    cplx diag_products{};  // (1/(N-1)) sum_i Ghat_ii(z) Ghat_ii(z2)
    cplx trace_product{};  // (1/N) Tr Ghat(z) Ghat(z2)
};

ResolventStats resolvent_stats(const DeformedSample& sample, cplx z,
                               const ResolventRequest& request);

} // namespace sdw
