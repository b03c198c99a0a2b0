#include "sdw/rmt.hpp"

#include <cmath>

#include "sdw/errors.hpp"
#include "sdw/la.hpp"

namespace sdw {

void fill_wigner(Eigen::MatrixXcd& W, const EntryLaw& law, Rng& rng) {
    const int n = static_cast<int>(W.rows());
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        W(i, i) = law.sample(rng);
        for (int j = i + 1; j < n; ++j) {
            const double re = law.sample(rng) * inv_sqrt2;
            const double im = law.sample(rng) * inv_sqrt2;
            W(i, j) = cplx(re, im);
            W(j, i) = cplx(re, -im);
        }
    }
}

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXcd G(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) G(i, j) = cplx(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
    Eigen::MatrixXcd Q = qr.householderQ();
    const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    // phase fix so that Q is Haar, not just column-orthonormal
    for (int j = 0; j < n; ++j) {
        const cplx r = R(j, j);
        Q.col(j) *= (std::abs(r) > 0.0) ? r / std::abs(r) : cplx(1.0, 0.0);
    }
    return Q;
}

Deformation Deformation::build(const DeformationSpec& spec) {
    const int n = static_cast<int>(spec.sub_spectrum.size());
    const int N = n + 1;
    for (double lam : spec.sub_spectrum)
        if (lam == spec.theta)
            throw DomainError("deformation: theta must not be an eigenvalue of A_{N-1}");
    Deformation d;
    d.spec = spec;
    d.A = Eigen::MatrixXcd::Zero(N, N);
    d.A(0, 0) = spec.theta;
    if (spec.haar_seed) {
        const Eigen::MatrixXcd Q = haar_unitary(n, *spec.haar_seed);
        Eigen::MatrixXcd block =
            Q * Eigen::Map<const Eigen::VectorXd>(spec.sub_spectrum.data(), n).asDiagonal() *
            Q.adjoint();
        d.A.bottomRightCorner(n, n) = 0.5 * (block + block.adjoint());
    } else {
        for (int i = 0; i < n; ++i) d.A(i + 1, i + 1) = spec.sub_spectrum[i];
    }
    return d;
}

DeformedSample sample_deformed(const Deformation& deformation, const EntryLaw& law,
                               std::uint64_t seed) {
    const int N = static_cast<int>(deformation.A.rows());
    if (N < 2) throw DomainError("sample_deformed: N must be >= 2");
    Rng rng(seed);
    DeformedSample s;
    s.N = N;
    s.seed = seed;
    s.theta = deformation.spec.theta;
    s.M.resize(N, N);
    fill_wigner(s.M, law, rng);
    s.W11 = s.M(0, 0).real();
    s.M /= std::sqrt(static_cast<double>(N));
    s.M += deformation.A;
    return s;
}

DeformedSample sample_deformed(int N, const DeformationSpec& spec, const EntryLaw& law,
                               std::uint64_t seed) {
    if (static_cast<int>(spec.sub_spectrum.size()) != N - 1)
        throw DomainError("sample_deformed: |sub_spectrum| must equal N-1");
    return sample_deformed(Deformation::build(spec), law, seed);
}

OutlierResult outlier_eigenpair(const DeformedSample& sample, double rho_guess,
                                const OutlierOptions& opts) {
    OutlierResult out;
    const auto window =
        la::eigen_in_window(sample.M, rho_guess - opts.window, rho_guess + opts.window);
    out.count_in_window = window.count;
    if (window.count == 0) {
        out.reason = "no eigenvalue within the isolation window";
        return out;
    }
    if (window.count > 1) {
        out.reason = "non-separation: several eigenvalues within the window";
        return out;
    }
    out.lambda = window.value;
    out.vector = window.vector;

    // phase: make <e1, v> real nonnegative
    const cplx v0 = out.vector(0);
    if (std::abs(v0) > 0.0) out.vector *= std::conj(v0) / std::abs(v0);

    const Eigen::VectorXcd r = sample.M * out.vector - out.lambda * out.vector;
    out.residual = r.norm();
    // ||M||_F / sqrt(N) and |lambda| both bound ||M||_2 from below
    const double norm_lb = std::max(std::abs(out.lambda),
                                    sample.M.norm() / std::sqrt(double(sample.N)));
    if (out.residual > opts.residual_tol * norm_lb) {
        out.reason = "eigenpair residual above tolerance";
        return out;
    }
    out.ok = true;
    return out;
}

double spike_overlap(const Eigen::VectorXcd& v) {
    if (std::abs(v.norm() - 1.0) > 1e-12)
        throw DomainError("spike_overlap: vector is not unit within 1e-12");
    return std::norm(v(0));
}

ResolventStats resolvent_stats(const DeformedSample& sample, cplx z,
                               const ResolventRequest& request) {
    if (z.imag() == 0.0) throw DomainError("resolvent_stats: Im z must be nonzero");
    const int N = sample.N;
    ResolventStats stats;

    if (request.g11) {
        Eigen::MatrixXcd A = -sample.M;
        A.diagonal().array() += z;
        const Eigen::VectorXcd x = A.partialPivLu().solve(Eigen::VectorXcd::Unit(N, 0));
        stats.g11 = x(0);
    }
    if (request.trace) {
        const Eigen::VectorXd eigs = la::eigenvalues(sample.M);
        cplx acc = 0.0;
        for (int i = 0; i < N; ++i) acc += 1.0 / (z - eigs(i));
        stats.trace = acc / static_cast<double>(N);
    }
    if (request.product_z2) {
        const cplx z2 = *request.product_z2;
        if (z2.imag() == 0.0) throw DomainError("resolvent_stats: Im z2 must be nonzero");
        const la::Eigensystem es = la::eigensystem(sample.M.bottomRightCorner(N - 1, N - 1));
        const int n = N - 1;
        cplx trace_prod = 0.0;
        Eigen::VectorXcd c1(n), c2(n);
        for (int k = 0; k < n; ++k) {
            c1(k) = 1.0 / (z - es.values(k));
            c2(k) = 1.0 / (z2 - es.values(k));
            trace_prod += c1(k) * c2(k);
        }
        stats.trace_product = trace_prod / static_cast<double>(N);
        cplx diag_acc = 0.0;
        for (int i = 0; i < n; ++i) {
            cplx gi1 = 0.0, gi2 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p = std::norm(es.vectors(i, k));
                gi1 += p * c1(k);
                gi2 += p * c2(k);
            }
            diag_acc += gi1 * gi2;
        }
        stats.diag_products = diag_acc / static_cast<double>(n);
    }
    return stats;
}

} // namespace sdw
