#pragma once

#include <Eigen/Dense>

namespace sdw::la {

// Thin LAPACK wrappers for complex Hermitian problems. BLAS is pinned to one
// thread; parallelism happens at the trial level.

// All eigenvalues, ascending.
Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& H);

struct Eigensystem {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors; // columns
};
Eigensystem eigensystem(const Eigen::MatrixXcd& H);

struct WindowResult {
    int count = 0;        // eigenvalues in (lo, hi]
    double value = 0.0;   // set when count == 1
    Eigen::VectorXcd vector;
};
// Eigenvalues of H inside (lo, hi]; returns the unique eigenpair when there
// is exactly one.
WindowResult eigen_in_window(const Eigen::MatrixXcd& H, double lo, double hi);

} // namespace sdw::la
