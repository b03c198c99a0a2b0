#include "sdw/la.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

extern "C" void openblas_set_num_threads(int);

namespace sdw::la {

namespace {
void pin_blas_threads() {
    static std::once_flag flag;
    std::call_once(flag, [] { openblas_set_num_threads(1); });
}
lapack_complex_double* lp(Eigen::MatrixXcd& m) {
    return reinterpret_cast<lapack_complex_double*>(m.data());
}
} // namespace

Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& H) {
    pin_blas_threads();
    const int n = static_cast<int>(H.rows());
    Eigen::MatrixXcd A = H;
    Eigen::VectorXd w(n);
    const int info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'N', 'L', n, lp(A), n, w.data());
    if (info != 0) throw std::runtime_error("zheev failed, info=" + std::to_string(info));
    return w;
}

Eigensystem eigensystem(const Eigen::MatrixXcd& H) {
    pin_blas_threads();
    const int n = static_cast<int>(H.rows());
    Eigensystem out;
    out.vectors = H;
    out.values.resize(n);
    const int info =
        LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'L', n, lp(out.vectors), n, out.values.data());
    if (info != 0) throw std::runtime_error("zheev failed, info=" + std::to_string(info));
    return out;
}

WindowResult eigen_in_window(const Eigen::MatrixXcd& H, double lo, double hi) {
    pin_blas_threads();
    const int n = static_cast<int>(H.rows());
    Eigen::MatrixXcd A = H;
    Eigen::VectorXd w(n);
    Eigen::MatrixXcd Z(n, n);
    std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
    lapack_int m = 0;
    const int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, lp(A), n, lo, hi, 0, 0,
                                    0.0, &m, w.data(), lp(Z), n, isuppz.data());
    if (info != 0) throw std::runtime_error("zheevr failed, info=" + std::to_string(info));
    WindowResult res;
    res.count = static_cast<int>(m);
    if (m == 1) {
        res.value = w(0);
        res.vector = Z.col(0);
    }
    return res;
}

} // namespace sdw::la
