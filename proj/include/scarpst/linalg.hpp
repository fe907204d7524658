#pragma once

#include <complex>
#include <mutex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/Dense>

extern "C" void openblas_set_num_threads(int);

namespace scarpst {

using complexd = std::complex<double>;
using DenseOperator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

// thrown when a LAPACK call or a numerical procedure fails to converge
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All BLAS/LAPACK calls run on a single thread. Parallelism lives in the
// outer loops (independent diagonalizations, time points, eigenstates),
// which keeps every result bitwise independent of the thread count.
inline void pin_blas_threads()
{
    static std::once_flag flag;
    std::call_once(flag, [] { openblas_set_num_threads(1); });
}

inline double max_abs(const DenseOperator& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double hermiticity_defect(const DenseOperator& m)
{
    return max_abs(m - m.adjoint());
}

inline void require_square(const DenseOperator& m, const char* what)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": matrix must be square, got "
                                    + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

inline void require_hermitian(const DenseOperator& m, double tol, const char* what)
{
    require_square(m, what);
    const double defect = hermiticity_defect(m);
    if (!(defect <= tol))
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian, |M - M^dag|_max = "
                                    + std::to_string(defect));
}

inline DenseOperator kron(const DenseOperator& a, const DenseOperator& b)
{
    DenseOperator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Eigenvalues of a Hermitian matrix, ascending (LAPACK zheevd, values only).
inline Eigen::VectorXd eigvalsh(DenseOperator m)
{
    pin_blas_threads();
    require_square(m, "eigvalsh");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, m.data(), n, w.data());
    if (info != 0)
        throw numerical_error("zheevd (values) failed, info = " + std::to_string(info));
    return w;
}

// Full Hermitian eigendecomposition in place: on return `m` holds the
// eigenvector columns and the returned vector the ascending eigenvalues.
inline Eigen::VectorXd eigh_inplace(DenseOperator& m)
{
    pin_blas_threads();
    require_square(m, "eigh");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    Eigen::VectorXd w(n);
    if (n == 0) return w;
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, m.data(), n, w.data());
    if (info != 0)
        throw numerical_error("zheevd (vectors) failed, info = " + std::to_string(info));
    return w;
}

} // namespace scarpst
