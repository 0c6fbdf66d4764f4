#include "dense_eig.hpp"

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "genprony/errors.hpp"

namespace genprony::detail
{

CVector eigenvalues(const CMatrix& a)
{
    if (a.rows() != a.cols())
    {
        throw std::invalid_argument("eigenvalues: matrix must be square");
    }
    const auto n = static_cast<lapack_int>(a.rows());
    if (n == 0)
    {
        return CVector();
    }
    CMatrix work = a; // column-major copy, overwritten by zgeev
    CVector w(n);
    lapack_complex_double dummy{};
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, w.data(), &dummy, 1,
        &dummy, 1);
    if (info != 0)
    {
        throw std::runtime_error("zgeev failed with info = " +
                                 std::to_string(info));
    }
    return w;
}

CVector generalized_eigenvalues(const CMatrix& a, const CMatrix& b)
{
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    {
        throw std::invalid_argument(
            "generalized_eigenvalues: pencil must be square and conformant");
    }
    const auto n = static_cast<lapack_int>(a.rows());
    if (n == 0)
    {
        return CVector();
    }
    CMatrix wa = a;
    CMatrix wb = b;
    CVector alpha(n);
    CVector beta(n);
    lapack_complex_double dummy{};
    const lapack_int info = LAPACKE_zggev(
        LAPACK_COL_MAJOR, 'N', 'N', n, wa.data(), n, wb.data(), n,
        alpha.data(), beta.data(), &dummy, 1, &dummy, 1);
    if (info != 0)
    {
        throw DegenerateError("zggev failed with info = " +
                              std::to_string(info));
    }
    const double scale = std::max(a.norm(), b.norm());
    CVector lambda(n);
    for (lapack_int i = 0; i < n; ++i)
    {
        if (std::abs(beta(i)) <= 1e-14 * scale)
        {
            throw DegenerateError(
                "ESPRIT pencil is numerically singular (infinite eigenvalue)");
        }
        lambda(i) = alpha(i) / beta(i);
    }
    return lambda;
}

} // namespace genprony::detail
