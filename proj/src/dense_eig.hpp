// Thin wrappers over the LAPACK complex eigensolvers.
#ifndef GENPRONY_SRC_DENSE_EIG_HPP
#define GENPRONY_SRC_DENSE_EIG_HPP

#include "genprony/numerics.hpp"

namespace genprony::detail
{

/// Eigenvalues of a general complex square matrix (zgeev, balanced).
CVector eigenvalues(const CMatrix& a);

/// Generalized eigenvalues of the pencil (a, b), i.e. roots of
/// det(a - lambda b) = 0 (zggev). Throws DegenerateError when some beta is
/// numerically zero relative to the pencil scale.
CVector generalized_eigenvalues(const CMatrix& a, const CMatrix& b);

} // namespace genprony::detail

#endif
