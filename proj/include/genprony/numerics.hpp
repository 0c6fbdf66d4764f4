#ifndef GENPRONY_NUMERICS_HPP
#define GENPRONY_NUMERICS_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace genprony
{

using Index   = Eigen::Index;
using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Condition number above which a Hankel or Vandermonde solve is refused.
inline constexpr double kMaxCondition = 1e14;
/// Condition number above which a solve proceeds with a warning.
inline constexpr double kWarnCondition = 1e12;

///
/// Shape of a rectangular Hankel matrix read from a sequence: entry (m, k) is
/// `values[m + k]`, so `rows + cols - 1 <= values.size()` is required.
///
struct HankelSpec
{
    CVector values;
    Index rows = 0;
    Index cols = 0;
};

CMatrix build_hankel(const HankelSpec& spec);
CMatrix build_hankel(const CVector& values, Index rows, Index cols);

///
/// Thin singular value decomposition `A = U * diag(sigma) * W`.
///
/// With k = min(rows, cols), `U` is rows x k, `sigma` has k entries sorted in
/// non-increasing order and `W` is k x cols. `W` is the adjoint of the usual
/// right factor, so its rows are conjugated right singular vectors.
///
struct SvdResult
{
    CMatrix U;
    RVector sigma;
    CMatrix W;
};

SvdResult svd(const CMatrix& a);

/// sigma_max / sigma_min, or +inf for a singular matrix.
double condition_number(const CMatrix& a);

enum class RankMode
{
    kAbsolute, ///< count sigma_i > eps
    kRelative, ///< count sigma_i > eps * sigma_1
};

struct RankEstimate
{
    Index rank = 0;
    /// sigma_rank / sigma_{rank+1}; +inf when every value is kept or the
    /// next value is exactly zero, 0 when the rank is zero.
    double gap_ratio = 0.0;
};

RankEstimate numerical_rank(const RVector& sigma, double eps,
                            RankMode mode = RankMode::kAbsolute);

///
/// Monic polynomial p(z) = p_0 + p_1 z + ... + z^M stored by ascending
/// coefficients.
///
class PronyPolynomial
{
public:
    /// \pre coeffs.size() >= 2 and the leading coefficient equals one.
    explicit PronyPolynomial(CVector coeffs);

    /// Divides by the leading coefficient; throws if that is zero.
    static PronyPolynomial normalized(const CVector& coeffs);

    /// Expands prod_j (z - roots_j).
    static PronyPolynomial from_roots(const CVector& roots);

    Index degree() const
    {
        return m_coeffs.size() - 1;
    }

    const CVector& coefficients() const
    {
        return m_coeffs;
    }

    Complex operator()(Complex z) const;

private:
    CVector m_coeffs;
};

/// Eigenvalues of the companion matrix of `poly`.
CVector polynomial_roots(const PronyPolynomial& poly);

///
/// Least-squares fit of `rhs_l ~ sum_j c_j * prefactors_j * nodes_j^l` for
/// l = 0..K-1.
///
struct VandermondeFit
{
    CVector coefficients;
    double residual  = 0.0; ///< ||rhs - fitted||_2
    double condition = 0.0; ///< condition number of the scaled Vandermonde
};

VandermondeFit vandermonde_lsq(const CVector& nodes, const CVector& rhs,
                               const CVector& prefactors);

/// Principal-branch exponent: alpha = log(z) / h with
/// Im(alpha) in (-pi/|h|, pi/|h|].
Complex log_branch(Complex z, double h);

///
/// Greedy one-to-one pairing: repeatedly takes the closest remaining
/// (a_i, b_j) pair, ties broken by (i, j) order. Returns min(|a|, |b|) pairs
/// (index into a, index into b). The result does not depend on the input
/// ordering except through ties.
///
std::vector<std::pair<Index, Index>> greedy_match(const CVector& a,
                                                  const CVector& b);

/// Largest |a_i - b_pair(i)| over the greedy matching.
double matched_max_error(const CVector& estimate, const CVector& truth);

} // namespace genprony

#endif // GENPRONY_NUMERICS_HPP
