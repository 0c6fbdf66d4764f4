#include "genprony/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include <Eigen/SVD>

#include "dense_eig.hpp"
#include "genprony/errors.hpp"

namespace genprony
{

CMatrix build_hankel(const HankelSpec& spec)
{
    return build_hankel(spec.values, spec.rows, spec.cols);
}

CMatrix build_hankel(const CVector& values, Index rows, Index cols)
{
    if (rows <= 0 || cols <= 0)
    {
        throw std::invalid_argument("build_hankel: rows and cols must be "
                                    "positive");
    }
    if (rows + cols - 1 > values.size())
    {
        throw std::invalid_argument(
            "build_hankel: rows + cols - 1 exceeds the sequence length");
    }
    CMatrix h(rows, cols);
    for (Index k = 0; k < cols; ++k)
    {
        h.col(k) = values.segment(k, rows);
    }
    return h;
}

SvdResult svd(const CMatrix& a)
{
    if (!a.allFinite())
    {
        throw std::invalid_argument("svd: matrix has non-finite entries");
    }
    SvdResult out;
    if (a.size() == 0)
    {
        return out;
    }
    Eigen::JacobiSVD<CMatrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.U     = dec.matrixU();
    out.sigma = dec.singularValues();
    out.W     = dec.matrixV().adjoint();
    return out;
}

double condition_number(const CMatrix& a)
{
    if (a.size() == 0)
    {
        return 1.0;
    }
    const RVector s = svd(a).sigma;
    const double smin = s(s.size() - 1);
    if (smin == 0.0)
    {
        return std::numeric_limits<double>::infinity();
    }
    return s(0) / smin;
}

RankEstimate numerical_rank(const RVector& sigma, double eps, RankMode mode)
{
    if (!(eps > 0.0))
    {
        throw std::invalid_argument("numerical_rank: eps must be positive");
    }
    RankEstimate out;
    if (sigma.size() == 0)
    {
        return out;
    }
    const double threshold = mode == RankMode::kRelative ? eps * sigma(0) : eps;
    while (out.rank < sigma.size() && sigma(out.rank) > threshold)
    {
        ++out.rank;
    }
    if (out.rank == 0)
    {
        out.gap_ratio = 0.0;
    }
    else if (out.rank == sigma.size() || sigma(out.rank) == 0.0)
    {
        out.gap_ratio = std::numeric_limits<double>::infinity();
    }
    else
    {
        out.gap_ratio = sigma(out.rank - 1) / sigma(out.rank);
    }
    return out;
}

//------------------------------------------------------------------------------
// PronyPolynomial
//------------------------------------------------------------------------------

PronyPolynomial::PronyPolynomial(CVector coeffs) : m_coeffs(std::move(coeffs))
{
    if (m_coeffs.size() < 2)
    {
        throw std::invalid_argument("PronyPolynomial: degree must be >= 1");
    }
    if (m_coeffs(m_coeffs.size() - 1) != Complex(1.0, 0.0))
    {
        throw std::invalid_argument("PronyPolynomial: polynomial must be monic");
    }
}

PronyPolynomial PronyPolynomial::normalized(const CVector& coeffs)
{
    if (coeffs.size() < 2)
    {
        throw std::invalid_argument("PronyPolynomial: degree must be >= 1");
    }
    const Complex lead = coeffs(coeffs.size() - 1);
    if (lead == Complex(0.0, 0.0))
    {
        throw std::invalid_argument("PronyPolynomial: zero leading coefficient");
    }
    CVector c = coeffs / lead;
    c(c.size() - 1) = 1.0;
    return PronyPolynomial(std::move(c));
}

PronyPolynomial PronyPolynomial::from_roots(const CVector& roots)
{
    const Index m = roots.size();
    if (m < 1)
    {
        throw std::invalid_argument("PronyPolynomial: need at least one root");
    }
    CVector c = CVector::Zero(m + 1);
    c(0) = 1.0;
    // multiply by (z - r) one factor at a time
    for (Index j = 0; j < m; ++j)
    {
        for (Index k = j + 1; k > 0; --k)
        {
            c(k) = c(k - 1) - roots(j) * c(k);
        }
        c(0) = -roots(j) * c(0);
    }
    c(m) = 1.0;
    return PronyPolynomial(std::move(c));
}

Complex PronyPolynomial::operator()(Complex z) const
{
    Complex acc = 0.0;
    for (Index k = m_coeffs.size(); k-- > 0;)
    {
        acc = acc * z + m_coeffs(k);
    }
    return acc;
}

CVector polynomial_roots(const PronyPolynomial& poly)
{
    const Index m = poly.degree();
    const CVector& p = poly.coefficients();
    CMatrix companion = CMatrix::Zero(m, m);
    for (Index k = 1; k < m; ++k)
    {
        companion(k, k - 1) = 1.0;
    }
    companion.col(m - 1) = -p.head(m);
    return detail::eigenvalues(companion);
}

//------------------------------------------------------------------------------
// Vandermonde least squares
//------------------------------------------------------------------------------

VandermondeFit vandermonde_lsq(const CVector& nodes, const CVector& rhs,
                               const CVector& prefactors)
{
    const Index m = nodes.size();
    const Index k = rhs.size();
    if (prefactors.size() != m)
    {
        throw std::invalid_argument(
            "vandermonde_lsq: prefactors and nodes differ in length");
    }
    if (m == 0)
    {
        return {CVector(), rhs.norm(), 1.0};
    }
    if (k < m)
    {
        throw std::invalid_argument(
            "vandermonde_lsq: fewer equations than unknowns");
    }
    for (Index i = 0; i < m; ++i)
    {
        for (Index j = i + 1; j < m; ++j)
        {
            if (std::abs(nodes(i) - nodes(j)) <= 1e-12)
            {
                throw IllPosedError("vandermonde_lsq: repeated nodes");
            }
        }
    }

    CMatrix v(k, m);
    for (Index j = 0; j < m; ++j)
    {
        Complex power = prefactors(j);
        for (Index l = 0; l < k; ++l)
        {
            v(l, j) = power;
            power *= nodes(j);
        }
    }
    // column equilibration keeps huge and tiny prefactors comparable
    RVector scale(m);
    for (Index j = 0; j < m; ++j)
    {
        scale(j) = v.col(j).norm();
        if (!(scale(j) > 0.0) || !std::isfinite(scale(j)))
        {
            throw IllPosedError("vandermonde_lsq: zero or non-finite column");
        }
        v.col(j) /= scale(j);
    }

    Eigen::JacobiSVD<CMatrix> dec(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& s = dec.singularValues();
    VandermondeFit out;
    out.condition = s(m - 1) > 0.0 ? s(0) / s(m - 1)
                                   : std::numeric_limits<double>::infinity();
    const CVector y = dec.solve(rhs);
    out.coefficients = y.cwiseQuotient(scale.cast<Complex>());
    out.residual     = (rhs - v * y).norm();
    return out;
}

Complex log_branch(Complex z, double h)
{
    if (z == Complex(0.0, 0.0))
    {
        throw std::invalid_argument("log_branch: z must be nonzero");
    }
    if (h == 0.0)
    {
        throw std::invalid_argument("log_branch: h must be nonzero");
    }
    Complex lz = std::log(z); // Im in (-pi, pi]
    if (h < 0.0 && lz.imag() == std::numbers::pi)
    {
        lz.imag(-std::numbers::pi);
    }
    return lz / h;
}

std::vector<std::pair<Index, Index>> greedy_match(const CVector& a,
                                                  const CVector& b)
{
    std::vector<std::tuple<double, Index, Index>> pairs;
    pairs.reserve(static_cast<std::size_t>(a.size() * b.size()));
    for (Index i = 0; i < a.size(); ++i)
    {
        for (Index j = 0; j < b.size(); ++j)
        {
            pairs.emplace_back(std::abs(a(i) - b(j)), i, j);
        }
    }
    std::sort(pairs.begin(), pairs.end());

    std::vector<bool> used_a(static_cast<std::size_t>(a.size()), false);
    std::vector<bool> used_b(static_cast<std::size_t>(b.size()), false);
    std::vector<std::pair<Index, Index>> out;
    const auto wanted = static_cast<std::size_t>(std::min(a.size(), b.size()));
    for (const auto& [d, i, j] : pairs)
    {
        if (out.size() == wanted)
        {
            break;
        }
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        if (used_a[ui] || used_b[uj])
        {
            continue;
        }
        used_a[ui] = used_b[uj] = true;
        out.emplace_back(i, j);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double matched_max_error(const CVector& estimate, const CVector& truth)
{
    double err = 0.0;
    for (const auto& [i, j] : greedy_match(estimate, truth))
    {
        err = std::max(err, std::abs(estimate(i) - truth(j)));
    }
    if (estimate.size() != truth.size())
    {
        return std::numeric_limits<double>::infinity();
    }
    return err;
}

} // namespace genprony
