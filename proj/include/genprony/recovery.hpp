#ifndef GENPRONY_RECOVERY_HPP
#define GENPRONY_RECOVERY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "genprony/model.hpp"
#include "genprony/node_warp.hpp"
#include "genprony/numerics.hpp"

namespace genprony
{

///
/// Output of the Prony-type solvers. Exponents and coefficients are in the
/// model's structural form; `roots(j) = exp(exponents(j) * step)`.
///
struct SolverReport
{
    Index detected_order = 0;
    CVector exponents;
    CVector roots;
    CVector coefficients;
    RVector singular_values;
    double linear_residual  = 0.0;
    double hankel_condition = 0.0;
    double step             = 1.0;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> warnings;

    ExpSumParams params() const
    {
        return {coefficients, exponents};
    }
};

///
/// Direct Prony recovery with known order M: solves the M x M Hankel system
/// for the monic Prony polynomial, takes its companion eigenvalues as roots
/// and fits coefficients to every sample.
///
/// Throws IllPosedError when the Hankel block has condition > 1e14.
///
SolverReport prony_direct(const NormalizedSampleSeq& samples, Index M);

struct EspritOptions
{
    RankMode rank_mode = RankMode::kAbsolute;
    /// Skips rank detection and uses this order.
    std::optional<Index> order;
};

///
/// ESPRIT with order detection on the first 2N samples.
///
/// The order M is the numerical rank of the (2N-L) x (L+1) Hankel matrix
/// (clamped to L). Roots are the eigenvalues of the pencil built from the
/// first M rows of the right singular factor of the (2N-M) x (M+1) Hankel
/// matrix. A detected order of zero yields an empty report.
///
/// \pre 1 <= L <= N and samples.values.size() >= 2N
///
SolverReport esprit(const NormalizedSampleSeq& samples, Index N, Index L,
                    double eps, const EspritOptions& options = {});

///
/// Lower-triangular weights with (A^l f)(x0) = sum_r w(l, r) f^(r)(x0) for
/// the operator A f = g f' + h_aux f, g = 1/G', h_aux = -H'/(G' H).
///
struct OperatorWeights
{
    CMatrix lambda;
};

/// Throws CapabilityError when the model lacks derivative information.
OperatorWeights operator_weights(const GhModel& model, double x0, Index order);

///
/// Recovery from f(x0), f'(x0), ..., f^(2M-1)(x0). The roots of the Prony
/// polynomial of (A^l f)(x0) are the exponents themselves; `roots` holds
/// exp(alpha) and `step` is 1.
///
SolverReport recover_from_derivatives(const CVector& derivatives,
                                      const GhModel& model, double x0,
                                      Index M);

/// f~_l = f_{l+1} - z1 f_l. Offset and step are unchanged.
NormalizedSampleSeq deflate(const NormalizedSampleSeq& samples, Complex z1);

///
/// Deflates every known root, runs ESPRIT on what is left and fits all
/// coefficients jointly on the original samples. Known roots come first in
/// the report.
///
SolverReport recover_with_known_roots(const NormalizedSampleSeq& samples,
                                      const CVector& known_roots, Index N,
                                      Index L, double eps,
                                      const EspritOptions& options = {});

/// Natural-form parameters of a report under `model`.
ExpSumParams to_natural(const SolverReport& report, const GhModel& model);

//------------------------------------------------------------------------------
// Non-equispaced data
//------------------------------------------------------------------------------

/// f(y) = sum_j c_j exp(alpha_j Phi(y)) for a node warp Phi.
class WarpedExpSum
{
public:
    WarpedExpSum(NodeWarp warp, ExpSumParams params)
        : m_warp(std::move(warp)), m_params(std::move(params))
    {
    }

    Complex operator()(double y) const;

    const NodeWarp& warp() const
    {
        return m_warp;
    }

    const ExpSumParams& params() const
    {
        return m_params;
    }

private:
    NodeWarp m_warp;
    ExpSumParams m_params;
};

struct NonequispacedOptions
{
    WarpKind warp = WarpKind::kLinear;
    EspritOptions esprit;
};

struct NonequispacedResult
{
    SolverReport report;
    WarpedExpSum reconstruction;
    double node_residual          = 0.0; ///< max_l |f^(y_l) - values_l|
    double relative_node_residual = 0.0; ///< node_residual / max_l |values_l|
};

///
/// Maps the nodes onto l h with a monotone warp and runs ESPRIT on the values
/// with H = 1 and zero offset. Exact when the data is an exponential sum in
/// the warped variable; otherwise the node residual measures the misfit.
///
/// \pre nodes strictly increasing, values.size() == nodes.size() >= 2N,
///      0 < h and, for finite T, h < pi / T
///
NonequispacedResult esprit_nonequispaced(const std::vector<double>& nodes,
                                         const CVector& values, Index N,
                                         Index L, double eps, double h,
                                         double T,
                                         const NonequispacedOptions& options = {});

} // namespace genprony

#endif // GENPRONY_RECOVERY_HPP
