#ifndef GENPRONY_VARPRO_HPP
#define GENPRONY_VARPRO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "genprony/numerics.hpp"

namespace genprony
{

//
// Least-squares approximation y ~ V_z c of L + 1 equispaced values by M
// exponentials z_j^l. With c eliminated as V_z^+ y the problem is to
// minimize ||(I - P_z) y||^2 over the nodes z, P_z = V_z V_z^+.
//

/// V(l, j) = z_j^l and dV(l, j) = l z_j^(l-1), both (L+1) x M.
struct VandermondePair
{
    CMatrix V;
    CMatrix dV;
};

/// Throws IllPosedError for nodes closer than 1e-12 and invalid_argument
/// when L + 1 < M.
VandermondePair vandermonde_pair(const CVector& z, Index L);

struct Projection
{
    CVector fitted;       ///< P_z y
    CVector orthogonal;   ///< (I - P_z) y
    CVector coefficients; ///< V_z^+ y
    double condition = 0.0;
};

/// Uses the SVD of V_z; throws IllPosedError when its condition is > 1e14.
Projection projection_apply(const CVector& z, const CVector& y);

/// ||(I - P_z) y||^2.
double objective(const CVector& z, const CVector& y);

///
/// Jacobian of P_z y along real perturbations of each node:
/// J = (I - P_z) dV diag(c) + (V_z^+)^* diag(dV^* (I - P_z) y).
///
CMatrix residual_jacobian(const CVector& z, const CVector& y);

///
/// 2 J^* P_z y, evaluated as 2 diag(dV^T conj((I - P_z) y)) V_z^+ y.
/// The ascent direction of ||P_z y||^2 in the complex plane is the
/// conjugate of this vector; for real z and y the two coincide.
///
CVector objective_gradient(const CVector& z, const CVector& y);

/// ||dV^* (I - P_z) y||, zero at every stationary point.
double stationarity_residual(const CVector& z, const CVector& y);

///
/// Normal-equation form of the Gauss-Newton update.
///
/// kRealParameter treats z = u + i v as 2M real unknowns and minimizes the
/// linearized ||(I - P_z) y||^2; for real data and nodes it reduces to
/// (J^* J) delta = Re(J^* P_z y). kAsPrinted solves
/// (J^* J + lambda I) delta = -Re(J^* P_z y) literally; that step
/// decreases ||P_z y||^2 and so moves away from the optimum.
///
enum class StepForm
{
    kRealParameter,
    kAsPrinted,
};

/// Throws DegenerateError when the normal matrix is numerically singular.
CVector gauss_newton_step(const CVector& z, const CVector& y,
                          StepForm form = StepForm::kRealParameter);

CVector levenberg_marquardt_step(const CVector& z, const CVector& y,
                                 double damping,
                                 StepForm form = StepForm::kRealParameter);

struct VarproConfig
{
    double initial_damping   = 1e-6;
    double damping_increase  = 10.0;
    double damping_decrease  = 10.0;
    int max_iterations       = 100;
    double step_tolerance    = 1e-12;
    /// Stops once stationarity_residual <= gradient_tolerance * ||y||.
    double gradient_tolerance = 1e-10;
    double max_damping       = 1e16;
    StepForm step_form       = StepForm::kRealParameter;

    /// Throws std::invalid_argument for non-positive tolerances or factors
    /// not above one.
    void validate() const;
};

enum class Termination
{
    kGradient,
    kStep,
    kMaxIterations,
    kDampingLimit,
};

std::string to_string(Termination t);

struct TraceRecord
{
    int iteration = 0;
    CVector z;
    double objective    = 0.0;
    double damping      = 0.0;
    double step_norm    = 0.0;
    double stationarity = 0.0;
    bool accepted       = true;
};

struct VarproTrace
{
    std::vector<TraceRecord> records;
    Termination reason = Termination::kMaxIterations;

    /// iteration,objective,damping,step_norm,stationarity,accepted
    std::string to_csv() const;
};

struct VarproResult
{
    CVector z;
    CVector coefficients;
    VarproTrace trace;
};

/// Raised when the objective becomes non-finite; carries the trace so far.
class NumericalFailure : public std::runtime_error
{
public:
    NumericalFailure(const std::string& what, VarproTrace trace)
        : std::runtime_error(what), m_trace(std::move(trace))
    {
    }

    const VarproTrace& trace() const noexcept
    {
        return m_trace;
    }

private:
    VarproTrace m_trace;
};

///
/// Damped Gauss-Newton refinement. A trial step is accepted only if it
/// strictly lowers ||(I - P_z) y||^2; the damping is divided by
/// `damping_decrease` on acceptance and multiplied by `damping_increase`
/// otherwise. The stationarity test runs before each step, so a start at an
/// exact fit ends at iteration 0.
///
VarproResult levenberg_marquardt(const CVector& z0, const CVector& y,
                                 const VarproConfig& config = {});

///
/// One sweep of the root update: zeros of
/// sum_{l=1}^{L} l conj(rho_l) w^(l-1), rho = (I - P_z) y, matched greedily
/// to the current nodes. Returns z unchanged when rho vanishes.
///
/// \pre L >= M + 1 so the polynomial has at least M zeros
///
CVector root_update_sweep(const CVector& z, const CVector& y);

struct RootUpdateOptions
{
    int max_iterations = 50;
    double tolerance   = 1e-12;
    /// Backtracks along each sweep and keeps only moves that lower the
    /// stationarity residual.
    bool monotone = true;
};

struct RootUpdateResult
{
    CVector z;
    int iterations = 0;
    bool converged = false;
    std::vector<double> stationarity;
};

RootUpdateResult root_update_iterate(const CVector& z0, const CVector& y,
                                     const RootUpdateOptions& options = {});

} // namespace genprony

#endif // GENPRONY_VARPRO_HPP
