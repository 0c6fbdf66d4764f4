#include "genprony/varpro.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "genprony/errors.hpp"

namespace genprony
{

namespace
{

// Quantities shared by the Jacobian, gradient and step computations.
struct Pieces
{
    VandermondePair vp;
    CMatrix U;  // left singular vectors of V
    RVector s;  // singular values of V
    CMatrix W;  // V = U diag(s) W
    CVector c;
    CVector fitted;
    CVector rho;
    CVector d;  // dV^* rho
    double condition = 0.0;
};

Pieces analyze(const CVector& z, const CVector& y)
{
    if (y.size() < 1)
    {
        throw std::invalid_argument("varpro: empty data vector");
    }
    if (!z.allFinite())
    {
        throw IllPosedError("varpro: non-finite nodes");
    }
    Pieces p;
    const Index L = y.size() - 1;
    p.vp = vandermonde_pair(z, L);
    if (!p.vp.V.allFinite())
    {
        throw IllPosedError("varpro: Vandermonde matrix overflows");
    }
    Eigen::JacobiSVD<CMatrix> dec(p.vp.V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    p.U = dec.matrixU();
    p.s = dec.singularValues();
    p.W = dec.matrixV().adjoint();
    const Index M = z.size();
    const double smin = p.s(M - 1);
    p.condition = smin > 0.0 ? p.s(0) / smin : std::numeric_limits<double>::infinity();
    if (!(p.condition <= kMaxCondition))
    {
        throw IllPosedError("varpro: Vandermonde matrix is rank deficient",
                            p.condition);
    }
    const CVector uy = p.U.adjoint() * y;
    p.c      = p.W.adjoint() * uy.cwiseQuotient(p.s.cast<Complex>());
    p.fitted = p.U * uy;
    p.rho    = y - p.fitted;
    p.d      = p.vp.dV.adjoint() * p.rho;
    return p;
}

// A = (I - P) dV diag(c), B = (V^+)^* diag(d).
std::pair<CMatrix, CMatrix> jacobian_parts(const Pieces& p)
{
    const CMatrix& dV = p.vp.dV;
    CMatrix A = dV - p.U * (p.U.adjoint() * dV);
    A = A * p.c.asDiagonal();
    const CMatrix pinv_adj = p.U * p.s.cwiseInverse().cast<Complex>().asDiagonal() * p.W;
    CMatrix B = pinv_adj * p.d.asDiagonal();
    return {std::move(A), std::move(B)};
}

// Solves (N + damping I) x = rhs for Hermitian N.
template <typename Matrix, typename Vector>
Vector damped_solve(const Matrix& normal, double damping, const Vector& rhs)
{
    Matrix sys = normal;
    sys.diagonal().array() += damping;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sys);
    if (eig.info() != Eigen::Success)
    {
        throw DegenerateError("varpro: eigensolver failed on the normal matrix");
    }
    const auto& ev = eig.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (!(ev.minCoeff() > 1e-15 * top) || !std::isfinite(top))
    {
        throw DegenerateError("varpro: normal matrix is numerically singular");
    }
    const auto& Q = eig.eigenvectors();
    return Q * ((Q.adjoint() * rhs).cwiseQuotient(ev.template cast<typename Vector::Scalar>()));
}

CVector step_from(const Pieces& p, double damping, StepForm form)
{
    const auto [A, B] = jacobian_parts(p);
    const Index M = p.c.size();
    if (form == StepForm::kAsPrinted)
    {
        const CMatrix J = A + B;
        const CMatrix normal = J.adjoint() * J;
        const CVector rhs = -(J.adjoint() * p.fitted).real().cast<Complex>();
        return damped_solve(normal, damping, rhs);
    }
    CMatrix K(A.rows(), 2 * M);
    K.leftCols(M)  = -(A + B);
    K.rightCols(M) = -Complex(0.0, 1.0) * (A - B);
    const RMatrix normal = (K.adjoint() * K).real();
    const RVector rhs = -(K.adjoint() * p.rho).real();
    const RVector theta = damped_solve(normal, damping, rhs);
    CVector delta(M);
    for (Index j = 0; j < M; ++j)
    {
        delta(j) = Complex(theta(j), theta(M + j));
    }
    return delta;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

VandermondePair vandermonde_pair(const CVector& z, Index L)
{
    const Index M = z.size();
    if (M < 1)
    {
        throw std::invalid_argument("vandermonde_pair: need at least one node");
    }
    if (L + 1 < M)
    {
        throw std::invalid_argument("vandermonde_pair: need L + 1 >= M");
    }
    for (Index i = 0; i < M; ++i)
    {
        for (Index j = i + 1; j < M; ++j)
        {
            if (std::abs(z(i) - z(j)) <= 1e-12)
            {
                throw IllPosedError("vandermonde_pair: repeated nodes");
            }
        }
    }
    VandermondePair out{CMatrix(L + 1, M), CMatrix(L + 1, M)};
    for (Index j = 0; j < M; ++j)
    {
        Complex power = 1.0; // z^(l-1) for the derivative row l
        out.V(0, j)  = 1.0;
        out.dV(0, j) = 0.0;
        for (Index l = 1; l <= L; ++l)
        {
            out.dV(l, j) = static_cast<double>(l) * power;
            power *= z(j);
            out.V(l, j) = power;
        }
    }
    return out;
}

Projection projection_apply(const CVector& z, const CVector& y)
{
    const Pieces p = analyze(z, y);
    return {p.fitted, p.rho, p.c, p.condition};
}

double objective(const CVector& z, const CVector& y)
{
    return analyze(z, y).rho.squaredNorm();
}

CMatrix residual_jacobian(const CVector& z, const CVector& y)
{
    const auto [A, B] = jacobian_parts(analyze(z, y));
    return A + B;
}

CVector objective_gradient(const CVector& z, const CVector& y)
{
    const Pieces p = analyze(z, y);
    const CVector w = p.vp.dV.transpose() * p.rho.conjugate();
    return 2.0 * w.cwiseProduct(p.c);
}

double stationarity_residual(const CVector& z, const CVector& y)
{
    return analyze(z, y).d.norm();
}

CVector gauss_newton_step(const CVector& z, const CVector& y, StepForm form)
{
    return step_from(analyze(z, y), 0.0, form);
}

CVector levenberg_marquardt_step(const CVector& z, const CVector& y,
                                 double damping, StepForm form)
{
    if (!(damping >= 0.0))
    {
        throw std::invalid_argument("levenberg_marquardt_step: damping must "
                                    "be non-negative");
    }
    return step_from(analyze(z, y), damping, form);
}

void VarproConfig::validate() const
{
    if (!(initial_damping > 0.0))
    {
        throw std::invalid_argument("VarproConfig: initial damping must be "
                                    "positive");
    }
    if (!(damping_increase > 1.0) || !(damping_decrease > 1.0))
    {
        throw std::invalid_argument("VarproConfig: damping factors must "
                                    "exceed 1");
    }
    if (max_iterations < 0)
    {
        throw std::invalid_argument("VarproConfig: max_iterations must be "
                                    "non-negative");
    }
    if (!(step_tolerance > 0.0) || !(gradient_tolerance > 0.0))
    {
        throw std::invalid_argument("VarproConfig: tolerances must be "
                                    "positive");
    }
    if (!(max_damping > initial_damping))
    {
        throw std::invalid_argument("VarproConfig: max_damping must exceed "
                                    "the initial damping");
    }
}

std::string to_string(Termination t)
{
    switch (t)
    {
    case Termination::kGradient:
        return "gradient";
    case Termination::kStep:
        return "step";
    case Termination::kMaxIterations:
        return "max_iterations";
    case Termination::kDampingLimit:
        return "damping_limit";
    }
    return "max_iterations";
}

std::string VarproTrace::to_csv() const
{
    std::string out = "iteration,objective,damping,step_norm,stationarity,accepted\n";
    for (const auto& r : records)
    {
        out += std::to_string(r.iteration) + ',' + fmt(r.objective) + ',' +
               fmt(r.damping) + ',' + fmt(r.step_norm) + ',' +
               fmt(r.stationarity) + ',' + (r.accepted ? "1" : "0") + '\n';
    }
    return out;
}

VarproResult levenberg_marquardt(const CVector& z0, const CVector& y,
                                 const VarproConfig& config)
{
    config.validate();
    VarproResult res;
    res.z = z0;
    Pieces cur = analyze(z0, y);
    double obj = cur.rho.squaredNorm();
    double stat = cur.d.norm();
    double damping = config.initial_damping;
    const double ynorm = y.norm();
    res.trace.records.push_back({0, res.z, obj, damping, 0.0, stat, true});

    res.trace.reason = Termination::kMaxIterations;
    for (int it = 1; it <= config.max_iterations; ++it)
    {
        if (stat <= config.gradient_tolerance * ynorm)
        {
            res.trace.reason = Termination::kGradient;
            break;
        }
        bool accepted = false;
        double step_norm = 0.0;
        CVector trial_z;
        Pieces trial;
        try
        {
            const CVector delta = step_from(cur, damping, config.step_form);
            step_norm = delta.norm();
            trial_z = res.z + delta;
            trial = analyze(trial_z, y);
            const double trial_obj = trial.rho.squaredNorm();
            if (!std::isfinite(trial_obj))
            {
                throw NumericalFailure("levenberg_marquardt: non-finite objective",
                                       res.trace);
            }
            accepted = trial_obj < obj;
        }
        catch (const IllPosedError&)
        {
            accepted = false;
        }
        catch (const DegenerateError&)
        {
            accepted = false;
        }

        if (accepted)
        {
            res.z = trial_z;
            cur = std::move(trial);
            obj = cur.rho.squaredNorm();
            stat = cur.d.norm();
            damping /= config.damping_decrease;
            res.trace.records.push_back({it, res.z, obj, damping, step_norm, stat, true});
            if (step_norm <= config.step_tolerance * (1.0 + res.z.norm()))
            {
                res.trace.reason = Termination::kStep;
                break;
            }
        }
        else
        {
            damping *= config.damping_increase;
            res.trace.records.push_back({it, trial_z.size() ? trial_z : res.z, obj,
                                         damping, step_norm, stat, false});
            if (damping > config.max_damping)
            {
                res.trace.reason = Termination::kDampingLimit;
                break;
            }
        }
    }
    if (res.trace.reason == Termination::kMaxIterations &&
        stat <= config.gradient_tolerance * ynorm)
    {
        res.trace.reason = Termination::kGradient;
    }
    res.coefficients = cur.c;
    return res;
}

CVector root_update_sweep(const CVector& z, const CVector& y)
{
    const Index M = z.size();
    const Index L = y.size() - 1;
    if (L < M + 1)
    {
        throw std::invalid_argument("root_update_sweep: need L >= M + 1");
    }
    const Pieces p = analyze(z, y);
    if (p.rho.norm() <= 1e-13 * y.norm())
    {
        return z;
    }
    CVector a(L);
    for (Index l = 1; l <= L; ++l)
    {
        a(l - 1) = static_cast<double>(l) * std::conj(p.rho(l));
    }
    const double amax = a.cwiseAbs().maxCoeff();
    Index deg = L - 1;
    while (deg > 0 && std::abs(a(deg)) <= 1e-14 * amax)
    {
        --deg;
    }
    if (deg < M)
    {
        return z;
    }
    const CVector zeros =
        polynomial_roots(PronyPolynomial::normalized(a.head(deg + 1)));
    CVector out = z;
    for (const auto& [i, j] : greedy_match(z, zeros))
    {
        out(i) = zeros(j);
    }
    return out;
}

RootUpdateResult root_update_iterate(const CVector& z0, const CVector& y,
                                     const RootUpdateOptions& options)
{
    RootUpdateResult res;
    res.z = z0;
    double stat = stationarity_residual(z0, y);
    res.stationarity.push_back(stat);
    for (int it = 0; it < options.max_iterations; ++it)
    {
        const CVector next = root_update_sweep(res.z, y);
        const CVector move = next - res.z;
        if (move.norm() <= options.tolerance * std::max(1.0, res.z.norm()))
        {
            res.converged = true;
            break;
        }
        CVector accepted_z = next;
        double accepted_stat = std::numeric_limits<double>::quiet_NaN();
        if (options.monotone)
        {
            bool found = false;
            double t = 1.0;
            for (int k = 0; k < 30 && !found; ++k, t *= 0.5)
            {
                const CVector trial = res.z + t * move;
                try
                {
                    const double s = stationarity_residual(trial, y);
                    if (s < stat)
                    {
                        accepted_z = trial;
                        accepted_stat = s;
                        found = true;
                    }
                }
                catch (const IllPosedError&)
                {
                }
            }
            if (!found)
            {
                break;
            }
        }
        else
        {
            accepted_stat = stationarity_residual(accepted_z, y);
        }
        res.z = accepted_z;
        stat = accepted_stat;
        res.stationarity.push_back(stat);
        res.iterations = it + 1;
    }
    return res;
}

} // namespace genprony
