#include "genprony/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/LU>

#include "dense_eig.hpp"
#include "genprony/errors.hpp"

namespace genprony
{

namespace
{

std::string sci(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

void check_condition(SolverReport& report, double cond, const char* what)
{
    report.hankel_condition = cond;
    if (!(cond <= kMaxCondition))
    {
        throw IllPosedError(std::string(what) + ": condition " + sci(cond) +
                                " exceeds 1e14",
                            cond);
    }
    if (cond > kWarnCondition)
    {
        report.warnings.push_back(std::string(what) + ": condition " +
                                  sci(cond) + " exceeds 1e12");
    }
}

// Coefficients c_j from f_l = sum_j c_j exp(alpha_j (h l + offset)).
void fit_coefficients(SolverReport& report, const CVector& values,
                      double offset)
{
    const Index m = report.roots.size();
    CVector pref(m);
    for (Index j = 0; j < m; ++j)
    {
        pref(j) = std::exp(report.exponents(j) * offset);
    }
    const VandermondeFit fit = vandermonde_lsq(report.roots, values, pref);
    report.coefficients    = fit.coefficients;
    report.linear_residual = fit.residual;
    report.diagnostics["vandermonde_condition"] = fit.condition;
    if (fit.condition > kWarnCondition)
    {
        report.warnings.push_back("coefficient fit: Vandermonde condition " +
                                  sci(fit.condition) + " exceeds 1e12");
    }
}

void set_roots(SolverReport& report, const CVector& roots, double h)
{
    report.detected_order = roots.size();
    report.roots          = roots;
    report.exponents.resize(roots.size());
    for (Index j = 0; j < roots.size(); ++j)
    {
        report.exponents(j) = log_branch(roots(j), h);
    }
}

// Monic p with sum_{k<M} p_k f_{k+m} = -f_{M+m}, m < M.
PronyPolynomial solve_prony_system(const CVector& f, Index M,
                                   SolverReport& report, const char* what)
{
    const CMatrix hk = build_hankel(f.head(2 * M - 1), M, M);
    check_condition(report, condition_number(hk), what);
    const CVector rhs = -f.segment(M, M);
    const CVector p = hk.partialPivLu().solve(rhs);
    CVector coeffs(M + 1);
    coeffs.head(M) = p;
    coeffs(M) = 1.0;
    return PronyPolynomial(std::move(coeffs));
}

} // namespace

SolverReport prony_direct(const NormalizedSampleSeq& samples, Index M)
{
    if (M < 1)
    {
        throw std::invalid_argument("prony_direct: M must be positive");
    }
    if (samples.values.size() < 2 * M)
    {
        throw std::invalid_argument("prony_direct: need at least 2M samples");
    }
    SolverReport report;
    report.step = samples.step;
    const PronyPolynomial p =
        solve_prony_system(samples.values, M, report, "prony_direct Hankel block");
    set_roots(report, polynomial_roots(p), samples.step);
    fit_coefficients(report, samples.values, samples.offset);
    return report;
}

SolverReport esprit(const NormalizedSampleSeq& samples, Index N, Index L,
                    double eps, const EspritOptions& options)
{
    if (N < 1 || L < 1 || L > N)
    {
        throw std::invalid_argument("esprit: need 1 <= L <= N");
    }
    if (samples.values.size() < 2 * N)
    {
        throw std::invalid_argument("esprit: need 2N samples");
    }
    const CVector f = samples.values.head(2 * N);
    SolverReport report;
    report.step = samples.step;

    const SvdResult full = svd(build_hankel(f, 2 * N - L, L + 1));
    report.singular_values = full.sigma;

    Index M = 0;
    if (options.order)
    {
        M = *options.order;
        if (M < 0 || M > L)
        {
            throw std::invalid_argument("esprit: requested order must lie in "
                                        "[0, L]");
        }
    }
    else
    {
        const RankEstimate rank = numerical_rank(full.sigma, eps, options.rank_mode);
        report.diagnostics["gap_ratio"] = rank.gap_ratio;
        M = rank.rank;
        if (M > L)
        {
            report.warnings.push_back("esprit: numerical rank " +
                                      std::to_string(M) +
                                      " exceeds L; clamped to L");
            M = L;
        }
    }
    if (M == 0)
    {
        report.warnings.push_back("esprit: no singular value above the "
                                  "threshold; empty model");
        report.linear_residual = f.norm();
        return report;
    }
    report.hankel_condition = full.sigma(0) / full.sigma(M - 1);
    report.diagnostics["sigma_ratio_kept"] = report.hankel_condition;
    if (report.hankel_condition > kWarnCondition)
    {
        report.warnings.push_back("esprit: sigma_1 / sigma_M = " +
                                  sci(report.hankel_condition) +
                                  " exceeds 1e12");
    }

    const SvdResult small = svd(build_hankel(f, 2 * N - M, M + 1));
    const CMatrix w0 = small.W.topLeftCorner(M, M);
    const CMatrix w1 = small.W.block(0, 1, M, M);
    set_roots(report, detail::generalized_eigenvalues(w1, w0), samples.step);
    fit_coefficients(report, f, samples.offset);
    return report;
}

OperatorWeights operator_weights(const GhModel& model, double x0, Index order)
{
    if (order < 1)
    {
        throw std::invalid_argument("operator_weights: order must be positive");
    }
    const auto n = static_cast<std::size_t>(order);
    const Jet g = model.g_jet(x0, n);
    const Jet h = model.h_aux_jet(x0, n);

    // lam[r] holds the jet of lambda_{l,r}, l derivatives still available
    std::vector<Jet> lam(n);
    lam[0] = Jet::constant(1.0, n);
    OperatorWeights out;
    out.lambda = CMatrix::Zero(order, order);
    out.lambda(0, 0) = 1.0;
    for (std::size_t l = 0; l + 1 < n; ++l)
    {
        const std::size_t len = n - l - 1;
        std::vector<Jet> next(n);
        for (std::size_t r = 0; r <= l + 1; ++r)
        {
            Jet acc = Jet::constant(0.0, len);
            if (r <= l)
            {
                acc = acc + g * lam[r].derivative() + h * lam[r].truncated(len);
            }
            if (r >= 1)
            {
                acc = acc + g * lam[r - 1].truncated(len);
            }
            next[r] = acc.truncated(len);
            out.lambda(static_cast<Index>(l + 1), static_cast<Index>(r)) = next[r][0];
        }
        lam = std::move(next);
    }
    return out;
}

SolverReport recover_from_derivatives(const CVector& derivatives,
                                      const GhModel& model, double x0, Index M)
{
    if (M < 1)
    {
        throw std::invalid_argument("recover_from_derivatives: M must be "
                                    "positive");
    }
    if (derivatives.size() < 2 * M)
    {
        throw std::invalid_argument(
            "recover_from_derivatives: need 2M derivative values");
    }
    const OperatorWeights w = operator_weights(model, x0, 2 * M);
    const CVector moments = w.lambda * derivatives.head(2 * M);

    SolverReport report;
    report.step = 1.0;
    const PronyPolynomial p =
        solve_prony_system(moments, M, report, "derivative Hankel block");
    report.exponents      = polynomial_roots(p);
    report.detected_order = M;
    report.roots          = report.exponents.array().exp();

    const double g0 = model.G(x0);
    const Complex h0 = model.H(x0);
    CVector pref(M);
    for (Index j = 0; j < M; ++j)
    {
        pref(j) = h0 * std::exp(report.exponents(j) * g0);
    }
    const VandermondeFit fit = vandermonde_lsq(report.exponents, moments, pref);
    report.coefficients    = fit.coefficients;
    report.linear_residual = fit.residual;
    report.diagnostics["vandermonde_condition"] = fit.condition;
    return report;
}

NormalizedSampleSeq deflate(const NormalizedSampleSeq& samples, Complex z1)
{
    const Index k = samples.values.size();
    if (k < 2)
    {
        throw std::invalid_argument("deflate: need at least two samples");
    }
    NormalizedSampleSeq out;
    out.step   = samples.step;
    out.offset = samples.offset;
    out.values = samples.values.tail(k - 1) - z1 * samples.values.head(k - 1);
    return out;
}

SolverReport recover_with_known_roots(const NormalizedSampleSeq& samples,
                                      const CVector& known_roots, Index N,
                                      Index L, double eps,
                                      const EspritOptions& options)
{
    const Index k = known_roots.size();
    for (Index i = 0; i < k; ++i)
    {
        for (Index j = i + 1; j < k; ++j)
        {
            if (std::abs(known_roots(i) - known_roots(j)) <= 1e-12)
            {
                throw std::invalid_argument(
                    "recover_with_known_roots: known roots must be distinct");
            }
        }
    }
    if (samples.values.size() < 2 * N)
    {
        throw std::invalid_argument("recover_with_known_roots: need 2N samples");
    }
    NormalizedSampleSeq reduced;
    reduced.values = samples.values.head(2 * N);
    reduced.step   = samples.step;
    reduced.offset = samples.offset;
    for (Index i = 0; i < k; ++i)
    {
        reduced = deflate(reduced, known_roots(i));
    }

    const Index n_red = reduced.values.size() / 2;
    SolverReport unknown;
    if (n_red >= 1)
    {
        const Index l_red = std::min(L, n_red);
        EspritOptions opt = options;
        unknown = esprit(reduced, n_red, l_red, eps, opt);
    }

    SolverReport report;
    report.step = samples.step;
    report.singular_values = unknown.singular_values;
    report.warnings        = unknown.warnings;
    report.diagnostics     = unknown.diagnostics;
    report.hankel_condition = unknown.hankel_condition;
    report.diagnostics["known_roots"]    = static_cast<double>(k);
    report.diagnostics["deflated_length"] = static_cast<double>(reduced.values.size());

    CVector roots(k + unknown.roots.size());
    roots << known_roots, unknown.roots;
    set_roots(report, roots, samples.step);
    fit_coefficients(report, samples.values.head(2 * N), samples.offset);
    return report;
}

ExpSumParams to_natural(const SolverReport& report, const GhModel& model)
{
    return model.from_structural(report.params());
}

//------------------------------------------------------------------------------
// Non-equispaced
//------------------------------------------------------------------------------

Complex WarpedExpSum::operator()(double y) const
{
    const double t = m_warp(y);
    Complex acc = 0.0;
    for (Index j = 0; j < m_params.size(); ++j)
    {
        acc += m_params.coefficients(j) * std::exp(m_params.exponents(j) * t);
    }
    return acc;
}

NonequispacedResult esprit_nonequispaced(const std::vector<double>& nodes,
                                         const CVector& values, Index N,
                                         Index L, double eps, double h,
                                         double T,
                                         const NonequispacedOptions& options)
{
    if (static_cast<Index>(nodes.size()) != values.size())
    {
        throw std::invalid_argument(
            "esprit_nonequispaced: nodes and values differ in length");
    }
    if (values.size() < 2 * N)
    {
        throw std::invalid_argument("esprit_nonequispaced: need 2N samples");
    }
    if (!(h > 0.0))
    {
        throw std::invalid_argument("esprit_nonequispaced: h must be positive");
    }
    if (std::isfinite(T) && !(T > 0.0 && h < std::numbers::pi / T))
    {
        throw std::invalid_argument(
            "esprit_nonequispaced: h must lie below pi / T");
    }
    NodeWarp warp(nodes, h, options.warp);

    NormalizedSampleSeq seq;
    seq.values = values;
    seq.step   = h;
    seq.offset = 0.0;
    SolverReport report = esprit(seq, N, L, eps, options.esprit);
    if (report.detected_order > 0)
    {
        // refit on every node, not only the first 2N
        fit_coefficients(report, values, 0.0);
    }

    NonequispacedResult out{report, WarpedExpSum(warp, report.params()), 0.0, 0.0};
    double scale = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
    {
        const Complex v = values(static_cast<Index>(i));
        out.node_residual = std::max(out.node_residual,
                                     std::abs(out.reconstruction(nodes[i]) - v));
        scale = std::max(scale, std::abs(v));
    }
    out.relative_node_residual = scale > 0.0 ? out.node_residual / scale
                                             : out.node_residual;
    out.report.diagnostics["node_residual"]          = out.node_residual;
    out.report.diagnostics["relative_node_residual"] = out.relative_node_residual;
    return out;
}

} // namespace genprony
