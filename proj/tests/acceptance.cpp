// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "genprony/errors.hpp"
#include "genprony/experiment.hpp"
#include "genprony/recovery.hpp"
#include "genprony/varpro.hpp"
#include "oracles.hpp"

using namespace genprony;
using namespace std::complex_literals;

namespace
{

constexpr std::uint64_t kMasterSeed = 20240601;
constexpr int kCases = 200;

int g_failures = 0;

void report(int id, bool pass, const std::string& detail)
{
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass)
    {
        ++g_failures;
    }
}

std::string fmt(const char* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Nodes r e^{i theta} with angles spread over the circle and bounded radii.
CVector separated_roots(std::mt19937_64& rng, Index M, double rmin, double rmax)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double spacing = 2.0 * std::numbers::pi / static_cast<double>(M);
    const double base = u(rng) * 2.0 * std::numbers::pi;
    CVector z(M);
    for (Index j = 0; j < M; ++j)
    {
        const double angle = base + spacing * (static_cast<double>(j) + 0.25 * (u(rng) - 0.5));
        z(j) = (rmin + (rmax - rmin) * u(rng)) * std::exp(1i * angle);
    }
    return z;
}

CVector random_coefficients(std::mt19937_64& rng, Index M)
{
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
    CVector c(M);
    for (Index j = 0; j < M; ++j)
        c(j) = mag(rng) * std::exp(1i * ph(rng));
    return c;
}

//------------------------------------------------------------------------------

void criterion_gauss()
{
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult r = run_experiment(preset("ex-gauss"));
    const double elapsed = seconds_since(t0);
    const bool ok = r.ok && r.exponent_error && r.coefficient_error &&
                    *r.exponent_error <= 1e-8 && *r.coefficient_error <= 1e-7 &&
                    elapsed < 1.0;
    report(1, ok,
           "shifted Gaussians, M = 10: exponent error " +
               fmt("%.3e", r.exponent_error.value_or(NAN)) + " (<= 1e-8), coefficient error " +
               fmt("%.3e", r.coefficient_error.value_or(NAN)) + " (<= 1e-7), " +
               fmt("%.3f s", elapsed) + (r.ok ? "" : ", error: " + r.error));
}

void criterion_table3_esprit()
{
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult r = run_experiment(preset("ex-table3"));
    const double elapsed = seconds_since(t0);
    const bool ok = r.ok && r.report.detected_order == 5 && r.exponent_error &&
                    *r.exponent_error <= 1e-5 && elapsed < 1.0;
    report(2, ok,
           "five-term ESPRIT (N = 15, L = 10, eps = 1e-8): detected order " +
               std::to_string(r.report.detected_order) + ", exponent error " +
               fmt("%.3e", r.exponent_error.value_or(NAN)) + " (<= 1e-5), " +
               fmt("%.3f s", elapsed) + (r.ok ? "" : ", error: " + r.error));
}

void criterion_table3_direct()
{
    const ExperimentConfig c = preset_batch("ex-table3").at(1);
    const ExperimentResult r = run_experiment(c);
    const bool ok = r.ok && r.exponent_error && *r.exponent_error <= 1e-2;
    std::string detail = "five-term direct Prony on 10 samples: exponent error " +
                         fmt("%.3e", r.exponent_error.value_or(NAN)) + " (<= 1e-2)";
    if (!r.ok)
        detail += ", error: " + r.error;
    report(3, ok, detail);
}

void criterion_sine()
{
    const ExperimentResult r = run_experiment(preset("ex-sine"));
    const bool ok = r.ok && r.signal_error && *r.signal_error <= 1e-3 &&
                    r.reconstruction.values.size() == 512;
    report(4, ok,
           "sine model, h = 1/17: max signal deviation on 512 points " +
               fmt("%.3e", r.signal_error.value_or(NAN)) + " (<= 1e-3)" +
               (r.ok ? "" : ", error: " + r.error));
}

//------------------------------------------------------------------------------
// Property suites
//------------------------------------------------------------------------------

struct Suite
{
    std::string name;
    int cases = 0;
    int failed = 0;
    double worst = 0.0;
};

/// Random model among the built-ins with a point x and steps keeping every
/// shifted point well inside the domain.
struct ShiftCase
{
    GhModel model = make_classical_model();
    double x  = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;
};

ShiftCase random_shift_case(std::mt19937_64& rng, int i)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ShiftCase s;
    switch (i % 3)
    {
    case 0:
        s.model = make_classical_model();
        s.x = u(rng);
        s.h1 = 0.5 * u(rng);
        s.h2 = 0.5 * u(rng);
        break;
    case 1:
        s.model = make_gaussian_model(0.6 + 0.5 * u(rng));
        s.x = u(rng);
        s.h1 = 0.5 * u(rng);
        s.h2 = 0.5 * u(rng);
        break;
    default:
        s.model = make_sine_model();
        s.x = std::asin(0.5 * u(rng));
        s.h1 = 0.2 * u(rng);
        s.h2 = 0.2 * u(rng);
        break;
    }
    return s;
}

Suite shift_suite(std::mt19937_64& rng)
{
    Suite s{"generalized shift semigroup and eigenfunction (1e-11)"};
    auto f = [](double x) { return Complex(std::cos(2 * x), 1 + x * x); };
    for (int i = 0; i < kCases; ++i)
    {
        const ShiftCase sc = random_shift_case(rng, i);
        const GhModel& m = sc.model;
        const auto inner = [&](double x) { return generalized_shift_eval(m, sc.h2, f, x); };
        const Complex composed = generalized_shift_eval(m, sc.h1, inner, sc.x);
        const Complex once = generalized_shift_eval(m, sc.h1 + sc.h2, f, sc.x);
        double err = std::abs(composed - once) / std::max(1.0, std::abs(once));

        const Complex alpha = oracle::uniform_complex(rng, -2.0, 2.0);
        auto phi = [&](double x) { return m.H(x) * std::exp(alpha * m.G(x)); };
        const Complex lhs = generalized_shift_eval(m, sc.h1, phi, sc.x);
        const Complex rhs = std::exp(alpha * sc.h1) * phi(sc.x);
        err = std::max(err, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));

        ++s.cases;
        s.worst = std::max(s.worst, err);
        if (!(err <= 1e-11))
            ++s.failed;
    }
    return s;
}

Suite rank_suite(std::mt19937_64& rng)
{
    Suite s{"exact-data Hankel numerical rank equals M"};
    std::uniform_int_distribution<Index> order(1, 6);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        const Index N = 12;
        std::uniform_int_distribution<Index> lsize(M, N);
        const Index L = lsize(rng);
        const CVector z = separated_roots(rng, M, 0.9, 1.05);
        const CVector c = random_coefficients(rng, M);
        const CVector f = oracle::power_sum(c, z, static_cast<int>(2 * N));
        const SvdResult sv = svd(build_hankel(f, 2 * N - L, L + 1));
        const RankEstimate r = numerical_rank(sv.sigma, 1e-8, RankMode::kRelative);
        ++s.cases;
        if (r.rank != M)
            ++s.failed;
        s.worst = std::max(s.worst, static_cast<double>(std::abs(r.rank - M)));
    }
    return s;
}

Suite roundtrip_suite(std::mt19937_64& rng)
{
    Suite s{"ESPRIT round trip on well-separated models (1e-8)"};
    std::uniform_int_distribution<Index> order(1, 5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        GhModel model = make_classical_model();
        SampleGrid grid;
        const Index N = 10;
        grid.count = 2 * N;
        switch (i % 3)
        {
        case 0:
            grid.h = 0.5 + u(rng);
            grid.x0 = 2.0 * u(rng) - 1.0;
            break;
        case 1:
        {
            // abscissae advance by h / (2 beta); keep them within [-2, 2]
            const double beta = 0.3 + u(rng);
            model = make_gaussian_model(beta);
            grid.h = 2.0 * beta * (0.1 + 0.1 * u(rng));
            grid.x0 = -1.0 - u(rng);
            break;
        }
        default:
            model = make_sine_model();
            grid.h = 1.0 / 12.0;
            grid.x0 = std::asin(-0.9 + 0.1 * u(rng));
            break;
        }
        // Choose the roots, then map back to exponents in the principal strip.
        const CVector z = separated_roots(rng, M, 0.92, 1.05);
        ExpSumParams truth;
        truth.exponents = CVector(M);
        for (Index j = 0; j < M; ++j)
            truth.exponents(j) = log_branch(z(j), grid.h);
        truth.coefficients = random_coefficients(rng, M);

        const auto x = grid_points(model, grid);
        const CVector raw = synthesize(truth, model, x);
        const NormalizedSampleSeq seq = normalize_samples(model, grid, raw);
        double err = INFINITY;
        try
        {
            EspritOptions opts;
            opts.rank_mode = RankMode::kRelative;
            const SolverReport r = esprit(seq, N, N / 2 + 2, 1e-10, opts);
            // exponents scaled by the step so the bound is on the roots' scale
            err = std::max(oracle::matched_error(r.exponents * grid.h, truth.exponents * grid.h),
                           oracle::matched_error(r.coefficients, truth.coefficients));
        }
        catch (const std::exception&)
        {
        }
        ++s.cases;
        s.worst = std::max(s.worst, err);
        if (!(err <= 1e-8))
            ++s.failed;
    }
    return s;
}

Suite deflation_suite(std::mt19937_64& rng)
{
    Suite s{"deflation coefficient law c~_j = c_j (z_j - z_1) (1e-10)"};
    std::uniform_int_distribution<Index> order(2, 5);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        const CVector z = separated_roots(rng, M, 0.9, 1.05);
        const CVector c = random_coefficients(rng, M);
        const int count = 16;
        const NormalizedSampleSeq d = deflate({oracle::power_sum(c, z, count), 1.0, 0.0}, z(0));
        const CVector rest = z.tail(M - 1);
        const VandermondeFit fit = vandermonde_lsq(rest, d.values, CVector::Ones(M - 1));
        CVector expected(M - 1);
        for (Index j = 1; j < M; ++j)
            expected(j - 1) = c(j) * (z(j) - z(0));
        double err = (fit.coefficients - expected).cwiseAbs().maxCoeff();
        err = std::max(err, (d.values - oracle::power_sum(expected, rest, count - 1)).cwiseAbs().maxCoeff());
        ++s.cases;
        s.worst = std::max(s.worst, err);
        if (!(err <= 1e-10) || d.values.size() != count - 1)
            ++s.failed;
    }
    return s;
}

struct LsqInstance
{
    CVector z;
    CVector c;
    CVector y;
};

LsqInstance lsq_instance(std::mt19937_64& rng, Index M, Index L, double noise)
{
    LsqInstance in;
    in.z = separated_roots(rng, M, 0.85, 1.05);
    in.c = random_coefficients(rng, M);
    in.y = oracle::power_sum(in.c, in.z, static_cast<int>(L + 1));
    std::normal_distribution<double> n(0.0, noise);
    if (noise > 0.0)
        for (Index l = 0; l <= L; ++l)
            in.y(l) += Complex(n(rng), n(rng));
    return in;
}

Suite jacobian_suite(std::mt19937_64& rng)
{
    Suite s{"Jacobian vs real-step central differences (1e-5 relative)"};
    std::uniform_int_distribution<Index> order(1, 4);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        std::uniform_int_distribution<Index> lsize(M + 1, 12);
        const Index L = lsize(rng);
        const LsqInstance in = lsq_instance(rng, M, L, 0.2);
        const CMatrix J = residual_jacobian(in.z, in.y);
        const double t = 1e-6;
        double err = 0.0;
        for (Index j = 0; j < M; ++j)
        {
            CVector zp = in.z, zm = in.z;
            zp(j) += t;
            zm(j) -= t;
            const CVector fd = (projection_apply(zp, in.y).fitted -
                                projection_apply(zm, in.y).fitted) / (2 * t);
            err = std::max(err, (fd - J.col(j)).norm() / std::max(1.0, J.col(j).norm()));
        }
        ++s.cases;
        s.worst = std::max(s.worst, err);
        if (!(err <= 1e-5))
            ++s.failed;
    }
    return s;
}

Suite gradient_suite(std::mt19937_64& rng)
{
    Suite s{"gradient identity 2 J^* P y = diagonal form (1e-10)"};
    std::uniform_int_distribution<Index> order(1, 4);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        std::uniform_int_distribution<Index> lsize(M + 1, 12);
        const Index L = lsize(rng);
        const LsqInstance in = lsq_instance(rng, M, L, 0.2);
        const CVector twice = 2.0 * residual_jacobian(in.z, in.y).adjoint() *
                              projection_apply(in.z, in.y).fitted;
        const double err = (objective_gradient(in.z, in.y) - twice).norm() /
                           std::max(1.0, twice.norm());
        ++s.cases;
        s.worst = std::max(s.worst, err);
        if (!(err <= 1e-10))
            ++s.failed;
    }
    return s;
}

Suite monotone_suite(std::mt19937_64& rng)
{
    Suite s{"Levenberg-Marquardt accepted steps never raise the objective"};
    std::uniform_int_distribution<Index> order(1, 4);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        const Index L = 2 * M + 4;
        const LsqInstance in = lsq_instance(rng, M, L, 0.02);
        CVector start = in.z;
        for (Index j = 0; j < M; ++j)
            start(j) += 0.02 * oracle::uniform_complex(rng, -1, 1);
        bool ok = true;
        double rise = 0.0;
        try
        {
            const VarproResult r = levenberg_marquardt(start, in.y);
            double last = r.trace.records.front().objective;
            for (const TraceRecord& t : r.trace.records)
            {
                if (!t.accepted)
                    continue;
                rise = std::max(rise, t.objective - last);
                ok = ok && t.objective <= last;
                last = t.objective;
            }
        }
        catch (const std::exception&)
        {
            ok = false;
        }
        ++s.cases;
        s.worst = std::max(s.worst, rise);
        if (!ok)
            ++s.failed;
    }
    return s;
}

Suite exact_gradient_suite(std::mt19937_64& rng)
{
    Suite s{"stationarity on exact data <= 1e-9 ||y||"};
    std::uniform_int_distribution<Index> order(1, 4);
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        std::uniform_int_distribution<Index> lsize(M + 1, 12);
        const LsqInstance in = lsq_instance(rng, M, lsize(rng), 0.0);
        const double ratio = std::max(stationarity_residual(in.z, in.y),
                                      objective_gradient(in.z, in.y).norm()) / in.y.norm();
        ++s.cases;
        s.worst = std::max(s.worst, ratio);
        if (!(ratio <= 1e-9))
            ++s.failed;
    }
    return s;
}

void criterion_properties()
{
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 master(kMasterSeed);
    std::vector<std::function<Suite(std::mt19937_64&)>> suites{
        shift_suite,    rank_suite,     roundtrip_suite, deflation_suite,
        jacobian_suite, gradient_suite, monotone_suite,  exact_gradient_suite};
    bool ok = true;
    for (const auto& run : suites)
    {
        std::mt19937_64 rng(master());
        const Suite s = run(rng);
        std::printf("  %-62s %d cases, %d failed, worst %.3e\n", s.name.c_str(), s.cases,
                    s.failed, s.worst);
        ok = ok && s.failed == 0 && s.cases >= kCases;
    }
    const double elapsed = seconds_since(t0);
    report(5, ok && elapsed < 30.0,
           "property suites, seed " + std::to_string(kMasterSeed) + ", " +
               fmt("%.2f s", elapsed) + " (< 30 s)");
}

//------------------------------------------------------------------------------

void criterion_derivatives()
{
    std::mt19937_64 rng(kMasterSeed + 6);
    std::uniform_int_distribution<Index> order(1, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    int failed = 0;
    const GhModel classical = make_classical_model();
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        // exponents on a circle of radius ~1.5 so they stay apart
        CVector alpha = 1.5 * separated_roots(rng, M, 0.8, 1.2);
        const CVector c = random_coefficients(rng, M);
        const double x0 = 0.5 * u(rng);
        CVector derivs(2 * M);
        for (Index k = 0; k < 2 * M; ++k)
            derivs(k) = oracle::classical_derivative(c, alpha, x0, static_cast<int>(k));

        const double h = 0.4;
        const Index N = 8;
        CVector samples(2 * N);
        for (Index l = 0; l < 2 * N; ++l)
            samples(l) = oracle::classical_derivative(c, alpha, x0 + h * static_cast<double>(l), 0);

        double err = INFINITY;
        try
        {
            const SolverReport d = recover_from_derivatives(derivs, classical, x0, M);
            EspritOptions opts;
            opts.rank_mode = RankMode::kRelative;
            const SolverReport e = esprit({samples, h, x0}, N, N / 2, 1e-10, opts);
            err = oracle::matched_error(d.exponents, e.exponents);
        }
        catch (const std::exception&)
        {
        }
        worst = std::max(worst, err);
        if (!(err <= 1e-7))
            ++failed;
    }
    const OperatorWeights w = operator_weights(make_gaussian_model(0.5), 0.0, 3);
    const bool row2 = w.lambda(2, 0) == Complex(1.0) && w.lambda(2, 1) == Complex(0.0) &&
                      w.lambda(2, 2) == Complex(1.0);
    report(6, failed == 0 && row2,
           "derivative path vs ESPRIT on " + std::to_string(kCases) +
               " classical models (M <= 3): worst exponent gap " + fmt("%.3e", worst) +
               " (<= 1e-7); gaussian beta = 1/2 weight row 2 " +
               (row2 ? "= (1, 0, 1)" : "differs from (1, 0, 1)"));
}

void criterion_nonequispaced()
{
    std::mt19937_64 rng(kMasterSeed + 7);
    std::uniform_int_distribution<Index> order(1, 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Index N = 10;
    const double h = 0.1;
    double worst_exact = 0.0;
    double worst_jitter = 0.0;
    Index max_order = 0;
    int failed = 0;
    for (int i = 0; i < kCases; ++i)
    {
        const Index M = order(rng);
        const WarpKind kind = i % 2 ? WarpKind::kCubic : WarpKind::kLinear;
        // exponents with moderate growth and a few oscillations over the window
        ExpSumParams truth;
        truth.exponents = CVector(M);
        const double spacing = 2.0 * std::numbers::pi / static_cast<double>(M);
        const double base = u(rng) * spacing;
        for (Index j = 0; j < M; ++j)
            truth.exponents(j) = Complex(-0.5 + u(rng), 0.0) +
                                 4.0 * std::exp(1i * (base + spacing * static_cast<double>(j)));
        truth.coefficients = random_coefficients(rng, M);

        // exact in the warped variable on random increasing nodes
        std::vector<double> nodes{u(rng)};
        for (Index l = 1; l < 2 * N; ++l)
            nodes.push_back(nodes.back() + 0.2 + 1.6 * u(rng));
        CVector warped(2 * N);
        for (Index l = 0; l < 2 * N; ++l)
        {
            warped(l) = 0.0;
            for (Index j = 0; j < M; ++j)
                warped(l) += truth.coefficients(j) *
                             std::exp(truth.exponents(j) * (h * static_cast<double>(l)));
        }
        NonequispacedOptions opts;
        opts.warp = kind;
        double exact_err = INFINITY;
        try
        {
            const NonequispacedResult r = esprit_nonequispaced(nodes, warped, N, N / 2, 1e-8,
                                                               h, 10.0, opts);
            exact_err = std::max({oracle::matched_error(r.report.exponents, truth.exponents) * h,
                                  oracle::matched_error(r.report.coefficients, truth.coefficients),
                                  r.node_residual});
        }
        catch (const std::exception&)
        {
        }

        // true exponential sum on a jittered grid, |y_l - l h| <= 0.05 h
        std::vector<double> jittered;
        CVector values(2 * N);
        for (Index l = 0; l < 2 * N; ++l)
        {
            const double y = h * (static_cast<double>(l) + 0.05 * (2.0 * u(rng) - 1.0));
            jittered.push_back(y);
            values(l) = oracle::classical_derivative(truth.coefficients, truth.exponents, y, 0);
        }
        double jitter_res = INFINITY;
        try
        {
            const NonequispacedResult r = esprit_nonequispaced(jittered, values, N, N - 1, 1e-8,
                                                               h, 10.0, opts);
            jitter_res = r.relative_node_residual;
            max_order = std::max(max_order, r.report.detected_order);
        }
        catch (const std::exception&)
        {
        }
        worst_exact = std::max(worst_exact, exact_err);
        worst_jitter = std::max(worst_jitter, jitter_res);
        if (!(exact_err <= 1e-8) || !(jitter_res <= 1e-2))
            ++failed;
    }
    report(7, failed == 0,
           "non-equispaced data on " + std::to_string(kCases) +
               " random node sets: warped-sum error " + fmt("%.3e", worst_exact) +
               " (<= 1e-8), jittered relative node residual " + fmt("%.3e", worst_jitter) +
               " (<= 1e-2, detected orders up to " + std::to_string(max_order) + ")");
}

} // namespace

int main()
{
    const std::vector<std::function<void()>> criteria{
        criterion_gauss,      criterion_table3_esprit, criterion_table3_direct,
        criterion_sine,       criterion_properties,    criterion_derivatives,
        criterion_nonequispaced};
    int id = 1;
    for (const auto& run : criteria)
    {
        try
        {
            run();
        }
        catch (const std::exception& e)
        {
            report(id, false, std::string("exception: ") + e.what());
        }
        ++id;
    }
    return g_failures == 0 ? 0 : 1;
}
