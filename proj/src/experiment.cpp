#include "genprony/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "genprony/errors.hpp"

namespace genprony
{

namespace
{

constexpr int kReconstructionPoints = 512;

SampleDump read_samples_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot read input file '" + path + "'");
    }
    SampleDump dump;
    std::vector<Complex> values;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty() || line[0] == '#' ||
            (lineno == 1 && line.find_first_of("0123456789") != 0 &&
             line[0] != '-' && line[0] != '+'))
        {
            continue; // header or comment
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double index = 0.0;
        double x = 0.0;
        double re = 0.0;
        double im = 0.0;
        if (!(row >> index >> x >> re))
        {
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected index,x,re[,im]");
        }
        if (!(row >> im))
        {
            im = 0.0;
        }
        dump.x.push_back(x);
        values.emplace_back(re, im);
    }
    dump.values = Eigen::Map<const CVector>(values.data(),
                                            static_cast<Index>(values.size()));
    return dump;
}

struct ErrorSummary
{
    double exponent    = 0.0;
    double coefficient = 0.0;
};

ErrorSummary matched_errors(const ExpSumParams& estimate, const ExpSumParams& truth)
{
    ErrorSummary e;
    for (const auto& [i, j] : greedy_match(estimate.exponents, truth.exponents))
    {
        e.exponent = std::max(e.exponent,
                              std::abs(estimate.exponents(i) - truth.exponents(j)));
        e.coefficient = std::max(e.coefficient, std::abs(estimate.coefficients(i) -
                                                         truth.coefficients(j)));
    }
    return e;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
    {
        out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
    }
    return out;
}

CVector structural_exponents(const GhModel& model, const std::vector<Complex>& natural)
{
    ExpSumParams p;
    p.exponents = Eigen::Map<const CVector>(natural.data(),
                                            static_cast<Index>(natural.size()));
    p.coefficients = CVector::Ones(p.exponents.size());
    return model.to_structural(p).exponents;
}

// Fills samples, runs an equispaced solver and returns the normalized data.
NormalizedSampleSeq equispaced_data(const ExperimentConfig& c, const GhModel& model,
                                    const SampleGrid& grid, ExperimentResult& res)
{
    std::vector<double> x = grid_points(model, grid);
    CVector raw;
    if (c.input)
    {
        const SampleDump dump = read_samples_csv(*c.input);
        if (dump.values.size() != grid.count)
        {
            throw ConfigError("input file has " + std::to_string(dump.values.size()) +
                              " samples, the grid needs " + std::to_string(grid.count));
        }
        raw = dump.values;
    }
    else
    {
        raw = synthesize(model.to_structural(*c.truth), model, x);
    }
    raw = add_noise(raw, c.noise.sigma, c.noise.seed);
    res.samples = {x, raw};
    return normalize_samples(model, grid, raw);
}

void fill_reconstruction(ExperimentResult& res, const GhModel& model,
                         const std::optional<ExpSumParams>& truth_structural,
                         double lo, double hi)
{
    const std::vector<double> pts = linspace(lo, hi, kReconstructionPoints);
    res.reconstruction.x = pts;
    res.reconstruction.values.resize(kReconstructionPoints);
    const ExpSumParams est = res.report.params();
    for (int k = 0; k < kReconstructionPoints; ++k)
    {
        res.reconstruction.values(k) = model.evaluate(est, pts[static_cast<std::size_t>(k)]);
    }
    if (truth_structural)
    {
        res.truth_on_reconstruction.resize(kReconstructionPoints);
        double err = 0.0;
        for (int k = 0; k < kReconstructionPoints; ++k)
        {
            res.truth_on_reconstruction(k) =
                model.evaluate(*truth_structural, pts[static_cast<std::size_t>(k)]);
            err = std::max(err, std::abs(res.truth_on_reconstruction(k) -
                                         res.reconstruction.values(k)));
        }
        res.signal_error = err;
    }
}

void run_equispaced(const ExperimentConfig& c, const GhModel& model,
                    const SampleGrid& grid, ExperimentResult& res)
{
    const NormalizedSampleSeq seq = equispaced_data(c, model, grid, res);
    const Index N = c.grid.N;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DirectSolverConfig>)
            {
                res.report = prony_direct(seq, s.M);
            }
            else if constexpr (std::is_same_v<S, EspritSolverConfig>)
            {
                EspritOptions opt{s.rank_mode, s.order};
                if (s.known_exponents.empty())
                {
                    res.report = esprit(seq, N, s.L, s.epsilon, opt);
                }
                else
                {
                    const CVector known = structural_exponents(model, s.known_exponents);
                    const CVector roots = (known * seq.step).array().exp();
                    res.report = recover_with_known_roots(seq, roots, N, s.L,
                                                          s.epsilon, opt);
                }
            }
            else if constexpr (std::is_same_v<S, VarproSolverConfig>)
            {
                SolverReport start = esprit(seq, N, s.L, s.epsilon,
                                            EspritOptions{s.rank_mode, s.order});
                if (start.detected_order == 0)
                {
                    throw IllPosedError("varpro: ESPRIT start detected no terms");
                }
                const CVector& y = seq.values;
                CVector z;
                SolverReport report = start;
                report.diagnostics["initial_objective"] = objective(start.roots, y);
                report.diagnostics["initial_stationarity"] =
                    stationarity_residual(start.roots, y);
                if (s.root_update)
                {
                    const RootUpdateResult ru = root_update_iterate(start.roots, y);
                    z = ru.z;
                    report.diagnostics["iterations"] = ru.iterations;
                    report.diagnostics["converged"]  = ru.converged ? 1.0 : 0.0;
                }
                else
                {
                    VarproResult lm = levenberg_marquardt(start.roots, y, s.lm);
                    z = lm.z;
                    report.diagnostics["iterations"] =
                        static_cast<double>(lm.trace.records.back().iteration);
                    res.trace = std::move(lm.trace);
                }
                report.diagnostics["final_objective"] = objective(z, y);
                report.diagnostics["final_stationarity"] = stationarity_residual(z, y);
                report.roots = z;
                report.exponents.resize(z.size());
                CVector pref(z.size());
                for (Index j = 0; j < z.size(); ++j)
                {
                    report.exponents(j) = log_branch(z(j), seq.step);
                    pref(j) = std::exp(report.exponents(j) * seq.offset);
                }
                const VandermondeFit fit = vandermonde_lsq(z, y, pref);
                report.coefficients    = fit.coefficients;
                report.linear_residual = fit.residual;
                res.report = std::move(report);
            }
        },
        c.solver);

    std::optional<ExpSumParams> truth_s;
    if (c.truth)
    {
        truth_s = model.to_structural(*c.truth);
    }
    const auto [lo, hi] = std::minmax(res.samples.x.front(), res.samples.x.back());
    fill_reconstruction(res, model, truth_s, lo, hi);
}

void run_noneq(const ExperimentConfig& c, const NoneqSolverConfig& s,
               ExperimentResult& res)
{
    const Index K = 2 * c.grid.N;
    const double h = c.grid.h;
    if (!(h > 0.0))
    {
        throw ConfigError("the noneq solver needs a positive grid.h");
    }
    std::vector<double> nodes(static_cast<std::size_t>(K));
    CVector values(K);
    if (c.input)
    {
        const SampleDump dump = read_samples_csv(*c.input);
        if (dump.values.size() != K)
        {
            throw ConfigError("input file has " + std::to_string(dump.values.size()) +
                              " samples, expected 2N = " + std::to_string(K));
        }
        nodes = dump.x;
        values = dump.values;
    }
    else
    {
        std::mt19937_64 rng(s.jitter_seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (Index l = 0; l < K; ++l)
        {
            nodes[static_cast<std::size_t>(l)] =
                c.grid.x0 + (static_cast<double>(l) + s.jitter * u(rng)) * h;
        }
        const ExpSumParams& t = *c.truth;
        for (Index l = 0; l < K; ++l)
        {
            const double arg = s.data == NoneqData::kWarped
                                   ? c.grid.x0 + static_cast<double>(l) * h
                                   : nodes[static_cast<std::size_t>(l)];
            Complex acc = 0.0;
            for (Index j = 0; j < t.size(); ++j)
            {
                acc += t.coefficients(j) * std::exp(t.exponents(j) * arg);
            }
            values(l) = acc;
        }
    }
    values = add_noise(values, c.noise.sigma, c.noise.seed);
    res.samples = {nodes, values};

    NonequispacedOptions opt;
    opt.warp   = s.warp;
    opt.esprit = {s.rank_mode, s.order};
    const NonequispacedResult nr =
        esprit_nonequispaced(nodes, values, c.grid.N, s.L, s.epsilon, h, c.grid.T, opt);
    res.report = nr.report;

    // structural parameters live in the warped variable Phi(y) with
    // Phi(y_0) = 0; natural ones refer to the original abscissa
    const double shift = s.data == NoneqData::kWarped ? c.grid.x0 : nodes.front();
    ExpSumParams natural = nr.report.params();
    for (Index j = 0; j < natural.size(); ++j)
    {
        natural.coefficients(j) *= std::exp(-natural.exponents(j) * shift);
    }
    res.natural = natural;

    const std::vector<double> pts =
        linspace(nodes.front(), nodes.back(), kReconstructionPoints);
    res.reconstruction.x = pts;
    res.reconstruction.values.resize(kReconstructionPoints);
    for (int k = 0; k < kReconstructionPoints; ++k)
    {
        res.reconstruction.values(k) = nr.reconstruction(pts[static_cast<std::size_t>(k)]);
    }
    if (c.truth && !c.input)
    {
        const ExpSumParams& t = *c.truth;
        res.truth_on_reconstruction.resize(kReconstructionPoints);
        double err = 0.0;
        for (int k = 0; k < kReconstructionPoints; ++k)
        {
            const double y = pts[static_cast<std::size_t>(k)];
            const double arg = s.data == NoneqData::kWarped
                                   ? c.grid.x0 + nr.reconstruction.warp()(y)
                                   : y;
            Complex acc = 0.0;
            for (Index j = 0; j < t.size(); ++j)
            {
                acc += t.coefficients(j) * std::exp(t.exponents(j) * arg);
            }
            res.truth_on_reconstruction(k) = acc;
            err = std::max(err, std::abs(acc - res.reconstruction.values(k)));
        }
        res.signal_error = err;
    }
}

void run_derivatives(const ExperimentConfig& c, const GhModel& model,
                     const DerivativeSolverConfig& s, ExperimentResult& res)
{
    const Index n = 2 * s.M;
    const double x0 = c.grid.x0;
    const ExpSumParams ts = model.to_structural(*c.truth);
    const Jet x = Jet::variable(x0, static_cast<std::size_t>(n));
    const Jet gx = model.G_jet(x);
    Jet sum = Jet::constant(0.0, static_cast<std::size_t>(n));
    for (Index j = 0; j < ts.size(); ++j)
    {
        sum = sum + ts.coefficients(j) * exp(ts.exponents(j) * gx);
    }
    const Jet f = model.H_jet(x) * sum;
    CVector derivs(n);
    for (Index k = 0; k < n; ++k)
    {
        derivs(k) = f.derivative_value(static_cast<std::size_t>(k));
    }
    derivs = add_noise(derivs, c.noise.sigma, c.noise.seed);
    res.samples = {std::vector<double>(static_cast<std::size_t>(n), x0), derivs};
    res.report = recover_from_derivatives(derivs, model, x0, s.M);
}

} // namespace

CVector add_noise(const CVector& values, double sigma, std::uint64_t seed)
{
    if (!(sigma >= 0.0))
    {
        throw std::invalid_argument("add_noise: sigma must be non-negative");
    }
    if (sigma == 0.0)
    {
        return values;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, sigma);
    CVector out = values;
    for (Index i = 0; i < out.size(); ++i)
    {
        const double re = dist(rng);
        const double im = dist(rng);
        out(i) += Complex(re, im);
    }
    return out;
}

ExperimentConfig refine_config(const ExperimentConfig& config)
{
    ExperimentConfig out = config;
    if (const auto* e = std::get_if<EspritSolverConfig>(&config.solver))
    {
        VarproSolverConfig v;
        v.L         = e->L;
        v.epsilon   = e->epsilon;
        v.rank_mode = e->rank_mode;
        v.order     = e->order;
        out.solver  = v;
        out.name    = config.name + "-refined";
        return out;
    }
    if (std::holds_alternative<VarproSolverConfig>(config.solver))
    {
        return out;
    }
    throw ConfigError("refine needs an esprit or varpro solver block");
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.config = config;

    GhModel model = [&] {
        try
        {
            return make_builtin_model(config.model);
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(std::string("model: ") + e.what());
        }
    }();

    const SampleGrid grid{config.grid.x0, config.grid.h, 2 * config.grid.N, config.grid.T};
    const bool is_derivatives =
        std::holds_alternative<DerivativeSolverConfig>(config.solver);
    const bool is_noneq = std::holds_alternative<NoneqSolverConfig>(config.solver);
    if (!is_derivatives && !is_noneq)
    {
        Index m_hint = config.truth ? config.truth->size() : 1;
        if (!config.truth)
        {
            std::visit(
                [&](const auto& s) {
                    using S = std::decay_t<decltype(s)>;
                    if constexpr (std::is_same_v<S, DirectSolverConfig>)
                    {
                        m_hint = s.M;
                    }
                    else if constexpr (!std::is_same_v<S, DerivativeSolverConfig>)
                    {
                        m_hint = s.L;
                    }
                },
                config.solver);
        }
        res.grid_validation = validate_grid(model, grid, m_hint);
        if (!res.grid_validation.ok && !config.allow_invalid_grid)
        {
            std::string msg = "grid violates the step conditions:";
            for (const auto& v : res.grid_validation.violations)
            {
                msg += "\n  " + v;
            }
            throw ConfigError(msg);
        }
    }

    try
    {
        if (const auto* s = std::get_if<NoneqSolverConfig>(&config.solver))
        {
            run_noneq(config, *s, res);
        }
        else if (const auto* d = std::get_if<DerivativeSolverConfig>(&config.solver))
        {
            run_derivatives(config, model, *d, res);
        }
        else
        {
            run_equispaced(config, model, grid, res);
        }
        if (!res.natural)
        {
            res.natural = to_natural(res.report, model);
        }
        if (config.truth && !config.input)
        {
            const ErrorSummary e = matched_errors(*res.natural, *config.truth);
            res.exponent_error    = e.exponent;
            res.coefficient_error = e.coefficient;
        }
        res.ok = true;
    }
    catch (const ConfigError&)
    {
        throw;
    }
    catch (const NumericalFailure& e)
    {
        res.ok    = false;
        res.error = e.what();
        res.trace = e.trace();
    }
    catch (const std::exception& e)
    {
        res.ok    = false;
        res.error = e.what();
    }
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
    return res;
}

} // namespace genprony
