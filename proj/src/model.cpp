#include "genprony/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "genprony/errors.hpp"

namespace genprony
{

namespace
{

constexpr double kHazard = 1e-14;

std::string format_double(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::pair<double, double> probe_window(const Interval& d)
{
    const bool lo_inf = std::isinf(d.lo);
    const bool hi_inf = std::isinf(d.hi);
    if (lo_inf && hi_inf)
    {
        return {-10.0, 10.0};
    }
    if (lo_inf)
    {
        return {d.hi - 20.0, d.hi};
    }
    if (hi_inf)
    {
        return {d.lo, d.lo + 20.0};
    }
    return {d.lo, d.hi};
}

} // namespace

void ExpSumParams::validate() const
{
    if (coefficients.size() != exponents.size())
    {
        throw std::invalid_argument(
            "ExpSumParams: coefficient and exponent counts differ");
    }
    if (exponents.size() == 0)
    {
        throw std::invalid_argument("ExpSumParams: at least one term required");
    }
    for (Index j = 0; j < size(); ++j)
    {
        if (coefficients(j) == Complex(0.0, 0.0))
        {
            throw std::invalid_argument("ExpSumParams: zero coefficient at term " +
                                        std::to_string(j));
        }
        for (Index k = j + 1; k < size(); ++k)
        {
            if (std::abs(exponents(j) - exponents(k)) <= 1e-12)
            {
                throw std::invalid_argument(
                    "ExpSumParams: exponents " + std::to_string(j) + " and " +
                    std::to_string(k) + " coincide");
            }
        }
    }
}

bool Interval::bounded() const
{
    return std::isfinite(lo) && std::isfinite(hi);
}

bool Interval::contains(double x, double tol) const
{
    return x >= lo - tol && x <= hi + tol;
}

std::string to_string(ModelKind kind)
{
    switch (kind)
    {
    case ModelKind::kClassical:
        return "classical";
    case ModelKind::kGaussian:
        return "gaussian";
    case ModelKind::kSine:
        return "sine";
    case ModelKind::kCustom:
        return "custom";
    }
    return "custom";
}

std::string to_string(GaussianMode mode)
{
    return mode == GaussianMode::kScaled ? "scaled" : "substituted";
}

ModelKind parse_model_kind(const std::string& name)
{
    if (name == "classical")
    {
        return ModelKind::kClassical;
    }
    if (name == "gaussian")
    {
        return ModelKind::kGaussian;
    }
    if (name == "sine")
    {
        return ModelKind::kSine;
    }
    throw std::invalid_argument("unknown model kind '" + name +
                                "' (expected classical, gaussian or sine)");
}

GaussianMode parse_gaussian_mode(const std::string& name)
{
    if (name == "scaled")
    {
        return GaussianMode::kScaled;
    }
    if (name == "substituted")
    {
        return GaussianMode::kSubstituted;
    }
    throw std::invalid_argument("unknown gaussian mode '" + name +
                                "' (expected scaled or substituted)");
}

//------------------------------------------------------------------------------
// GhModel
//------------------------------------------------------------------------------

void GhModel::finalize_range()
{
    const auto [a, b] = probe_window(m_domain);
    m_orientation = m_G(b) > m_G(a) ? 1 : -1;
    const double inf = std::numeric_limits<double>::infinity();
    const double g_lo = std::isfinite(m_domain.lo) ? m_G(m_domain.lo)
                                                   : -m_orientation * inf;
    const double g_hi = std::isfinite(m_domain.hi) ? m_G(m_domain.hi)
                                                   : m_orientation * inf;
    m_range = {std::min(g_lo, g_hi), std::max(g_lo, g_hi)};
}

GhModel GhModel::custom(RealFn G, RealFn G_inverse, ComplexFn H,
                        Interval domain, JetFn G_jet, JetFn H_jet)
{
    if (!G || !G_inverse || !H)
    {
        throw std::invalid_argument("custom model: G, G_inverse and H are "
                                    "required");
    }
    if (!(domain.lo < domain.hi))
    {
        throw std::invalid_argument("custom model: empty domain");
    }
    GhModel m;
    m.m_G          = std::move(G);
    m.m_G_inverse  = std::move(G_inverse);
    m.m_H          = std::move(H);
    m.m_G_jet      = std::move(G_jet);
    m.m_H_jet      = std::move(H_jet);
    m.m_domain     = domain;
    m.m_descriptor = {ModelKind::kCustom, 0.0, GaussianMode::kScaled};

    constexpr int kProbe = 1024;
    const auto [a, b] = probe_window(domain);
    double prev_g = 0.0;
    int sign = 0;
    for (int i = 0; i < kProbe; ++i)
    {
        const double x = a + (b - a) * i / (kProbe - 1);
        const double g = m.m_G(x);
        const Complex hv = m.m_H(x);
        if (!std::isfinite(g) || !std::isfinite(std::abs(hv)))
        {
            throw std::invalid_argument("custom model: non-finite G or H at x = " +
                                        format_double(x));
        }
        if (std::abs(hv) == 0.0)
        {
            throw std::invalid_argument("custom model: H vanishes at x = " +
                                        format_double(x));
        }
        const double back = m.m_G_inverse(g);
        if (!(std::abs(back - x) <= 1e-10 * (1.0 + std::abs(x))))
        {
            throw std::invalid_argument(
                "custom model: G_inverse(G(x)) != x at x = " + format_double(x));
        }
        if (i > 0)
        {
            const int s = g > prev_g ? 1 : (g < prev_g ? -1 : 0);
            if (s == 0 || (sign != 0 && s != sign))
            {
                throw std::invalid_argument(
                    "custom model: G is not strictly monotone near x = " +
                    format_double(x));
            }
            sign = s;
        }
        prev_g = g;
    }
    m.finalize_range();
    return m;
}

Jet GhModel::G_jet(const Jet& x) const
{
    if (!m_G_jet)
    {
        throw CapabilityError("model provides no derivative information for G");
    }
    return m_G_jet(x);
}

Jet GhModel::H_jet(const Jet& x) const
{
    if (!m_H_jet)
    {
        throw CapabilityError("model provides no derivative information for H");
    }
    return m_H_jet(x);
}

Jet GhModel::g_jet(double x0, std::size_t length) const
{
    const Jet x = Jet::variable(x0, length + 1);
    return reciprocal(G_jet(x).derivative());
}

Jet GhModel::h_aux_jet(double x0, std::size_t length) const
{
    const Jet x   = Jet::variable(x0, length + 1);
    const Jet gp  = G_jet(x).derivative();
    const Jet hv  = H_jet(x);
    const Jet hvp = hv.derivative();
    return -(hvp / (gp * hv.truncated(length)));
}

ExpSumParams GhModel::to_structural(const ExpSumParams& natural) const
{
    if (m_descriptor.kind != ModelKind::kGaussian)
    {
        return natural;
    }
    const Complex beta = m_descriptor.beta;
    ExpSumParams s;
    s.coefficients = natural.coefficients;
    s.exponents    = natural.exponents;
    for (Index j = 0; j < natural.size(); ++j)
    {
        const Complex a = natural.exponents(j);
        s.coefficients(j) *= std::exp(-beta * a * a);
        if (m_descriptor.mode == GaussianMode::kSubstituted)
        {
            s.exponents(j) = 2.0 * beta * a;
        }
    }
    return s;
}

ExpSumParams GhModel::from_structural(const ExpSumParams& structural) const
{
    if (m_descriptor.kind != ModelKind::kGaussian)
    {
        return structural;
    }
    const Complex beta = m_descriptor.beta;
    ExpSumParams n;
    n.coefficients = structural.coefficients;
    n.exponents    = structural.exponents;
    for (Index j = 0; j < structural.size(); ++j)
    {
        if (m_descriptor.mode == GaussianMode::kSubstituted)
        {
            n.exponents(j) = structural.exponents(j) / (2.0 * beta);
        }
        const Complex a = n.exponents(j);
        n.coefficients(j) *= std::exp(beta * a * a);
    }
    return n;
}

Complex GhModel::evaluate(const ExpSumParams& structural, double x) const
{
    const double gx = m_G(x);
    Complex acc = 0.0;
    for (Index j = 0; j < structural.size(); ++j)
    {
        acc += structural.coefficients(j) * std::exp(structural.exponents(j) * gx);
    }
    return m_H(x) * acc;
}

GhModel make_builtin_model(const ModelDescriptor& descriptor)
{
    GhModel m;
    m.m_descriptor = descriptor;
    switch (descriptor.kind)
    {
    case ModelKind::kClassical:
        m.m_G         = [](double x) { return x; };
        m.m_G_inverse = [](double t) { return t; };
        m.m_H         = [](double) { return Complex(1.0); };
        m.m_G_jet     = [](const Jet& x) { return x; };
        m.m_H_jet     = [](const Jet& x) { return Jet::constant(1.0, x.size()); };
        m.m_domain    = Interval{};
        break;

    case ModelKind::kGaussian:
    {
        const Complex beta = descriptor.beta;
        if (beta == Complex(0.0, 0.0))
        {
            throw std::invalid_argument("gaussian model: beta must be nonzero");
        }
        if (descriptor.mode == GaussianMode::kScaled)
        {
            if (beta.imag() != 0.0)
            {
                throw std::invalid_argument(
                    "gaussian model: scaled mode needs a real beta; use the "
                    "substituted mode for complex beta");
            }
            const double s = 2.0 * beta.real();
            m.m_G         = [s](double x) { return s * x; };
            m.m_G_inverse = [s](double t) { return t / s; };
            m.m_G_jet     = [s](const Jet& x) { return Complex(s) * x; };
        }
        else
        {
            m.m_G         = [](double x) { return x; };
            m.m_G_inverse = [](double t) { return t; };
            m.m_G_jet     = [](const Jet& x) { return x; };
        }
        m.m_H     = [beta](double x) { return std::exp(-beta * x * x); };
        m.m_H_jet = [beta](const Jet& x) { return exp(-beta * (x * x)); };
        m.m_domain = Interval{};
        break;
    }

    case ModelKind::kSine:
        m.m_G         = [](double x) { return std::sin(x); };
        m.m_G_inverse = [](double t) { return std::asin(std::clamp(t, -1.0, 1.0)); };
        m.m_H         = [](double) { return Complex(1.0); };
        m.m_G_jet     = [](const Jet& x) { return sin(x); };
        m.m_H_jet     = [](const Jet& x) { return Jet::constant(1.0, x.size()); };
        m.m_domain    = Interval{-std::numbers::pi / 2, std::numbers::pi / 2};
        break;

    case ModelKind::kCustom:
        throw std::invalid_argument(
            "make_builtin_model: custom models are built with GhModel::custom");
    }
    m.finalize_range();
    return m;
}

Complex modulated_gaussian_exponent(double kappa, double shift, Complex beta)
{
    return 2.0 * beta * shift + Complex(0.0, 2.0 * std::numbers::pi * kappa);
}

ModulatedGaussianParams modulated_gaussian_inverse(Complex alpha, double beta)
{
    if (beta == 0.0)
    {
        throw std::invalid_argument("modulated_gaussian_inverse: beta must be "
                                    "nonzero");
    }
    return {alpha.imag() / (2.0 * std::numbers::pi), alpha.real() / (2.0 * beta)};
}

//------------------------------------------------------------------------------
// Sampling
//------------------------------------------------------------------------------

CVector synthesize(const ExpSumParams& structural, const GhModel& model,
                   const std::vector<double>& points)
{
    CVector out(static_cast<Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const double x = points[i];
        if (!model.domain().contains(x, 1e-12))
        {
            throw DomainError("synthesize: point " + format_double(x) +
                                  " is outside the model domain",
                              static_cast<std::ptrdiff_t>(i));
        }
        out(static_cast<Index>(i)) = model.evaluate(structural, x);
    }
    return out;
}

std::vector<double> grid_points(const GhModel& model, const SampleGrid& grid)
{
    if (grid.h == 0.0)
    {
        throw std::invalid_argument("grid_points: step h must be nonzero");
    }
    if (!model.domain().contains(grid.x0, 1e-12))
    {
        throw DomainError("grid_points: x0 is outside the model domain", 0);
    }
    const double g0 = model.G(grid.x0);
    const Interval& range = model.range();
    std::vector<double> x(static_cast<std::size_t>(std::max<Index>(grid.count, 0)));
    for (Index l = 0; l < grid.count; ++l)
    {
        const double t = grid.h * static_cast<double>(l) + g0;
        const double tol = 1e-12 * (1.0 + std::abs(t));
        if (!range.contains(t, tol))
        {
            throw DomainError("grid_points: sample " + std::to_string(l) +
                                  " leaves the model domain (h l + G(x0) = " +
                                  format_double(t) + ")",
                              static_cast<std::ptrdiff_t>(l));
        }
        const double xl = model.G_inverse(std::clamp(t, range.lo, range.hi));
        if (!std::isfinite(xl) || !model.domain().contains(xl, 1e-12))
        {
            throw DomainError("grid_points: sample " + std::to_string(l) +
                                  " leaves the model domain",
                              static_cast<std::ptrdiff_t>(l));
        }
        x[static_cast<std::size_t>(l)] = xl;
    }
    return x;
}

NormalizedSampleSeq normalize_samples(const GhModel& model,
                                      const SampleGrid& grid,
                                      const CVector& raw)
{
    if (raw.size() != grid.count)
    {
        throw std::invalid_argument(
            "normalize_samples: sample count does not match the grid");
    }
    const std::vector<double> x = grid_points(model, grid);
    NormalizedSampleSeq seq;
    seq.values.resize(raw.size());
    seq.step   = grid.h;
    seq.offset = model.G(grid.x0);
    for (Index l = 0; l < raw.size(); ++l)
    {
        const Complex hv = model.H(x[static_cast<std::size_t>(l)]);
        if (std::abs(hv) < kHazard)
        {
            throw DivisionHazardError(
                "normalize_samples: |H(x_" + std::to_string(l) + ")| < 1e-14",
                static_cast<std::ptrdiff_t>(l));
        }
        seq.values(l) = raw(l) / hv;
    }
    return seq;
}

Complex generalized_shift_eval(const GhModel& model, double h,
                               const std::function<Complex(double)>& f,
                               double x)
{
    const double t = h + model.G(x);
    const Interval& range = model.range();
    if (!range.contains(t, 1e-12 * (1.0 + std::abs(t))))
    {
        throw DomainError("generalized_shift_eval: shifted point leaves the "
                          "model domain");
    }
    const double xs = model.G_inverse(std::clamp(t, range.lo, range.hi));
    if (!std::isfinite(xs) || !model.domain().contains(xs, 1e-12))
    {
        throw DomainError("generalized_shift_eval: shifted point leaves the "
                          "model domain");
    }
    return model.H(x) / model.H(xs) * f(xs);
}

GridValidation validate_grid(const GhModel& model, const SampleGrid& grid,
                             Index M)
{
    GridValidation out;
    auto fail = [&out](std::string msg) {
        out.ok = false;
        out.violations.push_back(std::move(msg));
    };
    const double ah = std::abs(grid.h);
    if (grid.h == 0.0)
    {
        fail("step: h must be nonzero");
    }
    if (!(grid.T > 0.0))
    {
        fail("aliasing: T must be positive");
    }
    else if (std::isfinite(grid.T) && !(ah < std::numbers::pi / grid.T))
    {
        fail("aliasing: |h| = " + format_double(ah) + " is not below pi/T = " +
             format_double(std::numbers::pi / grid.T));
    }
    if (model.domain().bounded())
    {
        const double span = model.G(model.domain().hi) - model.G(model.domain().lo);
        const double limit = std::abs(span) / (2.0 * static_cast<double>(std::max<Index>(M, 1)));
        if (!(ah < limit))
        {
            fail("span: |h| = " + format_double(ah) +
                 " is not below |G(b) - G(a)|/(2M) = " + format_double(limit));
        }
        if (grid.h != 0.0 && (grid.h > 0.0) != (span > 0.0))
        {
            fail("sign: h must have the sign of G(b) - G(a)");
        }
    }
    if (grid.count < 2 * M)
    {
        fail("count: " + std::to_string(grid.count) + " samples, at least 2M = " +
             std::to_string(2 * M) + " required");
    }
    if (grid.h != 0.0)
    {
        try
        {
            SampleGrid probe = grid;
            probe.count = std::max(grid.count, 2 * M);
            (void)grid_points(model, probe);
        }
        catch (const DomainError& e)
        {
            fail(std::string("domain: ") + e.what());
        }
    }
    return out;
}

} // namespace genprony
