#ifndef GENPRONY_MODEL_HPP
#define GENPRONY_MODEL_HPP

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "genprony/jet.hpp"
#include "genprony/numerics.hpp"

namespace genprony
{

///
/// Sparse exponential-sum parameters: `coefficients(j)` multiplies the term
/// with exponent `exponents(j)`.
///
struct ExpSumParams
{
    CVector coefficients;
    CVector exponents;

    Index size() const
    {
        return exponents.size();
    }

    /// Throws std::invalid_argument unless both vectors have equal nonzero
    /// length, every coefficient is nonzero and the exponents are pairwise
    /// separated by more than 1e-12.
    void validate() const;
};

/// Closed real interval; either end may be infinite.
struct Interval
{
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    bool bounded() const;
    bool contains(double x, double tol = 0.0) const;
};

enum class ModelKind
{
    kClassical,
    kGaussian,
    kSine,
    kCustom,
};

///
/// How a Gaussian expansion sum_j c_j exp(-beta (x - a_j)^2) is mapped onto
/// H(x) exp(alpha G(x)).
///
enum class GaussianMode
{
    kScaled,      ///< G(x) = 2 beta x, exponents unchanged; beta must be real
    kSubstituted, ///< G(x) = x, structural exponents 2 beta a_j
};

/// Serializable description of a built-in model.
struct ModelDescriptor
{
    ModelKind kind     = ModelKind::kClassical;
    Complex beta       = 0.0;
    GaussianMode mode  = GaussianMode::kScaled;
};

std::string to_string(ModelKind kind);
std::string to_string(GaussianMode mode);
ModelKind parse_model_kind(const std::string& name);
GaussianMode parse_gaussian_mode(const std::string& name);

///
/// Structural pair (G, H) of a generalized exponential sum
/// f(x) = sum_j c_j H(x) exp(alpha_j G(x)).
///
/// Built-in models also carry the map between the user-facing ("natural")
/// parameters and the structural ones the solvers see. For the Gaussian
/// family the structural coefficient is c_j exp(-beta a_j^2).
///
class GhModel
{
public:
    using RealFn    = std::function<double(double)>;
    using ComplexFn = std::function<Complex(double)>;
    using JetFn     = std::function<Jet(const Jet&)>;

    ///
    /// User-supplied model. G must be strictly monotone and H nonzero on
    /// `domain`; both are checked on a 1024-point probe grid together with
    /// |G_inverse(G(x)) - x| <= 1e-10 (1 + |x|). Unbounded ends are probed
    /// over a window of width 20. The jet handles are optional and enable
    /// derivative-based recovery.
    ///
    static GhModel custom(RealFn G, RealFn G_inverse, ComplexFn H,
                          Interval domain, JetFn G_jet = {},
                          JetFn H_jet = {});

    double G(double x) const
    {
        return m_G(x);
    }

    double G_inverse(double t) const
    {
        return m_G_inverse(t);
    }

    Complex H(double x) const
    {
        return m_H(x);
    }

    const Interval& domain() const
    {
        return m_domain;
    }

    /// Image of the domain under G, ordered low to high.
    const Interval& range() const
    {
        return m_range;
    }

    /// Sign of G' (+1 increasing, -1 decreasing).
    int orientation() const
    {
        return m_orientation;
    }

    const ModelDescriptor& descriptor() const
    {
        return m_descriptor;
    }

    bool has_derivatives() const
    {
        return static_cast<bool>(m_G_jet) && static_cast<bool>(m_H_jet);
    }

    /// Taylor jets of G and H composed with `x`; throw CapabilityError when
    /// the model was built without jet handles.
    Jet G_jet(const Jet& x) const;
    Jet H_jet(const Jet& x) const;

    /// Jets of g = 1/G' and h_aux = -H'/(G' H) at x0 with `length`
    /// coefficients each.
    Jet g_jet(double x0, std::size_t length) const;
    Jet h_aux_jet(double x0, std::size_t length) const;

    /// Natural to structural parameters and back.
    ExpSumParams to_structural(const ExpSumParams& natural) const;
    ExpSumParams from_structural(const ExpSumParams& structural) const;

    /// Evaluates the natural-form signal at x.
    Complex evaluate(const ExpSumParams& structural, double x) const;

private:
    friend GhModel make_builtin_model(const ModelDescriptor&);

    GhModel() = default;
    void finalize_range();

    RealFn m_G;
    RealFn m_G_inverse;
    ComplexFn m_H;
    JetFn m_G_jet;
    JetFn m_H_jet;
    Interval m_domain;
    Interval m_range;
    int m_orientation = 1;
    ModelDescriptor m_descriptor;
};

///
/// classical: G(x) = x, H = 1 on the real line.
/// gaussian:  H(x) = exp(-beta x^2), G per GaussianMode, real line.
/// sine:      G(x) = sin x, H = 1 on [-pi/2, pi/2].
///
GhModel make_builtin_model(const ModelDescriptor& descriptor);

inline GhModel make_classical_model()
{
    return make_builtin_model({ModelKind::kClassical, 0.0,
                               GaussianMode::kScaled});
}

inline GhModel make_gaussian_model(Complex beta,
                                   GaussianMode mode = GaussianMode::kScaled)
{
    return make_builtin_model({ModelKind::kGaussian, beta, mode});
}

inline GhModel make_sine_model()
{
    return make_builtin_model({ModelKind::kSine, 0.0, GaussianMode::kScaled});
}

/// alpha = 2 beta s + 2 pi i kappa for a modulated Gaussian term.
Complex modulated_gaussian_exponent(double kappa, double shift, Complex beta);

struct ModulatedGaussianParams
{
    double kappa = 0.0;
    double shift = 0.0;
};

/// Inverse of modulated_gaussian_exponent for real beta.
ModulatedGaussianParams modulated_gaussian_inverse(Complex alpha, double beta);

//------------------------------------------------------------------------------
// Sampling
//------------------------------------------------------------------------------

struct SampleGrid
{
    double x0 = 0.0;
    double h  = 1.0;
    Index count = 0;
    double T  = std::numeric_limits<double>::infinity();
};

///
/// Prony-ready values f_l = f(x_l) / H(x_l) on the grid
/// x_l = G^{-1}(h l + G(x0)), together with the step h and offset G(x0).
///
struct NormalizedSampleSeq
{
    CVector values;
    double step   = 1.0;
    double offset = 0.0;
};

/// Values sum_j c_j H(x) exp(alpha_j G(x)) with structural parameters.
CVector synthesize(const ExpSumParams& structural, const GhModel& model,
                   const std::vector<double>& points);

/// x_l = G^{-1}(h l + G(x0)) for l < grid.count. Throws DomainError naming
/// the first l whose abscissa leaves the domain.
std::vector<double> grid_points(const GhModel& model, const SampleGrid& grid);

/// Divides raw samples by H at the grid points. Throws DivisionHazardError
/// when |H(x_l)| < 1e-14.
NormalizedSampleSeq normalize_samples(const GhModel& model,
                                      const SampleGrid& grid,
                                      const CVector& raw);

/// (S f)(x) = H(x) / H(x') f(x') with x' = G^{-1}(h + G(x)).
Complex generalized_shift_eval(const GhModel& model, double h,
                               const std::function<Complex(double)>& f,
                               double x);

struct GridValidation
{
    bool ok = true;
    std::vector<std::string> violations;
};

///
/// Checks the sampling step conditions for M terms:
/// 0 < |h| < pi / T (an infinite T means no bound is known and only h != 0
/// is required); on bounded domains also |h| < |G(b) - G(a)| / (2M) and
/// sign(h) = sign(G(b) - G(a)); all grid points in the domain and at least
/// 2M of them.
///
GridValidation validate_grid(const GhModel& model, const SampleGrid& grid,
                             Index M);

} // namespace genprony

#endif // GENPRONY_MODEL_HPP
