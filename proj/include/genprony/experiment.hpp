#ifndef GENPRONY_EXPERIMENT_HPP
#define GENPRONY_EXPERIMENT_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "genprony/model.hpp"
#include "genprony/node_warp.hpp"
#include "genprony/recovery.hpp"
#include "genprony/varpro.hpp"

namespace genprony
{

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct GridConfig
{
    double x0 = 0.0;
    double h  = 1.0;
    Index N   = 1; ///< 2N samples are taken
    double T  = std::numeric_limits<double>::infinity();
};

struct DirectSolverConfig
{
    Index M = 1;
};

struct EspritSolverConfig
{
    Index L        = 1;
    double epsilon = 1e-8;
    RankMode rank_mode = RankMode::kAbsolute;
    std::optional<Index> order;
    /// Natural-form exponents known in advance; they are deflated first.
    std::vector<Complex> known_exponents;
};

enum class NoneqData
{
    kWarped, ///< values sum_j c_j exp(alpha_j (x0 + l h)) attached to the nodes
    kTrue,   ///< the true signal evaluated at the jittered nodes
};

struct NoneqSolverConfig
{
    Index L        = 1;
    double epsilon = 1e-8;
    RankMode rank_mode = RankMode::kAbsolute;
    std::optional<Index> order;
    /// Nodes are x0 + (l + u_l jitter) h with u_l uniform in [-1, 1].
    double jitter = 0.0;
    std::uint64_t jitter_seed = 1;
    WarpKind warp = WarpKind::kLinear;
    NoneqData data = NoneqData::kTrue;
};

struct DerivativeSolverConfig
{
    Index M = 1;
};

struct VarproSolverConfig
{
    Index L        = 1;
    double epsilon = 1e-8;
    RankMode rank_mode = RankMode::kAbsolute;
    std::optional<Index> order;
    VarproConfig lm;
    bool root_update = false;
};

using SolverConfig = std::variant<DirectSolverConfig, EspritSolverConfig,
                                  NoneqSolverConfig, DerivativeSolverConfig,
                                  VarproSolverConfig>;

std::string solver_name(const SolverConfig& solver);

struct NoiseConfig
{
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct ExperimentConfig
{
    std::string name = "experiment";
    ModelDescriptor model;
    std::optional<ExpSumParams> truth; ///< natural form
    GridConfig grid;
    SolverConfig solver = EspritSolverConfig{};
    NoiseConfig noise;
    std::optional<std::string> input; ///< CSV with index,x,re,im
    std::optional<std::string> output_dir;
    bool allow_invalid_grid = false;
};

/// Parses the JSON config format; throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& config);

/// Names accepted by preset().
std::vector<std::string> preset_names();

///
/// ex-gauss: shifted Gaussians with beta = i (substituted form), x0 = -1,
///           h = 1, 20 samples, ESPRIT.
/// ex-sine:  exp(alpha sin x) sums, h = 1/17, x0 = -pi/2 + 1/34, ESPRIT.
/// ex-table3: five classical terms, ESPRIT with N = 15, L = 10.
/// Throws std::invalid_argument listing the valid names.
///
ExperimentConfig preset(const std::string& name);

/// All configurations of a preset; ex-table3 adds the direct solver run on
/// ten samples.
std::vector<ExperimentConfig> preset_batch(const std::string& name);

///
/// Adds independent N(0, sigma^2) noise to the real and imaginary part of
/// every value from a seeded mt19937_64. Throws for sigma < 0.
///
CVector add_noise(const CVector& values, double sigma, std::uint64_t seed);

struct SampleDump
{
    std::vector<double> x;
    CVector values;
};

struct ExperimentResult
{
    bool ok = false;
    std::string error;
    ExperimentConfig config;
    GridValidation grid_validation;
    SolverReport report;
    std::optional<ExpSumParams> natural;
    std::optional<double> exponent_error;
    std::optional<double> coefficient_error;
    std::optional<double> signal_error;
    std::optional<VarproTrace> trace;
    SampleDump samples;
    SampleDump reconstruction; ///< 512 points across the sampling interval
    CVector truth_on_reconstruction;
    double wall_time = 0.0;

    /// Stable-order JSON report; numbers use 17 significant digits.
    std::string to_json(bool include_wall_time = true) const;
};

/// Runs one experiment. Solver failures are captured in the result;
/// configuration problems throw ConfigError.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Chains ESPRIT and Levenberg-Marquardt: an esprit solver block is turned
/// into a varpro block with default damping settings.
ExperimentConfig refine_config(const ExperimentConfig& config);

/// Writes report.json, samples.csv, reconstruction.csv and, for varpro runs,
/// trace.csv into `dir` (created if missing).
void write_outputs(const ExperimentResult& result, const std::string& dir);

} // namespace genprony

#endif // GENPRONY_EXPERIMENT_HPP
