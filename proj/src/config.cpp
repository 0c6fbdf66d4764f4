#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

#include "genprony/experiment.hpp"
#include "json_writer.hpp"

namespace genprony
{

namespace
{

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where)
{
    if (!obj.is_object())
    {
        throw ConfigError(where + " must be an object");
    }
    for (const auto& [k, v] : obj.items())
    {
        if (!allowed.count(k))
        {
            throw ConfigError("unknown key '" + k + "' in " + where);
        }
    }
}

double get_number(const json& obj, const std::string& key,
                  const std::string& where)
{
    if (!obj.contains(key))
    {
        throw ConfigError(where + "." + key + " is required");
    }
    const json& v = obj.at(key);
    if (v.is_string())
    {
        const std::string s = v.get<std::string>();
        if (s == "inf")
        {
            return std::numeric_limits<double>::infinity();
        }
        throw ConfigError(where + "." + key + " must be a number");
    }
    if (!v.is_number())
    {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback,
                     const std::string& where)
{
    return obj.contains(key) ? get_number(obj, key, where) : fallback;
}

Index get_index(const json& obj, const std::string& key,
                const std::string& where)
{
    if (!obj.contains(key) || !obj.at(key).is_number_integer())
    {
        throw ConfigError(where + "." + key + " must be an integer");
    }
    return obj.at(key).get<Index>();
}

std::optional<Index> get_optional_index(const json& obj, const std::string& key,
                                        const std::string& where)
{
    if (!obj.contains(key) || obj.at(key).is_null())
    {
        return std::nullopt;
    }
    return get_index(obj, key, where);
}

Complex to_complex(const json& v, const std::string& where)
{
    if (v.is_number())
    {
        return {v.get<double>(), 0.0};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ConfigError(where + " must be a number or a [re, im] pair");
}

CVector to_cvector(const json& v, const std::string& where)
{
    if (!v.is_array())
    {
        throw ConfigError(where + " must be an array");
    }
    CVector out(static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
    {
        out(static_cast<Index>(i)) =
            to_complex(v[i], where + "[" + std::to_string(i) + "]");
    }
    return out;
}

RankMode parse_rank_mode(const json& obj, const std::string& where)
{
    if (!obj.contains("rank_mode"))
    {
        return RankMode::kAbsolute;
    }
    const std::string s = obj.at("rank_mode").get<std::string>();
    if (s == "absolute")
    {
        return RankMode::kAbsolute;
    }
    if (s == "relative")
    {
        return RankMode::kRelative;
    }
    throw ConfigError(where + ".rank_mode must be absolute or relative");
}

std::string rank_mode_name(RankMode m)
{
    return m == RankMode::kAbsolute ? "absolute" : "relative";
}

std::uint64_t get_seed(const json& obj, const std::string& key,
                       std::uint64_t fallback, const std::string& where)
{
    if (!obj.contains(key))
    {
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0))
    {
        throw ConfigError(where + "." + key + " must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

SolverConfig parse_solver(const json& obj)
{
    check_keys(obj, {"direct", "esprit", "noneq", "derivatives", "varpro"},
               "solver");
    if (obj.size() != 1)
    {
        throw ConfigError("solver must contain exactly one block");
    }
    const auto& [name, body] = *obj.items().begin();
    const std::string where = "solver." + name;
    if (name == "direct")
    {
        check_keys(body, {"M"}, where);
        return DirectSolverConfig{get_index(body, "M", where)};
    }
    if (name == "derivatives")
    {
        check_keys(body, {"M"}, where);
        return DerivativeSolverConfig{get_index(body, "M", where)};
    }
    if (name == "esprit")
    {
        check_keys(body, {"L", "epsilon", "rank_mode", "order", "known_exponents"},
                   where);
        EspritSolverConfig s;
        s.L         = get_index(body, "L", where);
        s.epsilon   = get_number_or(body, "epsilon", 1e-8, where);
        s.rank_mode = parse_rank_mode(body, where);
        s.order     = get_optional_index(body, "order", where);
        if (body.contains("known_exponents"))
        {
            const CVector k = to_cvector(body.at("known_exponents"),
                                         where + ".known_exponents");
            s.known_exponents.assign(k.data(), k.data() + k.size());
        }
        return s;
    }
    if (name == "noneq")
    {
        check_keys(body, {"L", "epsilon", "rank_mode", "order", "jitter",
                          "jitter_seed", "warp", "data"},
                   where);
        NoneqSolverConfig s;
        s.L           = get_index(body, "L", where);
        s.epsilon     = get_number_or(body, "epsilon", 1e-8, where);
        s.rank_mode   = parse_rank_mode(body, where);
        s.order       = get_optional_index(body, "order", where);
        s.jitter      = get_number_or(body, "jitter", 0.0, where);
        s.jitter_seed = get_seed(body, "jitter_seed", 1, where);
        const std::string warp = body.value("warp", std::string("linear"));
        if (warp == "linear")
        {
            s.warp = WarpKind::kLinear;
        }
        else if (warp == "cubic")
        {
            s.warp = WarpKind::kCubic;
        }
        else
        {
            throw ConfigError(where + ".warp must be linear or cubic");
        }
        const std::string data = body.value("data", std::string("true"));
        if (data == "true")
        {
            s.data = NoneqData::kTrue;
        }
        else if (data == "warped")
        {
            s.data = NoneqData::kWarped;
        }
        else
        {
            throw ConfigError(where + ".data must be true or warped");
        }
        if (!(s.jitter >= 0.0 && s.jitter < 0.5))
        {
            throw ConfigError(where + ".jitter must lie in [0, 0.5)");
        }
        return s;
    }
    // varpro
    check_keys(body, {"L", "epsilon", "rank_mode", "order", "initial_damping",
                      "damping_increase", "damping_decrease", "max_iterations",
                      "step_tolerance", "gradient_tolerance", "step_form",
                      "root_update"},
               where);
    VarproSolverConfig s;
    s.L         = get_index(body, "L", where);
    s.epsilon   = get_number_or(body, "epsilon", 1e-8, where);
    s.rank_mode = parse_rank_mode(body, where);
    s.order     = get_optional_index(body, "order", where);
    s.lm.initial_damping  = get_number_or(body, "initial_damping", s.lm.initial_damping, where);
    s.lm.damping_increase = get_number_or(body, "damping_increase", s.lm.damping_increase, where);
    s.lm.damping_decrease = get_number_or(body, "damping_decrease", s.lm.damping_decrease, where);
    if (body.contains("max_iterations"))
    {
        s.lm.max_iterations = static_cast<int>(get_index(body, "max_iterations", where));
    }
    s.lm.step_tolerance     = get_number_or(body, "step_tolerance", s.lm.step_tolerance, where);
    s.lm.gradient_tolerance = get_number_or(body, "gradient_tolerance", s.lm.gradient_tolerance, where);
    const std::string form = body.value("step_form", std::string("real_parameter"));
    if (form == "real_parameter")
    {
        s.lm.step_form = StepForm::kRealParameter;
    }
    else if (form == "as_printed")
    {
        s.lm.step_form = StepForm::kAsPrinted;
    }
    else
    {
        throw ConfigError(where + ".step_form must be real_parameter or as_printed");
    }
    s.root_update = body.value("root_update", false);
    try
    {
        s.lm.validate();
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(where + ": " + e.what());
    }
    return s;
}

void validate_config(const ExperimentConfig& c)
{
    if (!(c.grid.h != 0.0) || !std::isfinite(c.grid.h))
    {
        throw ConfigError("grid.h must be finite and nonzero");
    }
    if (c.grid.N < 1)
    {
        throw ConfigError("grid.N must be positive");
    }
    if (!(c.grid.T > 0.0))
    {
        throw ConfigError("grid.T must be positive");
    }
    if (!(c.noise.sigma >= 0.0))
    {
        throw ConfigError("noise.sigma must be non-negative");
    }
    if (!c.truth && !c.input)
    {
        throw ConfigError("either truth or input must be given");
    }
    if (c.truth)
    {
        try
        {
            c.truth->validate();
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError(std::string("truth: ") + e.what());
        }
    }
    const Index n2 = 2 * c.grid.N;
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DirectSolverConfig> ||
                          std::is_same_v<S, DerivativeSolverConfig>)
            {
                if (s.M < 1 || 2 * s.M > n2)
                {
                    throw ConfigError("solver M must satisfy 1 <= M <= N");
                }
            }
            else
            {
                if (s.L < 1 || s.L > c.grid.N)
                {
                    throw ConfigError("solver L must satisfy 1 <= L <= N");
                }
                if (!(s.epsilon > 0.0))
                {
                    throw ConfigError("solver epsilon must be positive");
                }
            }
            if constexpr (std::is_same_v<S, NoneqSolverConfig> ||
                          std::is_same_v<S, DerivativeSolverConfig>)
            {
                if (c.model.kind != ModelKind::kClassical &&
                    std::is_same_v<S, NoneqSolverConfig>)
                {
                    throw ConfigError("the noneq solver works with the classical "
                                      "model");
                }
                if (c.input && std::is_same_v<S, DerivativeSolverConfig>)
                {
                    throw ConfigError("the derivatives solver synthesizes its "
                                      "data from truth");
                }
            }
        },
        c.solver);
}

void write_complex_list(detail::JsonWriter& w, const CVector& v)
{
    w.value(v);
}

} // namespace

std::string solver_name(const SolverConfig& solver)
{
    static const char* names[] = {"direct", "esprit", "noneq", "derivatives",
                                  "varpro"};
    return names[solver.index()];
}

ExperimentConfig parse_config(const std::string& text)
{
    json root;
    try
    {
        root = json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try
    {
        check_keys(root, {"name", "model", "truth", "grid", "solver", "noise",
                          "input", "output", "allow_invalid_grid"},
                   "config");
        ExperimentConfig c;
        c.name = root.value("name", std::string("experiment"));

        if (!root.contains("model"))
        {
            throw ConfigError("model is required");
        }
        const json& m = root.at("model");
        check_keys(m, {"kind", "beta", "mode"}, "model");
        c.model.kind = parse_model_kind(m.value("kind", std::string("classical")));
        if (m.contains("beta"))
        {
            c.model.beta = to_complex(m.at("beta"), "model.beta");
        }
        if (m.contains("mode"))
        {
            c.model.mode = parse_gaussian_mode(m.at("mode").get<std::string>());
        }

        if (root.contains("truth"))
        {
            const json& t = root.at("truth");
            check_keys(t, {"coefficients", "exponents"}, "truth");
            ExpSumParams p;
            p.coefficients = to_cvector(t.at("coefficients"), "truth.coefficients");
            p.exponents    = to_cvector(t.at("exponents"), "truth.exponents");
            c.truth = p;
        }

        if (!root.contains("grid"))
        {
            throw ConfigError("grid is required");
        }
        const json& g = root.at("grid");
        check_keys(g, {"x0", "h", "N", "T"}, "grid");
        c.grid.x0 = get_number(g, "x0", "grid");
        c.grid.h  = get_number(g, "h", "grid");
        c.grid.N  = get_index(g, "N", "grid");
        c.grid.T  = get_number_or(g, "T", std::numeric_limits<double>::infinity(), "grid");

        if (!root.contains("solver"))
        {
            throw ConfigError("solver is required");
        }
        c.solver = parse_solver(root.at("solver"));

        if (root.contains("noise"))
        {
            const json& n = root.at("noise");
            check_keys(n, {"sigma", "seed"}, "noise");
            c.noise.sigma = get_number_or(n, "sigma", 0.0, "noise");
            c.noise.seed  = get_seed(n, "seed", 0, "noise");
        }
        if (root.contains("input"))
        {
            c.input = root.at("input").get<std::string>();
        }
        if (root.contains("output"))
        {
            const json& o = root.at("output");
            check_keys(o, {"dir"}, "output");
            if (o.contains("dir"))
            {
                c.output_dir = o.at("dir").get<std::string>();
            }
        }
        c.allow_invalid_grid = root.value("allow_invalid_grid", false);
        validate_config(c);
        return c;
    }
    catch (const json::exception& e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    catch (const ConfigError&)
    {
        throw;
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError(e.what());
    }
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void detail::write_config(JsonWriter& w, const ExperimentConfig& c)
{
    w.begin_object();
    w.key("name");
    w.value(c.name);

    w.key("model");
    w.begin_object();
    w.key("kind");
    w.value(to_string(c.model.kind));
    if (c.model.kind == ModelKind::kGaussian)
    {
        w.key("beta");
        w.value(c.model.beta);
        w.key("mode");
        w.value(to_string(c.model.mode));
    }
    w.end_object();

    if (c.truth)
    {
        w.key("truth");
        w.begin_object();
        w.key("coefficients");
        write_complex_list(w, c.truth->coefficients);
        w.key("exponents");
        write_complex_list(w, c.truth->exponents);
        w.end_object();
    }

    w.key("grid");
    w.begin_object();
    w.key("x0");
    w.value(c.grid.x0);
    w.key("h");
    w.value(c.grid.h);
    w.key("N");
    w.value(static_cast<std::int64_t>(c.grid.N));
    w.key("T");
    if (std::isinf(c.grid.T))
    {
        w.value("inf");
    }
    else
    {
        w.value(c.grid.T);
    }
    w.end_object();

    w.key("solver");
    w.begin_object();
    w.key(solver_name(c.solver));
    w.begin_object();
    auto write_common = [&w](Index L, double eps, RankMode mode,
                             const std::optional<Index>& order) {
        w.key("L");
        w.value(static_cast<std::int64_t>(L));
        w.key("epsilon");
        w.value(eps);
        w.key("rank_mode");
        w.value(rank_mode_name(mode));
        if (order)
        {
            w.key("order");
            w.value(static_cast<std::int64_t>(*order));
        }
    };
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, DirectSolverConfig> ||
                          std::is_same_v<S, DerivativeSolverConfig>)
            {
                w.key("M");
                w.value(static_cast<std::int64_t>(s.M));
            }
            else if constexpr (std::is_same_v<S, EspritSolverConfig>)
            {
                write_common(s.L, s.epsilon, s.rank_mode, s.order);
                if (!s.known_exponents.empty())
                {
                    w.key("known_exponents");
                    w.begin_array();
                    for (const Complex& a : s.known_exponents)
                    {
                        w.value(a);
                    }
                    w.end_array();
                }
            }
            else if constexpr (std::is_same_v<S, NoneqSolverConfig>)
            {
                write_common(s.L, s.epsilon, s.rank_mode, s.order);
                w.key("jitter");
                w.value(s.jitter);
                w.key("jitter_seed");
                w.value(static_cast<std::int64_t>(s.jitter_seed));
                w.key("warp");
                w.value(s.warp == WarpKind::kLinear ? "linear" : "cubic");
                w.key("data");
                w.value(s.data == NoneqData::kTrue ? "true" : "warped");
            }
            else
            {
                write_common(s.L, s.epsilon, s.rank_mode, s.order);
                w.key("initial_damping");
                w.value(s.lm.initial_damping);
                w.key("damping_increase");
                w.value(s.lm.damping_increase);
                w.key("damping_decrease");
                w.value(s.lm.damping_decrease);
                w.key("max_iterations");
                w.value(static_cast<std::int64_t>(s.lm.max_iterations));
                w.key("step_tolerance");
                w.value(s.lm.step_tolerance);
                w.key("gradient_tolerance");
                w.value(s.lm.gradient_tolerance);
                w.key("step_form");
                w.value(s.lm.step_form == StepForm::kRealParameter ? "real_parameter"
                                                                   : "as_printed");
                w.key("root_update");
                w.value(s.root_update);
            }
        },
        c.solver);
    w.end_object();
    w.end_object();

    w.key("noise");
    w.begin_object();
    w.key("sigma");
    w.value(c.noise.sigma);
    w.key("seed");
    w.value(static_cast<std::int64_t>(c.noise.seed));
    w.end_object();

    if (c.input)
    {
        w.key("input");
        w.value(*c.input);
    }
    if (c.output_dir)
    {
        w.key("output");
        w.begin_object();
        w.key("dir");
        w.value(*c.output_dir);
        w.end_object();
    }
    w.key("allow_invalid_grid");
    w.value(c.allow_invalid_grid);
    w.end_object();
}

std::string config_to_json(const ExperimentConfig& config)
{
    detail::JsonWriter w;
    detail::write_config(w, config);
    return w.str();
}

//------------------------------------------------------------------------------
// Presets
//------------------------------------------------------------------------------

std::vector<std::string> preset_names()
{
    return {"ex-gauss", "ex-sine", "ex-table3"};
}

std::vector<ExperimentConfig> preset_batch(const std::string& name)
{
    using namespace std::complex_literals;
    if (name == "ex-gauss")
    {
        ExperimentConfig c;
        c.name  = "ex-gauss";
        c.model = {ModelKind::kGaussian, 1i, GaussianMode::kSubstituted};
        ExpSumParams p;
        p.coefficients.resize(10);
        p.coefficients << Complex(-1.754, -0.756), Complex(-1.193, 1.694),
            Complex(0.174, -0.279), Complex(-1.617, -1.261), Complex(2.066, 1.620),
            Complex(-1.831, 1.919), Complex(-1.644, -0.245), Complex(-1.976, -1.556),
            Complex(-1.634, -0.968), Complex(-0.386, -0.365);
        p.exponents.resize(10);
        p.exponents << 0.380, -0.951, 0.411, 0.845, -1.113, -1.530, -0.813, -0.725,
            -0.303, -0.031;
        c.truth  = p;
        c.grid   = {-1.0, 1.0, 10, 3.1};
        c.solver = EspritSolverConfig{10, 1e-8, RankMode::kAbsolute, std::nullopt, {}};
        return {c};
    }
    if (name == "ex-sine")
    {
        ExperimentConfig c;
        c.name  = "ex-sine";
        c.model = {ModelKind::kSine, 0.0, GaussianMode::kScaled};
        ExpSumParams p;
        p.coefficients.resize(10);
        p.coefficients << 2.104, 0.363, 2.578, 1.180, 0.497, 1.892, 2.274, 2.933,
            -2.997, 2.192;
        p.exponents.resize(10);
        p.exponents << 1.499, 0.540, -1.591, 1.046, -2.619, 0.791, 1.011, 1.444,
            2.455, 3.030;
        c.truth  = p;
        const double h = 1.0 / 17.0;
        c.grid   = {-std::numbers::pi / 2 + 1.0 / 34.0, h, 10, 1.0};
        c.solver = EspritSolverConfig{10, 1e-8, RankMode::kAbsolute, std::nullopt, {}};
        return {c};
    }
    if (name == "ex-table3")
    {
        ExperimentConfig c;
        c.name  = "ex-table3-esprit";
        c.model = {ModelKind::kClassical, 0.0, GaussianMode::kScaled};
        ExpSumParams p;
        p.coefficients.resize(5);
        p.coefficients << 0.5, 2.0, -3.0, 0.4i, -0.2;
        p.exponents.resize(5);
        p.exponents << std::numbers::pi / 2, 1i * (std::numbers::pi / 4),
            Complex(0.4, 1.0), -0.5, -1.0;
        c.truth  = p;
        c.grid   = {0.0, 0.1, 15, 10.0};
        c.solver = EspritSolverConfig{10, 1e-8, RankMode::kAbsolute, std::nullopt, {}};

        ExperimentConfig d = c;
        d.name   = "ex-table3-direct";
        d.grid.N = 5;
        d.solver = DirectSolverConfig{5};
        return {c, d};
    }
    std::string valid;
    for (const auto& n : preset_names())
    {
        valid += (valid.empty() ? "" : ", ") + n;
    }
    throw std::invalid_argument("unknown preset '" + name + "' (valid: " + valid + ")");
}

ExperimentConfig preset(const std::string& name)
{
    return preset_batch(name).front();
}

} // namespace genprony
