// Command-line harness: run configs, presets and ESPRIT + LM refinement.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genprony/experiment.hpp"

using namespace genprony;

namespace
{

constexpr int kExitOk       = 0;
constexpr int kExitFailure  = 1;
constexpr int kExitBadInput = 2;

std::string output_dir_for(const ExperimentConfig& c, const std::string& out,
                           bool batch)
{
    if (!out.empty())
    {
        return batch ? out + "/" + c.name : out;
    }
    return c.output_dir.value_or("");
}

int run_batch(const std::vector<ExperimentConfig>& configs, const std::string& out)
{
    std::vector<ExperimentResult> results;
    results.reserve(configs.size());
    for (const auto& c : configs)
    {
        results.push_back(run_experiment(c));
    }

    const bool batch = results.size() > 1;
    if (batch)
    {
        std::cout << "[\n";
    }
    bool ok = true;
    for (std::size_t i = 0; i < results.size(); ++i)
    {
        const auto& r = results[i];
        ok = ok && r.ok;
        std::cout << r.to_json() << (i + 1 < results.size() ? ",\n" : "\n");
        const std::string dir = output_dir_for(r.config, out, batch);
        if (!dir.empty())
        {
            write_outputs(r, dir);
        }
        if (!r.ok)
        {
            std::cerr << r.config.name << ": " << r.error << '\n';
        }
    }
    if (batch)
    {
        std::cout << "]\n";
    }
    return ok ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prony-type recovery of generalized exponential sums"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    bool force = false;

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    run->add_option("--config", config_path, "JSON experiment config")->required();
    run->add_option("--out", out, "Directory for report.json and CSV dumps");
    run->add_flag("--force", force, "Run even if the sampling grid fails validation");

    std::string preset_name;
    std::optional<double> noise_sigma;
    std::optional<std::uint64_t> seed;
    bool print_config = false;
    auto* pre = app.add_subcommand("preset", "Run a built-in example configuration");
    pre->add_option("name", preset_name, "ex-gauss, ex-sine or ex-table3")->required();
    pre->add_option("--noise-sigma", noise_sigma, "Noise level per real component");
    pre->add_option("--seed", seed, "Noise seed");
    pre->add_option("--out", out, "Directory for report.json and CSV dumps");
    pre->add_flag("--print-config", print_config, "Print the configuration instead of running");

    auto* refine = app.add_subcommand("refine", "Run ESPRIT followed by Levenberg-Marquardt");
    refine->add_option("--config", config_path, "JSON experiment config with an esprit block")
        ->required();
    refine->add_option("--out", out, "Directory for report.json and CSV dumps");
    refine->add_flag("--force", force, "Run even if the sampling grid fails validation");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return kExitBadInput;
    }

    try
    {
        std::vector<ExperimentConfig> configs;
        if (*run || *refine)
        {
            ExperimentConfig c = load_config(config_path);
            c.allow_invalid_grid = c.allow_invalid_grid || force;
            configs.push_back(*refine ? refine_config(c) : c);
        }
        else
        {
            try
            {
                configs = preset_batch(preset_name);
            }
            catch (const std::invalid_argument& e)
            {
                throw ConfigError(e.what());
            }
            for (auto& c : configs)
            {
                if (noise_sigma)
                {
                    c.noise.sigma = *noise_sigma;
                }
                if (seed)
                {
                    c.noise.seed = *seed;
                }
            }
            if (print_config)
            {
                for (const auto& c : configs)
                {
                    std::cout << config_to_json(c) << '\n';
                }
                return kExitOk;
            }
        }
        return run_batch(configs, out);
    }
    catch (const ConfigError& e)
    {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitBadInput;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
