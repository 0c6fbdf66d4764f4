#include <filesystem>
#include <fstream>

#include "genprony/experiment.hpp"
#include "json_writer.hpp"

namespace genprony
{

namespace
{

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    out << text;
}

void optional_number(detail::JsonWriter& w, const char* key,
                     const std::optional<double>& v)
{
    w.key(key);
    if (v)
    {
        w.value(*v);
    }
    else
    {
        w.null();
    }
}

} // namespace

std::string ExperimentResult::to_json(bool include_wall_time) const
{
    detail::JsonWriter w;
    w.begin_object();
    w.key("name");
    w.value(config.name);
    w.key("solver");
    w.value(solver_name(config.solver));
    w.key("status");
    w.value(ok ? "ok" : "failure");
    w.key("error");
    w.value(error);

    w.key("config");
    detail::write_config(w, config);
    w.key("grid_validation");
    w.begin_object();
    w.key("ok");
    w.value(grid_validation.ok);
    w.key("violations");
    w.begin_array();
    for (const auto& v : grid_validation.violations)
    {
        w.value(v);
    }
    w.end_array();
    w.end_object();

    w.key("result");
    w.begin_object();
    w.key("detected_order");
    w.value(static_cast<std::int64_t>(report.detected_order));
    w.key("exponents");
    w.value(natural ? natural->exponents : CVector());
    w.key("coefficients");
    w.value(natural ? natural->coefficients : CVector());
    w.key("structural_exponents");
    w.value(report.exponents);
    w.key("structural_coefficients");
    w.value(report.coefficients);
    w.key("roots");
    w.value(report.roots);
    w.key("step");
    w.value(report.step);
    w.key("singular_values");
    w.value(report.singular_values);
    w.key("linear_residual");
    w.value(report.linear_residual);
    w.key("hankel_condition");
    w.value(report.hankel_condition);
    w.key("diagnostics");
    w.begin_object();
    for (const auto& [k, v] : report.diagnostics)
    {
        w.key(k);
        w.value(v);
    }
    w.end_object();
    w.key("warnings");
    w.begin_array();
    for (const auto& msg : report.warnings)
    {
        w.value(msg);
    }
    w.end_array();
    w.end_object();

    w.key("errors");
    w.begin_object();
    optional_number(w, "exponent_max_error", exponent_error);
    optional_number(w, "coefficient_max_error", coefficient_error);
    optional_number(w, "signal_max_error", signal_error);
    w.end_object();

    if (trace)
    {
        w.key("refinement");
        w.begin_object();
        w.key("termination");
        w.value(to_string(trace->reason));
        w.key("records");
        w.value(static_cast<std::int64_t>(trace->records.size()));
        w.key("initial_objective");
        w.value(trace->records.front().objective);
        w.key("final_objective");
        w.value(trace->records.back().objective);
        w.end_object();
    }

    if (include_wall_time)
    {
        w.key("wall_time");
        w.value(wall_time);
    }
    w.end_object();

    return w.str();
}

void write_outputs(const ExperimentResult& result, const std::string& dir)
{
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    write_file(root / "report.json", result.to_json());

    std::string samples = "index,x,re,im\n";
    for (Index i = 0; i < result.samples.values.size(); ++i)
    {
        samples += std::to_string(i) + ',' +
                   detail::format_number(result.samples.x[static_cast<std::size_t>(i)]) +
                   ',' + detail::format_number(result.samples.values(i).real()) + ',' +
                   detail::format_number(result.samples.values(i).imag()) + '\n';
    }
    write_file(root / "samples.csv", samples);

    const bool with_truth = result.truth_on_reconstruction.size() ==
                            result.reconstruction.values.size();
    std::string recon = with_truth ? "x,re,im,true_re,true_im\n" : "x,re,im\n";
    for (Index i = 0; i < result.reconstruction.values.size(); ++i)
    {
        recon += detail::format_number(result.reconstruction.x[static_cast<std::size_t>(i)]) +
                 ',' + detail::format_number(result.reconstruction.values(i).real()) +
                 ',' + detail::format_number(result.reconstruction.values(i).imag());
        if (with_truth)
        {
            recon += ',' + detail::format_number(result.truth_on_reconstruction(i).real()) +
                     ',' + detail::format_number(result.truth_on_reconstruction(i).imag());
        }
        recon += '\n';
    }
    write_file(root / "reconstruction.csv", recon);

    if (result.trace)
    {
        write_file(root / "trace.csv", result.trace->to_csv());
    }
}

} // namespace genprony
