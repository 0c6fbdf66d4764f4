#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "genprony/errors.hpp"
#include "genprony/experiment.hpp"
#include "genprony/recovery.hpp"
#include "genprony/varpro.hpp"

namespace py = pybind11;
using namespace genprony;

namespace
{

EspritOptions esprit_options(std::optional<Index> order, bool relative)
{
    EspritOptions o;
    o.order     = order;
    o.rank_mode = relative ? RankMode::kRelative : RankMode::kAbsolute;
    return o;
}

GhModel builtin(const std::string& kind, Complex beta, const std::string& mode)
{
    return make_builtin_model({parse_model_kind(kind), beta, parse_gaussian_mode(mode)});
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Prony-type recovery of generalized exponential sums";

    py::register_exception<IllPosedError>(m, "IllPosedError", PyExc_ArithmeticError);
    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_TypeError);

    py::class_<SolverReport>(m, "SolverReport")
        .def_readonly("detected_order", &SolverReport::detected_order)
        .def_readonly("exponents", &SolverReport::exponents)
        .def_readonly("roots", &SolverReport::roots)
        .def_readonly("coefficients", &SolverReport::coefficients)
        .def_readonly("singular_values", &SolverReport::singular_values)
        .def_readonly("linear_residual", &SolverReport::linear_residual)
        .def_readonly("hankel_condition", &SolverReport::hankel_condition)
        .def_readonly("step", &SolverReport::step)
        .def_readonly("diagnostics", &SolverReport::diagnostics)
        .def_readonly("warnings", &SolverReport::warnings);

    py::class_<GhModel>(m, "Model")
        .def(py::init(&builtin), py::arg("kind") = "classical", py::arg("beta") = Complex(0.0),
             py::arg("mode") = "scaled")
        .def("G", &GhModel::G)
        .def("G_inverse", &GhModel::G_inverse)
        .def("H", &GhModel::H)
        .def("grid_points",
             [](const GhModel& model, double x0, double h, Index count) {
                 return grid_points(model, {x0, h, count});
             },
             py::arg("x0"), py::arg("h"), py::arg("count"))
        .def("synthesize",
             [](const GhModel& model, const CVector& coefficients, const CVector& exponents,
                const std::vector<double>& x) {
                 return synthesize(model.to_structural({coefficients, exponents}), model, x);
             },
             py::arg("coefficients"), py::arg("exponents"), py::arg("x"),
             "Evaluates the natural-form signal at the points x.")
        .def("normalize",
             [](const GhModel& model, double x0, double h, const CVector& raw) {
                 const NormalizedSampleSeq s =
                     normalize_samples(model, {x0, h, raw.size()}, raw);
                 return py::make_tuple(s.values, s.step, s.offset);
             },
             py::arg("x0"), py::arg("h"), py::arg("raw"))
        .def("to_natural",
             [](const GhModel& model, const SolverReport& r) {
                 const ExpSumParams p = to_natural(r, model);
                 return py::make_tuple(p.coefficients, p.exponents);
             });

    m.def("prony_direct",
          [](const CVector& values, Index M, double step, double offset) {
              return prony_direct({values, step, offset}, M);
          },
          py::arg("values"), py::arg("M"), py::arg("step") = 1.0, py::arg("offset") = 0.0);

    m.def("esprit",
          [](const CVector& values, Index N, Index L, double eps, double step, double offset,
             std::optional<Index> order, bool relative) {
              return esprit({values, step, offset}, N, L, eps, esprit_options(order, relative));
          },
          py::arg("values"), py::arg("N"), py::arg("L"), py::arg("eps") = 1e-8,
          py::arg("step") = 1.0, py::arg("offset") = 0.0, py::arg("order") = py::none(),
          py::arg("relative") = false);

    m.def("recover_from_derivatives",
          [](const CVector& derivatives, const GhModel& model, double x0, Index M) {
              return recover_from_derivatives(derivatives, model, x0, M);
          },
          py::arg("derivatives"), py::arg("model"), py::arg("x0"), py::arg("M"));

    m.def("operator_weights",
          [](const GhModel& model, double x0, Index order) {
              return operator_weights(model, x0, order).lambda;
          },
          py::arg("model"), py::arg("x0"), py::arg("order"));

    m.def("deflate",
          [](const CVector& values, Complex root) { return deflate({values, 1.0, 0.0}, root).values; },
          py::arg("values"), py::arg("root"));

    m.def("objective", &objective, py::arg("z"), py::arg("y"));
    m.def("stationarity_residual", &stationarity_residual, py::arg("z"), py::arg("y"));

    m.def("levenberg_marquardt",
          [](const CVector& z0, const CVector& y, int max_iterations) {
              VarproConfig cfg;
              cfg.max_iterations = max_iterations;
              const VarproResult r = levenberg_marquardt(z0, y, cfg);
              std::vector<double> objectives;
              for (const auto& rec : r.trace.records)
              {
                  objectives.push_back(rec.objective);
              }
              return py::make_tuple(r.z, r.coefficients, objectives, to_string(r.trace.reason));
          },
          py::arg("z0"), py::arg("y"), py::arg("max_iterations") = 100,
          "Returns (z, coefficients, objective per trace record, termination).");

    m.def("add_noise", &add_noise, py::arg("values"), py::arg("sigma"), py::arg("seed"));

    m.def("preset_names", &preset_names);
    m.def("preset_configs",
          [](const std::string& name) {
              std::vector<std::string> out;
              for (const auto& c : preset_batch(name))
              {
                  out.push_back(config_to_json(c));
              }
              return out;
          },
          py::arg("name"), "JSON texts of every configuration of a preset.");

    m.def("run_config",
          [](const std::string& json_text, bool include_wall_time) {
              return run_experiment(parse_config(json_text)).to_json(include_wall_time);
          },
          py::arg("config"), py::arg("include_wall_time") = true,
          "Runs a JSON experiment config and returns the JSON report.");
}
