#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soen/chain.hpp"
#include "soen/config.hpp"
#include "soen/diode.hpp"
#include "soen/error.hpp"
#include "soen/figures.hpp"
#include "soen/sweep.hpp"

namespace py = pybind11;
using namespace soen;

namespace {

using Overrides = std::map<std::string, std::string>;

config::RunConfig make_config(const std::optional<std::string>& path, const Overrides& overrides) {
    auto cfg = path ? config::load(*path) : config::load(SOEN_DATA_DIR "/defaults.cfg");
    for (const auto& [k, v] : overrides) config::set_value(cfg, k, v);
    cfg.validate();
    return cfg;
}

py::dict table_dict(const sweep::ResultTable& t) {
    py::dict d;
    d["title"] = t.title;
    d["columns"] = t.columns;
    d["rows"] = t.rows;
    d["errors"] = t.errors;
    d["config_hash"] = t.config_hash;
    d["version"] = t.version;
    d["csv"] = t.to_csv();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Superconducting optoelectronic transmitter models";
    m.attr("__version__") = SOEN_VERSION;
    m.attr("DATA_DIR") = SOEN_DATA_DIR;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

    m.def("targets", &sweep::targets);
    m.def("target_outputs", &sweep::target_outputs, py::arg("target"));
    m.def("figure_ids", &figures::figure_ids);

    m.def(
        "dump_config",
        [](std::optional<std::string> path, const Overrides& o) { return config::dump(make_config(path, o)); },
        py::arg("config") = py::none(), py::arg("overrides") = Overrides{});

    m.def(
        "evaluate",
        [](const std::string& target, std::optional<std::string> path, const Overrides& o) {
            const auto cfg = make_config(path, o);
            py::gil_scoped_release release;
            return sweep::evaluate_target(target, cfg);
        },
        py::arg("target"), py::arg("config") = py::none(), py::arg("overrides") = Overrides{},
        "Runs one sweep target on a configuration and returns all of its outputs (SI).");

    m.def(
        "sweep",
        [](const std::string& spec_text, std::optional<std::string> path, const Overrides& o, unsigned jobs) {
            const auto cfg = make_config(path, o);
            const auto spec = sweep::parse_spec(spec_text);
            sweep::ResultTable t;
            {
                py::gil_scoped_release release;
                t = sweep::run_sweep(spec, cfg, jobs);
            }
            return table_dict(t);
        },
        py::arg("spec"), py::arg("config") = py::none(), py::arg("overrides") = Overrides{}, py::arg("jobs") = 0);

    m.def(
        "figure",
        [](const std::string& id, std::optional<std::string> path, const Overrides& o, unsigned jobs) {
            const auto cfg = make_config(path, o);
            sweep::ResultTable t;
            {
                py::gil_scoped_release release;
                t = figures::figure_dataset(id, cfg, jobs);
            }
            return table_dict(t);
        },
        py::arg("id"), py::arg("config") = py::none(), py::arg("overrides") = Overrides{}, py::arg("jobs") = 0);

    m.def(
        "forward_voltage",
        [](double current, std::optional<std::string> path, const Overrides& o) {
            return diode::forward_voltage(make_config(path, o).diode, current);
        },
        py::arg("current"), py::arg("config") = py::none(), py::arg("overrides") = Overrides{});

    m.def(
        "poisson_zero",
        [](double N_ph, int k_out, double loss_dB, double detector_efficiency) {
            return chain::delivery_reliability(N_ph, k_out, loss_dB, detector_efficiency).p_zero;
        },
        py::arg("N_ph"), py::arg("k_out"), py::arg("loss_dB") = 0.0, py::arg("detector_efficiency") = 1.0);
}
