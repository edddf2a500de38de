#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acceptance.hpp"
#include "soen/calibrate.hpp"
#include "soen/chain.hpp"
#include "soen/config.hpp"
#include "soen/error.hpp"
#include "soen/figures.hpp"
#include "soen/neuron.hpp"
#include "soen/sweep.hpp"

namespace {

using namespace soen;
using json = nlohmann::ordered_json;

enum Exit { ok = 0, config_error = 2, simulation_error = 3, acceptance_failure = 4 };

struct Options {
    std::string config_path;
    std::string out;
    std::string format;
    unsigned jobs = 0;
    std::uint64_t seed = 1;
    bool trace = false;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

config::RunConfig load_config(const Options& o) {
    return o.config_path.empty() ? config::load(SOEN_DATA_DIR "/defaults.cfg") : config::load(o.config_path);
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + o.out);
    f << text;
}

std::string format_or(const Options& o, const std::string& fallback) {
    const std::string f = o.format.empty() ? fallback : o.format;
    if (f != "csv" && f != "json") throw ConfigError("--format must be csv or json");
    return f;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json metadata(const config::RunConfig& cfg, const std::string& command) {
    return {{"tool", "soen"},
            {"version", SOEN_VERSION},
            {"command", command},
            {"config_hash", config::hash_hex(config::config_hash(cfg))}};
}

// Named scalar results as a one-row table (csv) or an object (json).
std::string render_record(const Options& o, const config::RunConfig& cfg, const std::string& command,
                          const std::vector<std::pair<std::string, double>>& fields,
                          const std::vector<std::string>& warnings = {}) {
    if (format_or(o, "json") == "json") {
        json j;
        j["metadata"] = metadata(cfg, command);
        json r = json::object();
        for (const auto& [k, v] : fields) r[k] = number(v);
        j["result"] = r;
        j["warnings"] = warnings;
        return j.dump(2) + "\n";
    }
    sweep::ResultTable t;
    t.title = command;
    t.config_hash = config::hash_hex(config::config_hash(cfg));
    t.error_column = false;
    t.rows.emplace_back();
    for (const auto& [k, v] : fields) {
        t.columns.push_back(k);
        t.rows.back().push_back(v);
    }
    return t.to_csv();
}

std::string render_table(const Options& o, const sweep::ResultTable& t) {
    return format_or(o, "csv") == "csv" ? t.to_csv() : t.to_json();
}

std::vector<std::pair<std::string, double>> ordered(const std::string& target,
                                                    const std::map<std::string, double>& r) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& k : sweep::target_outputs(target)) out.emplace_back(k, r.at(k));
    return out;
}

sweep::ResultTable series_table(const std::string& title, const config::RunConfig& cfg,
                                const ode::TimeSeries& s, const std::vector<std::string>& names) {
    sweep::ResultTable t;
    t.title = title;
    t.config_hash = config::hash_hex(config::config_hash(cfg));
    t.error_column = false;
    t.columns = {"t_s"};
    t.columns.insert(t.columns.end(), names.begin(), names.end());
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> row = {s.times[i]};
        row.insert(row.end(), s.states[i].begin(), s.states[i].end());
        t.rows.push_back(std::move(row));
    }
    return t;
}

int cmd_led(const Options& o) {
    const auto cfg = load_config(o);
    if (o.trace) {
        const auto tr = diode::run_square_pulse(cfg.diode, cfg.led_circuit(), cfg.led_t_on);
        emit(o, render_table(o, series_table("led trace", cfg, tr.series, {"I1_A", "V2_V"})));
        return ok;
    }
    emit(o, render_record(o, cfg, "led", ordered("led", sweep::evaluate_target("led", cfg))));
    return ok;
}

int cmd_htron(const Options& o) {
    const auto cfg = load_config(o);
    if (o.trace) {
        const auto pulse = cfg.pulse_kind == "square"
                               ? drive::square_pulse(cfg.ntron.channel_current, cfg.pulse_duration)
                               : cfg.ntron.pulse();
        const auto g = drive::drive_htron(cfg.thermal_stack(), cfg.channel, pulse, cfg.ntron.r_load);
        emit(o, render_table(o, series_table("htron trace", cfg, g.series, {"T1_K", "T2_K", "T3_K", "T4_K"})));
        return ok;
    }
    emit(o, render_record(o, cfg, "htron", ordered("htron", sweep::evaluate_target("htron", cfg))));
    return ok;
}

int cmd_chain(const Options& o) {
    const auto cfg = load_config(o);
    const auto cc = cfg.chain_config();
    const auto f = chain::fire(cc);
    const double E_amp =
        f.eta_amp > 0.0 ? chain::amplifier_energy(f.N_ph, cfg.zeta, f.eta_amp, cfg.diode.photon_wavelength)
                        : std::numeric_limits<double>::quiet_NaN();
    for (const auto& w : f.warnings) std::cerr << "warning: " << w << '\n';
    emit(o, render_record(o, cfg, "chain",
                          {{"N_ph", f.N_ph},
                           {"t_on", f.t_on},
                           {"tau_nT", cc.square_on_time ? std::numeric_limits<double>::quiet_NaN() : f.tau_nT},
                           {"E_LED", f.E_LED},
                           {"E_gate", f.E_gate},
                           {"E_total", f.E_total},
                           {"eta_RC", f.eta_RC},
                           {"eta_LED", f.eta_LED},
                           {"eta_hT", f.eta_hT},
                           {"eta_amp", f.eta_amp},
                           {"E_amp", E_amp},
                           {"trigger_to_ntron", f.timings.trigger_to_ntron},
                           {"ntron_to_switch", f.timings.ntron_to_switch},
                           {"switch_to_first_photon", f.timings.switch_to_first_photon}},
                          f.warnings));
    return ok;
}

int cmd_neuron(const Options& o) {
    const auto cfg = load_config(o);
    const auto base_dir = o.config_path.empty() ? std::filesystem::path(SOEN_DATA_DIR)
                                                : std::filesystem::path(o.config_path).parent_path();
    std::vector<neuron::SpikeTrain> inputs(cfg.neuron.synapses.size());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto in = i < cfg.synapse_inputs.size() ? cfg.synapse_inputs[i] : config::SynapseInput{};
        if (!in.file.empty()) {
            std::filesystem::path p(in.file);
            if (p.is_relative()) p = base_dir / p;
            try {
                inputs[i] = neuron::parse_spike_csv(read_file(p.string()));
            } catch (const ConfigError& e) {
                throw ConfigError("synapse." + std::to_string(i) + ".input_file: " + e.what());
            }
        } else if (in.period > 0.0) {
            const double stop = in.t_stop < 0.0 ? cfg.neuron_t_end : std::min(in.t_stop, cfg.neuron_t_end);
            for (long k = 0;; ++k) {
                const double t = in.phase + static_cast<double>(k) * in.period;
                if (t > stop || t >= cfg.neuron_t_end) break;
                inputs[i].times.push_back(t);
            }
        }
    }
    const auto run = neuron::run_neuron(cfg.neuron, inputs, {0.0, cfg.neuron_t_end});
    for (std::size_t i = 0; i < run.dropped_inputs.size(); ++i)
        if (run.dropped_inputs[i] > 0)
            std::cerr << "synapse " << i << ": " << run.dropped_inputs[i] << " input spikes inside dead time\n";
    if (format_or(o, "csv") == "csv") {
        emit(o, "# soen " SOEN_VERSION " neuron config_hash=" + config::hash_hex(config::config_hash(cfg)) + "\n" +
                    neuron::format_spike_csv(run.output));
    } else {
        json j;
        j["metadata"] = metadata(cfg, "neuron");
        j["spikes"] = run.output.times;
        j["dropped_inputs"] = run.dropped_inputs;
        emit(o, j.dump(2) + "\n");
    }
    return ok;
}

int cmd_sweep(const Options& o, const std::string& spec_path) {
    const auto cfg = load_config(o);
    const auto spec = sweep::parse_spec(read_file(spec_path));
    const auto table = sweep::run_sweep(spec, cfg, o.jobs);
    std::size_t failed = 0;
    for (const auto& e : table.errors) failed += e.empty() ? 0 : 1;
    if (failed) std::cerr << failed << " of " << table.rows.size() << " sweep points failed\n";
    emit(o, render_table(o, table));
    return ok;
}

int cmd_figure(const Options& o, const std::string& id) {
    const auto cfg = load_config(o);
    emit(o, render_table(o, figures::figure_dataset(id, cfg, o.jobs)));
    return ok;
}

int cmd_calibrate(const Options& o) {
    const auto cfg = load_config(o);
    const auto start = htron::load_materials(cfg.materials_file);
    const auto r = calibrate::calibrate_thermal(cfg.stack, start, cfg.channel);
    std::cerr << "spacer cv_cubic " << r.spacer_cv_cubic << " J/(kg K^4), channel cv_cubic " << r.channel_cv_cubic
              << " J/(kg K^4)\nturn-on " << r.turn_on * 1e9 << " ns, t_above " << r.t_above * 1e9
              << " ns, residual " << r.residual_norm << " after " << r.iterations << " iterations\n";
    emit(o, "# Written by `soen calibrate-thermal`.\n# name density[kg/m^3] k[W/(m K)] "
            "cv_linear[J/(kg K^2)] cv_cubic[J/(kg K^4)]\n" +
                htron::format_materials(r.materials));
    return ok;
}

int cmd_validate(const Options& o) {
    const auto cfg = load_config(o);
    std::ostringstream report;
    const auto results = acceptance::run_all(cfg, [&](const acceptance::Criterion& c) {
        const auto text = acceptance::format(c);
        std::cout << text << std::flush;
        report << text;
    });
    std::size_t passed = 0;
    for (const auto& c : results) passed += c.passed() ? 1 : 0;
    const std::string summary =
        std::to_string(passed) + "/" + std::to_string(results.size()) + " criteria passed\n";
    std::cout << summary;
    if (!o.out.empty()) emit(o, report.str() + summary);
    return passed == results.size() ? ok : acceptance_failure;
}

int cmd_delivery(const Options& o) {
    const auto cfg = load_config(o);
    const auto d = chain::delivery_reliability(cfg.chain_N_target, cfg.k_out, cfg.link_loss_dB,
                                               cfg.detector_efficiency);
    const double sampled = chain::sample_zero_fraction(cfg.chain_N_target, cfg.k_out, cfg.link_loss_dB,
                                                       cfg.detector_efficiency, o.seed, cfg.delivery_trials);
    emit(o, render_record(o, cfg, "delivery",
                          {{"mean_photons", d.mean_photons},
                           {"p_zero", d.p_zero},
                           {"p_zero_sampled", sampled},
                           {"seed", static_cast<double>(o.seed)}}));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superconducting optoelectronic transmitter simulator"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "Run configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", o.out, "Write output here instead of stdout");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs", o.jobs, "Worker threads for sweeps (0 = all cores)");
    app.add_option("--seed", o.seed, "Seed for Monte Carlo delivery sampling");
    app.add_flag("--trace", o.trace, "led/htron: emit the time series instead of the summary");
    app.set_version_flag("--version", SOEN_VERSION);

    std::string spec_path, figure_id;
    auto* led = app.add_subcommand("led", "LED drive transient and photon count");
    auto* htron = app.add_subcommand("htron", "hTron thermal response to the gate pulse");
    auto* chain = app.add_subcommand("chain", "One firing event through the amplifier chain");
    auto* neuron = app.add_subcommand("neuron", "Loop neuron driven by the configured synapse inputs");
    auto* sweep = app.add_subcommand("sweep", "Parameter sweep from a spec file");
    sweep->add_option("spec", spec_path, "Sweep spec")->required()->check(CLI::ExistingFile);
    auto* figure = app.add_subcommand("figure", "Figure dataset");
    figure->add_option("id", figure_id, "fig4b, fig4c, fig6a, fig6b or fig7")->required();
    auto* calibrate = app.add_subcommand("calibrate-thermal", "Fit heat-capacity coefficients; writes a materials table");
    auto* validate = app.add_subcommand("validate", "Run the acceptance suite");
    auto* delivery = app.add_subcommand("delivery", "Poisson delivery statistics");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*led) return cmd_led(o);
        if (*htron) return cmd_htron(o);
        if (*chain) return cmd_chain(o);
        if (*neuron) return cmd_neuron(o);
        if (*sweep) return cmd_sweep(o, spec_path);
        if (*figure) return cmd_figure(o, figure_id);
        if (*calibrate) return cmd_calibrate(o);
        if (*validate) return cmd_validate(o);
        if (*delivery) return cmd_delivery(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const SimulationError& e) {
        std::cerr << "simulation error: " << e.what() << '\n';
        return simulation_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return simulation_error;
    }
    return config_error;
}
