#include "soen/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "soen/calibrate.hpp"
#include "soen/chain.hpp"
#include "soen/constants.hpp"
#include "soen/error.hpp"

namespace soen::sweep {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string format_cell(double v) {
    if (std::isnan(v)) return "NaN";
    if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

}  // namespace

std::string ResultTable::to_csv() const {
    std::ostringstream out;
    out << "# soen " << version << " " << title << " config_hash=" << config_hash << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
    if (error_column) out << (columns.empty() ? "" : ",") << "error";
    out << '\n';
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t i = 0; i < rows[r].size(); ++i) out << (i ? "," : "") << format_cell(rows[r][i]);
        if (error_column) out << (rows[r].empty() ? "" : ",") << csv_escape(r < errors.size() ? errors[r] : "");
        out << '\n';
    }
    return out.str();
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json j;
    j["metadata"] = {{"tool", "soen"}, {"version", version}, {"title", title}, {"config_hash", config_hash}};
    j["columns"] = columns;
    auto rows_json = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        auto r = nlohmann::ordered_json::array();
        for (double v : row) {
            if (std::isfinite(v)) r.push_back(v);
            else r.push_back(nullptr);
        }
        rows_json.push_back(std::move(r));
    }
    j["rows"] = std::move(rows_json);
    if (error_column) j["errors"] = errors;
    return j.dump(2) + "\n";
}

std::size_t ResultTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw ConfigError("no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

SweepSpec parse_spec(const std::string& text) {
    SweepSpec spec;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "sweep spec line " + std::to_string(lineno) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected '='");
        const std::string lhs = trim(line.substr(0, eq));
        const std::string rhs = trim(line.substr(eq + 1));
        if (lhs == "target") {
            spec.target = rhs;
        } else if (lhs == "outputs") {
            spec.outputs = split_list(rhs);
        } else if (lhs.rfind("set ", 0) == 0) {
            spec.fixed.emplace_back(trim(lhs.substr(4)), rhs);
        } else if (lhs.rfind("axis ", 0) == 0) {
            Axis axis;
            axis.path = trim(lhs.substr(5));
            // Values come first, then an optional unit after the last number.
            std::string values = rhs, unit;
            const auto last_space = rhs.find_last_of(" \t");
            if (last_space != std::string::npos) {
                const std::string tail = trim(rhs.substr(last_space + 1));
                if (!tail.empty() && !(std::isdigit(static_cast<unsigned char>(tail[0])) || tail[0] == '-' ||
                                       tail[0] == '+' || tail[0] == '.')) {
                    unit = tail;
                    values = trim(rhs.substr(0, last_space));
                }
            }
            config::RunConfig probe;
            const std::string canonical = [&] {
                for (const auto& f : config::schema())
                    if (f.path == axis.path) return f.unit;
                if (!config::has_path(probe, axis.path)) throw ConfigError("unknown parameter " + axis.path);
                return std::string("?");
            }();
            auto to_si = [&](const std::string& v) {
                if (canonical == "?") {
                    config::RunConfig c;
                    config::set_value(c, axis.path, v + " " + unit);
                    return config::get_si(c, axis.path);
                }
                return config::parse_quantity(v, unit, canonical);
            };
            for (const auto& item : split_list(values)) {
                const auto c1 = item.find(':');
                if (c1 == std::string::npos) {
                    axis.values.push_back(to_si(item));
                    continue;
                }
                const auto c2 = item.find(':', c1 + 1);
                if (c2 == std::string::npos) throw ConfigError(where + "range must be start:step:stop");
                const double a = to_si(item.substr(0, c1)), step = to_si(item.substr(c1 + 1, c2 - c1 - 1)),
                             b = to_si(item.substr(c2 + 1));
                if (!(step > 0.0) || b < a) throw ConfigError(where + "bad range");
                const auto n = static_cast<long>(std::floor((b - a) / step * (1.0 + 1e-12))) + 1;
                for (long k = 0; k < n; ++k) axis.values.push_back(a + static_cast<double>(k) * step);
            }
            if (axis.values.empty()) throw ConfigError(where + "axis has no values");
            spec.axes.push_back(std::move(axis));
        } else {
            throw ConfigError(where + "unknown directive '" + lhs + "'");
        }
    }
    return spec;
}

const std::vector<std::string>& targets() {
    static const std::vector<std::string> t = {"led", "led_min_pulse", "htron", "required_tau", "chain",
                                               "efficiency", "delivery", "steady_power"};
    return t;
}

const std::vector<std::string>& target_outputs(const std::string& target) {
    static const std::map<std::string, std::vector<std::string>> out = {
        {"led", {"N_ph", "E_RC", "E_RC_without_r1", "eta_RC", "eta_LED", "V2_final", "charge_error"}},
        {"led_min_pulse", {"t_min", "E_RC", "eta_RC"}},
        {"htron", {"t_above", "turn_on", "E_gate", "T_channel_peak", "tau_nT"}},
        {"required_tau", {"tau_nT", "ratio", "square_duration", "E_exp", "E_square", "energy_ratio"}},
        {"chain",
         {"N_ph", "t_on", "tau_nT", "E_LED", "E_gate", "E_total", "eta_RC", "eta_LED", "eta_hT", "eta_amp",
          "E_amp", "trigger_to_ntron", "ntron_to_switch", "switch_to_first_photon"}},
        {"efficiency", {"N_ph", "t_on", "tau_nT", "eta_LED", "eta_hT", "eta_amp", "E_amp", "E_amp_no_zeta"}},
        {"delivery", {"mean_photons", "p_zero"}},
        {"steady_power", {"power", "power_density"}}};
    const auto it = out.find(target);
    if (it == out.end()) throw ConfigError("unknown sweep target " + target);
    return it->second;
}

std::map<std::string, double> evaluate_target(const std::string& target, const config::RunConfig& cfg) {
    cfg.validate();
    std::map<std::string, double> r;
    if (target == "led") {
        const auto circuit = cfg.led_circuit();
        const auto tr = diode::run_square_pulse(cfg.diode, circuit, cfg.led_t_on);
        r["N_ph"] = diode::photon_count(tr, cfg.diode);
        r["E_RC"] = diode::dissipated_energy(tr);
        r["E_RC_without_r1"] = tr.dissipated.total_without_r1();
        r["eta_RC"] = r["E_RC"] > 0.0 ? diode::rc_efficiency(tr, cfg.diode) : nan;
        r["eta_LED"] = (r["eta_RC"] > 0.0 && cfg.diode.eta_qe > 0.0)
                           ? diode::led_efficiency(r["eta_RC"], cfg.diode.eta_qe, cfg.diode.eta_wg)
                           : nan;
        r["V2_final"] = tr.V2_final();
        r["charge_error"] =
            (tr.charge_source - tr.charge_htron - tr.charge_pn - cfg.diode.C * tr.V2_final()) /
            std::max(tr.charge_source, 1e-300);
    } else if (target == "led_min_pulse") {
        const auto circuit = cfg.led_circuit();
        r["t_min"] = diode::min_pulse_for_photons(cfg.diode, circuit, cfg.led_N_target);
        const auto tr = diode::run_square_pulse(cfg.diode, circuit, r["t_min"]);
        r["E_RC"] = diode::dissipated_energy(tr);
        r["eta_RC"] = diode::rc_efficiency(tr, cfg.diode);
    } else if (target == "htron") {
        const auto stack = cfg.thermal_stack();
        const auto pulse = cfg.pulse_kind == "square"
                               ? drive::square_pulse(cfg.ntron.channel_current, cfg.pulse_duration)
                               : cfg.ntron.pulse();
        const auto g = drive::drive_htron(stack, cfg.channel, pulse, cfg.ntron.r_load);
        r["t_above"] = g.t_above;
        const auto on = ode::find_crossing(g.series, htron::channel_node, cfg.channel.T_c, ode::Direction::rising);
        r["turn_on"] = on ? *on - pulse.t_start : nan;
        r["E_gate"] = g.gate_energy;
        double peak = 0.0;
        for (const auto& T : g.series.states) peak = std::max(peak, T[htron::channel_node]);
        r["T_channel_peak"] = peak;
        r["tau_nT"] = cfg.pulse_kind == "square" ? nan : cfg.ntron.tau();
    } else if (target == "required_tau") {
        const auto stack = cfg.thermal_stack();
        const double t = cfg.htron_t_target;
        r["tau_nT"] = drive::required_tau_for_ton(stack, cfg.channel, cfg.ntron, t);
        r["ratio"] = r["tau_nT"] / t;
        r["square_duration"] = drive::required_square_for_ton(stack, cfg.channel, cfg.ntron, t);
        auto exp_pulse = cfg.ntron;
        exp_pulse.L_nT = r["tau_nT"] * exp_pulse.r_load;
        r["E_exp"] = drive::gate_energy(exp_pulse.pulse(), cfg.ntron.r_load);
        r["E_square"] = drive::gate_energy(drive::square_pulse(cfg.ntron.channel_current, r["square_duration"]),
                                           cfg.ntron.r_load);
        r["energy_ratio"] = r["E_exp"] / r["E_square"];
    } else if (target == "chain") {
        const auto cc = cfg.chain_config();
        const auto f = chain::fire(cc);
        r["N_ph"] = f.N_ph;
        r["t_on"] = f.t_on;
        r["tau_nT"] = cc.square_on_time ? nan : f.tau_nT;
        r["E_LED"] = f.E_LED;
        r["E_gate"] = f.E_gate;
        r["E_total"] = f.E_total;
        r["eta_RC"] = f.eta_RC;
        r["eta_LED"] = f.eta_LED;
        r["eta_hT"] = f.eta_hT;
        r["eta_amp"] = f.eta_amp;
        r["E_amp"] = f.eta_amp > 0.0
                         ? chain::amplifier_energy(f.N_ph, cfg.zeta, f.eta_amp, cfg.diode.photon_wavelength)
                         : nan;
        r["trigger_to_ntron"] = f.timings.trigger_to_ntron;
        r["ntron_to_switch"] = f.timings.ntron_to_switch;
        r["switch_to_first_photon"] = f.timings.switch_to_first_photon;
    } else if (target == "efficiency") {
        const auto row = chain::efficiency_point(cfg.chain_config(), cfg.chain_N_target);
        r["N_ph"] = row.N_ph;
        r["t_on"] = row.t_on;
        r["tau_nT"] = row.tau_nT;
        r["eta_LED"] = row.eta_LED;
        r["eta_hT"] = row.eta_hT;
        r["eta_amp"] = row.eta_amp;
        r["E_amp"] = row.E_amp;
        r["E_amp_no_zeta"] = row.E_amp_no_zeta;
    } else if (target == "delivery") {
        const auto d = chain::delivery_reliability(cfg.chain_N_target, cfg.k_out, cfg.link_loss_dB,
                                                   cfg.detector_efficiency);
        r["mean_photons"] = d.mean_photons;
        r["p_zero"] = d.p_zero;
    } else if (target == "steady_power") {
        const auto stack = cfg.thermal_stack();
        r["power"] = htron::steady_state_power(stack, cfg.channel);
        r["power_density"] = htron::steady_state_power_density(stack, cfg.channel);
    } else {
        throw ConfigError("unknown sweep target " + target);
    }
    return r;
}

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

ResultTable run_sweep(const SweepSpec& spec, const config::RunConfig& base, unsigned jobs) {
    if (spec.axes.empty()) throw ConfigError("sweep needs at least one axis");
    const auto& available = target_outputs(spec.target);
    const auto outputs = spec.outputs.empty() ? available : spec.outputs;
    for (const auto& o : outputs)
        if (std::find(available.begin(), available.end(), o) == available.end())
            throw ConfigError("target " + spec.target + " has no output " + o);

    config::RunConfig fixed = base;
    for (const auto& [path, value] : spec.fixed) config::set_value(fixed, path, value);
    for (const auto& axis : spec.axes) {
        if (!config::has_path(fixed, axis.path)) throw ConfigError("unknown parameter " + axis.path);
        if (axis.values.empty()) throw ConfigError("axis " + axis.path + " has no values");
    }

    std::size_t total = 1;
    for (const auto& axis : spec.axes) total *= axis.values.size();

    ResultTable table;
    table.title = "sweep:" + spec.target;
    table.config_hash = config::hash_hex(config::config_hash(fixed));
    for (const auto& axis : spec.axes) table.columns.push_back(axis.path);
    for (const auto& o : outputs) table.columns.push_back(o);
    table.rows.assign(total, {});
    table.errors.assign(total, "");

    parallel_for(total, jobs, [&](std::size_t index) {
        // First axis varies slowest.
        std::vector<double> point(spec.axes.size());
        std::size_t rem = index;
        for (std::size_t a = spec.axes.size(); a-- > 0;) {
            point[a] = spec.axes[a].values[rem % spec.axes[a].values.size()];
            rem /= spec.axes[a].values.size();
        }
        std::vector<double> row = point;
        try {
            config::RunConfig cfg = fixed;
            for (std::size_t a = 0; a < point.size(); ++a) config::set_si(cfg, spec.axes[a].path, point[a]);
            const auto result = evaluate_target(spec.target, cfg);
            for (const auto& o : outputs) row.push_back(result.at(o));
        } catch (const std::exception& e) {
            row.resize(point.size());
            row.resize(point.size() + outputs.size(), nan);
            table.errors[index] = e.what();
        }
        table.rows[index] = std::move(row);
    });
    return table;
}

}  // namespace soen::sweep
