#include "soen/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "soen/error.hpp"

namespace soen::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
}

std::string normalize_unit(std::string u) {
    u.erase(std::remove_if(u.begin(), u.end(), [](unsigned char c) { return std::isspace(c); }), u.end());
    replace_all(u, "\xCE\xA9", "Ohm");  // Omega
    replace_all(u, "ohm", "Ohm");
    replace_all(u, "\xE2\x96\xA1", "sq");  // white square
    replace_all(u, "\xC2\xB5", "u");       // micro sign
    replace_all(u, "\xCE\xBC", "u");       // greek mu
    return u;
}

// Decimal exponent of each SI prefix.
const std::map<std::string, int>& prefixes() {
    static const std::map<std::string, int> p = {
        {"", 0}, {"f", -15}, {"p", -12}, {"n", -9}, {"u", -6},
        {"m", -3}, {"c", -2}, {"k", 3}, {"M", 6}, {"G", 9}};
    return p;
}

double parse_number(const std::string& text) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("'" + text + "' is not a number");
    }
    if (pos != text.size()) throw ConfigError("'" + text + "' is not a number");
    if (!std::isfinite(v)) throw ConfigError("'" + text + "' is not finite");
    return v;
}

// Shortest text that reads back to the same double.
std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace

double parse_quantity(const std::string& value, const std::string& unit_in, const std::string& canonical) {
    const double v = parse_number(trim(value));
    const std::string unit = normalize_unit(unit_in);
    if (canonical.empty()) {
        if (unit.empty() || unit == "1") return v;
        throw ConfigError("expected a dimensionless value, got unit '" + unit + "'");
    }
    if (unit.empty()) throw ConfigError("missing unit (expected " + canonical + ")");
    if (unit == canonical) return v;

    std::size_t head_end = 0;
    while (head_end < canonical.size() && std::isalpha(static_cast<unsigned char>(canonical[head_end]))) ++head_end;
    const std::string head = canonical.substr(0, head_end);
    const std::string tail = canonical.substr(head_end);
    const std::string suffix = head + tail;
    if (head.empty() || head == "kg" || head == "dB" || unit.size() <= suffix.size() ||
        unit.compare(unit.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw ConfigError("unit '" + unit + "' is not compatible with " + canonical);
    const auto it = prefixes().find(unit.substr(0, unit.size() - suffix.size()));
    if (it == prefixes().end()) throw ConfigError("unit '" + unit + "' is not compatible with " + canonical);
    int power = 1;
    if (!tail.empty() && tail[0] == '^') power = std::stoi(tail.substr(1));
    const int exponent = it->second * power;
    return exponent >= 0 ? v * std::pow(10.0, exponent) : v / std::pow(10.0, -exponent);
}

namespace {

Field num(std::string path, std::string unit, std::function<double&(RunConfig&)> ref) {
    Field f;
    f.path = std::move(path);
    f.unit = unit;
    f.get = [ref](const RunConfig& c) { return format_number(ref(const_cast<RunConfig&>(c))); };
    f.set = [ref, unit](RunConfig& c, const std::string& v, const std::string& u) {
        ref(c) = parse_quantity(v, u, unit);
    };
    return f;
}

Field integer(std::string path, std::function<int&(RunConfig&)> ref) {
    Field f;
    f.path = std::move(path);
    f.unit = "";
    f.get = [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); };
    f.set = [ref](RunConfig& c, const std::string& v, const std::string& u) {
        const double x = parse_quantity(v, u, "");
        if (x != std::floor(x) || std::abs(x) > 2e9) throw ConfigError("expected an integer");
        ref(c) = static_cast<int>(x);
    };
    return f;
}

Field text(std::string path, std::function<std::string&(RunConfig&)> ref) {
    Field f;
    f.path = std::move(path);
    f.unit = "string";
    f.get = [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); };
    f.set = [ref](RunConfig& c, const std::string& v, const std::string& u) {
        ref(c) = u.empty() ? v : v + " " + u;
    };
    return f;
}

std::vector<Field> build_schema() {
    std::vector<Field> s;
#define NUM(path, unit, expr) s.push_back(num(path, unit, [](RunConfig& c) -> double& { return expr; }))
    NUM("diode.N_a", "m^-3", c.diode.N_a);
    NUM("diode.N_d", "m^-3", c.diode.N_d);
    NUM("diode.n_i", "m^-3", c.diode.n_i);
    NUM("diode.tau_np", "s", c.diode.tau_np);
    NUM("diode.tau_pn", "s", c.diode.tau_pn);
    NUM("diode.mu_pp", "m^2/(V*s)", c.diode.mu_pp);
    NUM("diode.mu_pn", "m^2/(V*s)", c.diode.mu_pn);
    NUM("diode.mu_nn", "m^2/(V*s)", c.diode.mu_nn);
    NUM("diode.mu_np", "m^2/(V*s)", c.diode.mu_np);
    NUM("diode.T", "K", c.diode.T);
    NUM("diode.A", "m^2", c.diode.A);
    NUM("diode.C", "F", c.diode.C);
    NUM("diode.eta_qe", "", c.diode.eta_qe);
    NUM("diode.eta_wg", "", c.diode.eta_wg);
    NUM("diode.photon_wavelength", "m", c.diode.photon_wavelength);

    NUM("circuit.L_hT", "H", c.circuit.L_hT);
    NUM("circuit.r1", "Ohm", c.circuit.r1);
    NUM("circuit.I_LED", "A", c.circuit.I_LED);
    NUM("circuit.quasi_static_threshold", "", c.circuit.quasi_static_threshold);

    s.push_back(text("stack.heater_material", [](RunConfig& c) -> std::string& { return c.stack.materials[0]; }));
    s.push_back(text("stack.upper_spacer_material", [](RunConfig& c) -> std::string& { return c.stack.materials[1]; }));
    s.push_back(text("stack.channel_material", [](RunConfig& c) -> std::string& { return c.stack.materials[2]; }));
    s.push_back(text("stack.lower_spacer_material", [](RunConfig& c) -> std::string& { return c.stack.materials[3]; }));
    NUM("stack.heater_thickness", "m", c.stack.thickness[0]);
    NUM("stack.upper_spacer_thickness", "m", c.stack.thickness[1]);
    NUM("stack.channel_thickness", "m", c.stack.thickness[2]);
    NUM("stack.lower_spacer_thickness", "m", c.stack.thickness[3]);
    NUM("stack.side", "m", c.stack.side);
    NUM("stack.T_g", "K", c.stack.T_g);
    s.push_back(text("stack.materials_file", [](RunConfig& c) -> std::string& { return c.materials_file; }));

    NUM("channel.T_c", "K", c.channel.T_c);
    NUM("channel.sheet_resistance", "Ohm/sq", c.channel.sheet_resistance);
    NUM("channel.squares", "", c.channel.squares);
    NUM("channel.wire_width", "m", c.channel.wire_width);
    NUM("channel.I_c", "A", c.channel.I_c);

    NUM("ntron.channel_current", "A", c.ntron.channel_current);
    NUM("ntron.gate_critical_current", "A", c.ntron.gate_critical_current);
    NUM("ntron.r_load", "Ohm", c.ntron.r_load);
    NUM("ntron.L_nT", "H", c.ntron.L_nT);
    NUM("ntron.tau_rise", "s", c.ntron.tau_rise);
    NUM("ntron.drive_time", "s", c.ntron.drive_time);
    NUM("ntron.recovery_time", "s", c.ntron.recovery_time);

    NUM("threshold.jtl_junction_Ic", "A", c.threshold.jtl_junction_Ic);
    NUM("threshold.pre_ro_junction_Ic", "A", c.threshold.pre_ro_junction_Ic);
    NUM("threshold.ro_junction_Ic", "A", c.threshold.ro_junction_Ic);
    NUM("threshold.ro_bias", "A", c.threshold.ro_bias);
    NUM("threshold.L1", "H", c.threshold.L1);
    NUM("threshold.r1", "Ohm", c.threshold.r1);
    NUM("threshold.r2", "Ohm", c.threshold.r2);

    NUM("neuron.I_threshold", "A", c.neuron.I_threshold);
    NUM("neuron.tau_ref", "s", c.neuron.refractory.tau_ref);
    NUM("neuron.refractory_depth", "", c.neuron.refractory.depth);
    NUM("neuron.max_rate", "Hz", c.neuron.max_rate);
    NUM("neuron.t_end", "s", c.neuron_t_end);

    NUM("led.t_on", "s", c.led_t_on);
    NUM("led.N_target", "", c.led_N_target);
    s.push_back(text("pulse.kind", [](RunConfig& c) -> std::string& { return c.pulse_kind; }));
    NUM("pulse.duration", "s", c.pulse_duration);
    NUM("htron.t_target", "s", c.htron_t_target);

    NUM("chain.zeta", "", c.zeta);
    s.push_back(integer("chain.k_out", [](RunConfig& c) -> int& { return c.k_out; }));
    NUM("chain.link_loss", "dB", c.link_loss_dB);
    NUM("chain.detector_efficiency", "", c.detector_efficiency);
    NUM("chain.square_on_time", "s", c.chain_square_on_time);
    NUM("chain.N_target", "", c.chain_N_target);
    s.push_back(integer("chain.delivery_trials", [](RunConfig& c) -> int& { return c.delivery_trials; }));
#undef NUM
    return s;
}

const Field* find_field(const std::string& path) {
    for (const auto& f : schema())
        if (f.path == path) return &f;
    return nullptr;
}

// synapse.<i>.<name>
const std::vector<std::string>& synapse_fields() {
    static const std::vector<std::string> names = {"w", "L_si", "tau_si", "c", "dead_time",
                                                   "input_file", "period", "phase", "t_stop"};
    return names;
}

std::optional<std::pair<std::size_t, std::string>> split_synapse(const std::string& path) {
    if (path.rfind("synapse.", 0) != 0) return std::nullopt;
    const auto dot = path.find('.', 8);
    if (dot == std::string::npos) return std::nullopt;
    const std::string idx = path.substr(8, dot - 8);
    if (idx.empty() || idx.size() > 6 || !std::all_of(idx.begin(), idx.end(), [](unsigned char ch) { return std::isdigit(ch); }))
        return std::nullopt;
    const std::string name = path.substr(dot + 1);
    if (std::find(synapse_fields().begin(), synapse_fields().end(), name) == synapse_fields().end())
        return std::nullopt;
    return std::make_pair(static_cast<std::size_t>(std::stoul(idx)), name);
}

Field synapse_field(std::size_t i, const std::string& name) {
    auto syn = [i](RunConfig& c) -> neuron::SynapseConfig& {
        if (c.neuron.synapses.size() <= i) c.neuron.synapses.resize(i + 1);
        if (c.synapse_inputs.size() <= i) c.synapse_inputs.resize(i + 1);
        return c.neuron.synapses[i];
    };
    auto in = [syn, i](RunConfig& c) -> SynapseInput& {
        syn(c);
        return c.synapse_inputs[i];
    };
    const std::string path = "synapse." + std::to_string(i) + "." + name;
    if (name == "w") return integer(path, [syn](RunConfig& c) -> int& { return syn(c).w; });
    if (name == "L_si") return num(path, "H", [syn](RunConfig& c) -> double& { return syn(c).L_si; });
    if (name == "tau_si") return num(path, "s", [syn](RunConfig& c) -> double& { return syn(c).tau_si; });
    if (name == "c") return num(path, "", [syn](RunConfig& c) -> double& { return syn(c).c; });
    if (name == "dead_time") return num(path, "s", [syn](RunConfig& c) -> double& { return syn(c).dead_time; });
    if (name == "input_file") return text(path, [in](RunConfig& c) -> std::string& { return in(c).file; });
    if (name == "period") return num(path, "s", [in](RunConfig& c) -> double& { return in(c).period; });
    if (name == "phase") return num(path, "s", [in](RunConfig& c) -> double& { return in(c).phase; });
    return num(path, "s", [in](RunConfig& c) -> double& { return in(c).t_stop; });
}

Field resolve(const std::string& path) {
    if (const auto* f = find_field(path)) return *f;
    if (auto s = split_synapse(path)) return synapse_field(s->first, s->second);
    throw ConfigError("unknown parameter " + path);
}

}  // namespace

const std::vector<Field>& schema() {
    static const std::vector<Field> s = build_schema();
    return s;
}

bool has_path(const RunConfig&, const std::string& path) {
    return find_field(path) != nullptr || split_synapse(path).has_value();
}

void set_value(RunConfig& cfg, const std::string& path, const std::string& value_with_unit) {
    const Field f = resolve(path);
    const std::string rhs = trim(value_with_unit);
    if (rhs.empty()) throw ConfigError(path + ": missing value");
    try {
        if (f.unit == "string") {
            f.set(cfg, rhs, "");
            return;
        }
        const auto sp = rhs.find_first_of(" \t");
        const std::string value = sp == std::string::npos ? rhs : rhs.substr(0, sp);
        const std::string unit = sp == std::string::npos ? "" : trim(rhs.substr(sp));
        f.set(cfg, value, unit);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void set_si(RunConfig& cfg, const std::string& path, double value) {
    const Field f = resolve(path);
    if (f.unit == "string") throw ConfigError(path + ": not a numeric parameter");
    f.set(cfg, format_number(value), f.unit == "" ? "" : f.unit);
}

double get_si(const RunConfig& cfg, const std::string& path) {
    const Field f = resolve(path);
    if (f.unit == "string") throw ConfigError(path + ": not a numeric parameter");
    RunConfig copy = cfg;  // synapse accessors may grow vectors
    return parse_number(f.get(copy));
}

RunConfig parse(const std::string& text, RunConfig cfg, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::set<std::string> seen;
    const std::string materials_before = cfg.materials_file;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value unit'");
        const std::string key = trim(line.substr(0, eq));
        if (!seen.insert(key).second) throw ConfigError(where + key + ": duplicate key");
        try {
            set_value(cfg, key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    // A relative materials path is taken relative to the config file.
    if (cfg.materials_file != materials_before && !cfg.materials_file.empty() &&
        std::filesystem::path(cfg.materials_file).is_relative() && origin != "<config>") {
        const auto dir = std::filesystem::path(origin).parent_path();
        cfg.materials_file = (dir / cfg.materials_file).lexically_normal().string();
    }
    return cfg;
}

RunConfig parse(const std::string& text, const std::string& origin) { return parse(text, RunConfig{}, origin); }

RunConfig load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str(), path);
}

std::string dump(const RunConfig& cfg) {
    std::ostringstream out;
    RunConfig copy = cfg;
    for (const auto& f : schema()) {
        out << f.path << " = " << f.get(copy);
        if (!f.unit.empty() && f.unit != "string") out << ' ' << f.unit;
        out << '\n';
    }
    for (std::size_t i = 0; i < copy.neuron.synapses.size(); ++i)
        for (const auto& name : synapse_fields()) {
            const auto f = synapse_field(i, name);
            const std::string v = f.get(copy);
            if (f.unit == "string" && v.empty()) continue;
            out << f.path << " = " << v;
            if (!f.unit.empty() && f.unit != "string") out << ' ' << f.unit;
            out << '\n';
        }
    return out.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    std::string text = dump(cfg);
    try {
        text += htron::format_materials(htron::load_materials(cfg.materials_file));
    } catch (const ConfigError&) {
        text += "materials-unavailable\n";
    }
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

htron::ThermalStack RunConfig::thermal_stack() const {
    return htron::build_stack(stack, htron::load_materials(materials_file));
}

diode::DriveCircuitParams RunConfig::led_circuit() const {
    auto c = circuit;
    c.r_normal = channel.r_normal();
    return c;
}

chain::ChainConfig RunConfig::chain_config() const {
    chain::ChainConfig c;
    c.threshold = threshold;
    c.ntron = ntron;
    c.stack = thermal_stack();
    c.channel = channel;
    c.diode = diode;
    c.circuit = led_circuit();
    c.zeta = zeta;
    c.k_out = k_out;
    if (chain_square_on_time > 0.0) c.square_on_time = chain_square_on_time;
    return c;
}

void RunConfig::validate() const {
    diode.validate();
    led_circuit().validate();
    channel.validate();
    ntron.validate();
    threshold.validate();
    neuron.validate();
    if (pulse_kind != "square" && pulse_kind != "exponential")
        throw ConfigError("pulse.kind: expected square or exponential");
    if (!(zeta >= 1.0)) throw ConfigError("chain.zeta: must be at least 1");
    if (k_out < 1) throw ConfigError("chain.k_out: must be at least 1");
    if (!(chain_square_on_time >= 0.0)) throw ConfigError("chain.square_on_time: must be non-negative");
    if (delivery_trials < 1) throw ConfigError("chain.delivery_trials: must be at least 1");
}

}  // namespace soen::config
