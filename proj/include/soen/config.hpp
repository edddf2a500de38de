#pragma once

// Run configuration: flat `section.key = value unit` text, converted to SI at
// ingestion and checked against a fixed schema.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "soen/chain.hpp"
#include "soen/diode.hpp"
#include "soen/drive.hpp"
#include "soen/htron.hpp"
#include "soen/neuron.hpp"

namespace soen::config {

/// Parses a number with a unit against the canonical SI unit of a field.
/// Accepts SI prefixes on the leading symbol (e.g. fF, kOhm, pH/sq), plus
/// cm^-3, cm^2/(V*s), um^2 style areas and "1" or nothing for dimensionless.
double parse_quantity(const std::string& value, const std::string& unit, const std::string& canonical);

/// Spike input description for one synapse in the `neuron` run.
struct SynapseInput {
    std::string file;       ///< CSV with t_seconds; takes precedence when set
    double period = 0.0;    ///< regular train when > 0
    double phase = 0.0;
    double t_stop = -1.0;   ///< last allowed spike time; < 0 means run end
};

struct RunConfig {
    diode::DiodeParams diode;
    diode::DriveCircuitParams circuit;
    htron::StackSpec stack;
    std::string materials_file = std::string(SOEN_DATA_DIR) + "/materials.dat";
    htron::ChannelSpec channel;
    drive::NtronParams ntron;
    chain::ThresholdParams threshold;
    neuron::NeuronConfig neuron;
    std::vector<SynapseInput> synapse_inputs;

    // Run controls for the individual subcommands.
    double led_t_on = 2.9e-9;
    double led_N_target = 1e4;
    std::string pulse_kind = "exponential";
    double pulse_duration = 6e-9;       ///< square gate pulse length
    double htron_t_target = 4.7e-9;
    double neuron_t_end = 1e-6;
    double zeta = 10.0;
    int k_out = 1000;
    double link_loss_dB = 3.0;
    double detector_efficiency = 1.0;
    double chain_square_on_time = 0.0;  ///< 0 keeps the exponential drive
    double chain_N_target = 1e4;
    int delivery_trials = 1000;

    /// Loads the materials table and builds the thermal stack.
    [[nodiscard]] htron::ThermalStack thermal_stack() const;
    [[nodiscard]] chain::ChainConfig chain_config() const;
    /// The drive circuit with r_normal taken from the channel.
    [[nodiscard]] diode::DriveCircuitParams led_circuit() const;
    void validate() const;
};

struct Field {
    std::string path;
    std::string unit;  ///< canonical SI unit; "" for dimensionless, "string" for text
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string& value, const std::string& unit)> set;
};

/// All fixed keys. synapse.<i>.<field> keys are handled dynamically.
const std::vector<Field>& schema();

/// Applies one `path = value unit` assignment. Throws ConfigError naming the
/// path for unknown keys, bad units, or bad values.
void set_value(RunConfig& cfg, const std::string& path, const std::string& value_with_unit);
/// Sets a numeric field from an SI value.
void set_si(RunConfig& cfg, const std::string& path, double value);
/// Reads a numeric field as SI.
double get_si(const RunConfig& cfg, const std::string& path);
bool has_path(const RunConfig& cfg, const std::string& path);

/// Parses config text on top of the defaults (or on top of `base`).
RunConfig parse(const std::string& text, const std::string& origin = "<config>");
RunConfig parse(const std::string& text, RunConfig base, const std::string& origin);
RunConfig load(const std::string& path);

/// Canonical text form in SI units; parse(dump(c)) reproduces c.
std::string dump(const RunConfig& cfg);

/// FNV-1a 64 of dump(cfg) plus the materials table contents.
std::uint64_t config_hash(const RunConfig& cfg);
std::string hash_hex(std::uint64_t h);

}  // namespace soen::config
