#pragma once

// Loop neuron: per-synapse leaky integration loops, a neuronal current that is
// a fixed linear combination of them, and a threshold with absolute (hard
// lockout) then relative (exponentially recovering bias) refraction.
//
//   dI_i/dt = w_i j0_i sum_q delta(t - t_q) - I_i / tau_i,   j0_i = Phi0 / L_i
//   I_ni = sum_i c_i I_i

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "soen/ode.hpp"

namespace soen::neuron {

struct SynapseConfig {
    int w = 1;
    double L_si = 10e-9;
    double tau_si = 100e-9;
    double c = 1.0;
    double dead_time = 20e-9;

    void validate() const;
    [[nodiscard]] double jump() const;  ///< w Phi0 / L_si
};

struct Refractory {
    double tau_ref = 50e-9;
    double depth = 1.0;  ///< fraction of the threshold bias diverted at a spike
};

struct NeuronConfig {
    std::vector<SynapseConfig> synapses;
    double I_threshold = 1e-6;
    Refractory refractory;
    double max_rate = 20e6;

    void validate() const;
    /// Effective threshold at time t given the last output spike.
    [[nodiscard]] double threshold_at(double t, double last_spike) const;
    [[nodiscard]] double lockout() const { return 1.0 / max_rate; }
};

struct SpikeTrain {
    std::vector<double> times;
};

struct SynapseState {
    double current = 0.0;
    double last_accepted = -std::numeric_limits<double>::infinity();
};

/// Advances one synapse from t0 by dt. Spikes outside [t0, t0 + dt) are
/// ignored; spikes within dead_time of the previous accepted one are dropped.
SynapseState synapse_update(SynapseState state, const SynapseConfig& config, double t0, double dt,
                            const std::vector<double>& spikes_in_window);

double ni_current(const std::vector<double>& synapse_currents, const std::vector<double>& couplings);

/// Input spikes surviving the dead-time filter (earliest accepted wins).
std::vector<double> accepted_spikes(const std::vector<double>& times, double dead_time);

struct NeuronRun {
    SpikeTrain output;
    /// Sampled at every event (input arrival, output spike, span ends).
    /// Components: synapse currents, then I_ni, then effective threshold.
    ode::TimeSeries state;
    std::vector<std::size_t> dropped_inputs;  ///< per synapse
};

NeuronRun run_neuron(const NeuronConfig& config, const std::vector<SpikeTrain>& inputs,
                     std::pair<double, double> t_span);

/// Fixed-step RK4 integration of the same model on a grid of step dt. Input
/// times are snapped to the grid; an output spike is recorded at the first
/// grid point where I_ni reaches the effective threshold.
SpikeTrain run_neuron_fixed_step(const NeuronConfig& config, const std::vector<SpikeTrain>& inputs,
                                 std::pair<double, double> t_span, double dt);

/// CSV with a `t_seconds` header.
SpikeTrain parse_spike_csv(const std::string& text);
std::string format_spike_csv(const SpikeTrain& train);

}  // namespace soen::neuron
