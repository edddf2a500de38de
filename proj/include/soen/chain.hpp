#pragma once

// One firing event through the amplifier chain: threshold trigger, nTron gate
// pulse, hTron heating, LED emission.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "soen/diode.hpp"
#include "soen/drive.hpp"
#include "soen/htron.hpp"

namespace soen::chain {

/// Threshold and relaxation-oscillator constants. Only ro_bias, L1, r1 and r2
/// shape the event; the junction critical currents are kept for reference.
struct ThresholdParams {
    double jtl_junction_Ic = 250e-6;
    double pre_ro_junction_Ic = 280e-6;
    double ro_junction_Ic = 280e-6;
    double ro_bias = 140e-6;
    double L1 = 200e-12;
    double r1 = 2.76;
    double r2 = 3.0;

    void validate() const;
    [[nodiscard]] double tau_rise() const { return L1 / (r1 + r2); }
    [[nodiscard]] double tau_fall() const { return L1 / r2; }
};

struct ThresholdEvent {
    drive::PulseShape pulse;  ///< current diverted into the nTron gate
    double ntron_switch_time = 0.0;
};

/// Exponential pulse of amplitude ro_bias starting at trigger_time. Throws if
/// it never reaches the nTron gate critical current.
ThresholdEvent threshold_event(const ThresholdParams& params, double trigger_time,
                               double gate_critical_current);

struct ChainConfig {
    ThresholdParams threshold;
    drive::NtronParams ntron;
    htron::ThermalStack stack;
    htron::ChannelSpec channel;
    diode::DiodeParams diode;
    diode::DriveCircuitParams circuit;  ///< r_normal is taken from the channel
    double zeta = 10.0;
    int k_out = 1000;
    /// When set, the hTron is held normal for exactly this long (square gate
    /// drive sized to match) instead of following the nTron exponential.
    std::optional<double> square_on_time;

    void validate() const;
};

struct Timings {
    double trigger_to_ntron = 0.0;
    double ntron_to_switch = 0.0;
    double switch_to_first_photon = 0.0;
};

struct FiringEventResult {
    double N_ph = 0.0;
    double t_on = 0.0;
    double tau_nT = 0.0;
    double E_LED = 0.0;
    double E_gate = 0.0;
    double E_total = 0.0;
    double eta_RC = 0.0;
    double eta_LED = 0.0;
    double eta_hT = 0.0;
    double eta_amp = 0.0;
    Timings timings;
    std::vector<std::string> warnings;
};

FiringEventResult fire(const ChainConfig& config);

/// zeta h nu N_ph / eta_amp
double amplifier_energy(double N_ph, double zeta, double eta_amp, double wavelength);

struct Delivery {
    double mean_photons = 0.0;  ///< per synapse
    double p_zero = 0.0;
};

Delivery delivery_reliability(double N_ph, int k_out, double link_loss_dB, double detector_efficiency);

/// Monte Carlo estimate of the zero-photon probability over `trials` events
/// of `k_out` synapses each.
double sample_zero_fraction(double N_ph, int k_out, double link_loss_dB, double detector_efficiency,
                            std::uint64_t seed, int trials);

struct EfficiencyRow {
    double N_target = 0.0;
    double N_ph = 0.0;
    double t_on = 0.0;
    double tau_nT = 0.0;
    double eta_LED = 0.0;
    double eta_hT = 0.0;
    double eta_amp = 0.0;
    double E_amp = 0.0;            ///< zeta h nu N_ph / eta_amp
    double E_amp_no_zeta = 0.0;    ///< h nu N_ph / eta_amp
};

/// Sizes each point with min_pulse_for_photons and required_tau_for_ton, then fires.
EfficiencyRow efficiency_point(const ChainConfig& config, double N_target);
std::vector<EfficiencyRow> efficiency_report(const ChainConfig& config, const std::vector<double>& N_grid);

}  // namespace soen::chain
