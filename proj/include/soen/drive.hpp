#pragma once

// Gate drive waveforms for the hTron heater and the nTron that produces them.

#include <utility>

#include "soen/htron.hpp"
#include "soen/ode.hpp"
#include "soen/piecewise.hpp"

namespace soen::drive {

enum class PulseKind { square, exponential };

/// Square: amplitude on [t_start, t_start + duration).
/// Exponential: amplitude*(1 - exp(-(t - t_start)/tau_rise)) while driven
/// (for drive_time), then amplitude*exp(-(t - t_off)/tau_fall).
struct PulseShape {
    PulseKind kind = PulseKind::exponential;
    double amplitude = 1.2e-3;
    double duration = 0.0;
    double tau_rise = 300e-12;
    double tau_fall = 30e-9;
    double drive_time = 1e-9;
    double t_start = 0.0;

    void validate() const;
    [[nodiscard]] double t_off() const;
    [[nodiscard]] double current(double t) const;
    /// Current as piecewise-smooth function of time.
    [[nodiscard]] PiecewiseFunction waveform() const;
};

PulseShape square_pulse(double amplitude, double duration, double t_start = 0.0);
PulseShape exponential_pulse(double amplitude, double tau_rise, double tau_fall,
                             double drive_time = 1e-9, double t_start = 0.0);

struct NtronParams {
    double channel_current = 1.2e-3;
    double gate_critical_current = 100e-6;
    double r_load = 10.0;        ///< hTron gate resistance
    double L_nT = 500e-9;
    double tau_rise = 300e-12;
    double drive_time = 1e-9;
    double recovery_time = 50e-9;

    void validate() const;
    [[nodiscard]] double tau() const { return L_nT / r_load; }
    /// Gate pulse starting at t_start.
    [[nodiscard]] PulseShape pulse(double t_start = 0.0) const;
};

/// Q(t) = I(t)^2 r_gate.
PiecewiseFunction gate_power(const PulseShape& pulse, double r_gate);

/// Closed-form int Q dt over the whole pulse (the exponential tail to infinity).
double gate_energy(const PulseShape& pulse, double r_gate);

/// Thermal response to a gate pulse, run until the channel has cooled below
/// T_c for good.
struct GateResponse {
    ode::TimeSeries series;
    double t_above = 0.0;
    double gate_energy = 0.0;
};

GateResponse drive_htron(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                         const PulseShape& pulse, double r_gate,
                         const htron::ThermalOptions& options = {});

/// Fall constant giving `t_target` above T_c at the nTron's amplitude (2% in t).
double required_tau_for_ton(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                            const NtronParams& ntron, double t_target);

/// Square-pulse duration giving `t_target` above T_c at the same amplitude.
double required_square_for_ton(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                               const NtronParams& ntron, double t_target);

struct MeanderGeometry {
    double sheet_inductance = 0.0;
    double wire_width = 0.0;
    double squares = 0.0;
    double area = 0.0;
};

MeanderGeometry inductor_geometry(double L_target, double sheet_inductance, double wire_width);

}  // namespace soen::drive
