#include "soen/drive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soen/error.hpp"

namespace soen::drive {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

void PulseShape::validate() const {
    if (!(amplitude >= 0.0)) throw ConfigError("pulse amplitude must be non-negative");
    if (kind == PulseKind::square) {
        if (!(duration >= 0.0)) throw ConfigError("pulse duration must be non-negative");
    } else {
        if (!(tau_rise > 0.0) || !(tau_fall > 0.0)) throw ConfigError("pulse time constants must be positive");
        if (!(drive_time >= 0.0)) throw ConfigError("pulse drive_time must be non-negative");
    }
}

double PulseShape::t_off() const {
    return t_start + (kind == PulseKind::square ? duration : drive_time);
}

double PulseShape::current(double t) const {
    if (t < t_start) return 0.0;
    if (kind == PulseKind::square) return t < t_off() ? amplitude : 0.0;
    if (t < t_off()) return amplitude * -std::expm1(-(t - t_start) / tau_rise);
    return amplitude * std::exp(-(t - t_off()) / tau_fall);
}

PiecewiseFunction PulseShape::waveform() const {
    PiecewiseFunction f;
    const PulseShape p = *this;
    if (kind == PulseKind::square) {
        if (duration > 0.0) f.pieces.push_back({t_start, t_off(), [a = amplitude](double) { return a; }});
        return f;
    }
    if (drive_time > 0.0) f.pieces.push_back({t_start, t_off(), [p](double t) { return p.current(t); }});
    f.pieces.push_back({t_off(), inf, [p](double t) { return p.current(t); }});
    return f;
}

PulseShape square_pulse(double amplitude, double duration, double t_start) {
    PulseShape p;
    p.kind = PulseKind::square;
    p.amplitude = amplitude;
    p.duration = duration;
    p.t_start = t_start;
    p.validate();
    return p;
}

PulseShape exponential_pulse(double amplitude, double tau_rise, double tau_fall, double drive_time,
                             double t_start) {
    PulseShape p;
    p.kind = PulseKind::exponential;
    p.amplitude = amplitude;
    p.tau_rise = tau_rise;
    p.tau_fall = tau_fall;
    p.drive_time = drive_time;
    p.t_start = t_start;
    p.validate();
    return p;
}

void NtronParams::validate() const {
    if (!(channel_current > 0.0)) throw ConfigError("ntron channel_current must be positive");
    if (!(gate_critical_current > 0.0)) throw ConfigError("ntron gate_critical_current must be positive");
    if (!(r_load > 0.0)) throw ConfigError("ntron r_load must be positive");
    if (!(L_nT > 0.0)) throw ConfigError("ntron L_nT must be positive");
    if (!(tau_rise > 0.0)) throw ConfigError("ntron tau_rise must be positive");
    if (!(drive_time >= 0.0)) throw ConfigError("ntron drive_time must be non-negative");
    if (!(recovery_time >= 0.0)) throw ConfigError("ntron recovery_time must be non-negative");
}

PulseShape NtronParams::pulse(double t_start) const {
    validate();
    return exponential_pulse(channel_current, tau_rise, tau(), drive_time, t_start);
}

PiecewiseFunction gate_power(const PulseShape& pulse, double r_gate) {
    if (!(r_gate > 0.0)) throw ConfigError("gate resistance must be positive");
    pulse.validate();
    PiecewiseFunction current = pulse.waveform();
    for (auto& piece : current.pieces)
        piece.fn = [fn = piece.fn, r_gate](double t) {
            const double i = fn(t);
            return i * i * r_gate;
        };
    return current;
}

double gate_energy(const PulseShape& pulse, double r_gate) {
    if (!(r_gate > 0.0)) throw ConfigError("gate resistance must be positive");
    pulse.validate();
    const double a2r = pulse.amplitude * pulse.amplitude * r_gate;
    if (pulse.kind == PulseKind::square) return a2r * pulse.duration;
    const double P = pulse.drive_time, tr = pulse.tau_rise;
    const double rise = P + 2.0 * tr * std::expm1(-P / tr) - 0.5 * tr * std::expm1(-2.0 * P / tr);
    return a2r * (rise + 0.5 * pulse.tau_fall);
}

GateResponse drive_htron(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                         const PulseShape& pulse, double r_gate, const htron::ThermalOptions& options) {
    channel.validate();
    const auto Q = gate_power(pulse, r_gate);
    const double q_hold = htron::steady_state_power(stack, channel);

    // Past t_cut the heater power stays below half the hold power, so the
    // channel cannot return above T_c once every node has cooled below it.
    double t_cut = pulse.t_off();
    if (pulse.kind == PulseKind::exponential) {
        const double q_off = Q(pulse.t_off());
        if (q_off > 0.5 * q_hold) t_cut += 0.5 * pulse.tau_fall * std::log(q_off / (0.5 * q_hold));
    }
    const double t_end = t_cut + 500e-9;
    const double Tc = channel.T_c;
    auto stop = [t_cut, Tc](double t, std::span<const double> T) {
        return t > t_cut && T[0] < Tc && T[1] < Tc && T[2] < Tc;
    };

    GateResponse r;
    r.series = htron::simulate_thermal(stack, Q, {std::min(0.0, pulse.t_start), t_end}, options, stop);
    r.t_above = htron::time_above_tc(r.series, channel);
    r.gate_energy = gate_energy(pulse, r_gate);
    return r;
}

namespace {

// Bisection in log(x) for f(x) = target with f nondecreasing.
template <class F>
double solve_monotone(F f, double target, double x_lo, double x_hi, double rel_tol) {
    for (int iter = 0; iter < 80; ++iter) {
        const double mid = std::sqrt(x_lo * x_hi);
        const double v = f(mid);
        if (std::abs(v - target) <= rel_tol * target) return mid;
        if (v < target) x_lo = mid;
        else x_hi = mid;
        if (x_hi / x_lo < 1.0 + 1e-9) return mid;
    }
    return std::sqrt(x_lo * x_hi);
}

void require_switchable(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                        const NtronParams& ntron) {
    const double peak = ntron.channel_current * ntron.channel_current * ntron.r_load;
    if (peak <= htron::steady_state_power(stack, channel)) throw SimulationError("insufficient drive amplitude");
}

}  // namespace

double required_tau_for_ton(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                            const NtronParams& ntron, double t_target) {
    if (!(t_target > 0.0)) throw ConfigError("target time above T_c must be positive");
    ntron.validate();
    require_switchable(stack, channel, ntron);
    auto t_above = [&](double tau) {
        auto p = exponential_pulse(ntron.channel_current, ntron.tau_rise, tau, ntron.drive_time);
        return drive_htron(stack, channel, p, ntron.r_load).t_above;
    };
    double lo = 1e-12;
    if (t_above(lo) > t_target) throw SimulationError("target shorter than the drive phase allows");
    double hi = std::max(10.0 * t_target, 2e-9);
    while (t_above(hi) < t_target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e-3) throw SimulationError("insufficient drive amplitude");
    }
    return solve_monotone(t_above, t_target, lo, hi, 5e-3);
}

double required_square_for_ton(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                               const NtronParams& ntron, double t_target) {
    if (!(t_target > 0.0)) throw ConfigError("target time above T_c must be positive");
    ntron.validate();
    require_switchable(stack, channel, ntron);
    auto t_above = [&](double duration) {
        auto p = square_pulse(ntron.channel_current, duration);
        return drive_htron(stack, channel, p, ntron.r_load).t_above;
    };
    double lo = 1e-12;
    double hi = std::max(2.0 * t_target, 2e-9);
    while (t_above(hi) < t_target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e-3) throw SimulationError("insufficient drive amplitude");
    }
    return solve_monotone(t_above, t_target, lo, hi, 5e-3);
}

MeanderGeometry inductor_geometry(double L_target, double sheet_inductance, double wire_width) {
    if (!(L_target > 0.0) || !(sheet_inductance > 0.0) || !(wire_width > 0.0))
        throw ConfigError("inductor geometry inputs must be positive");
    MeanderGeometry g;
    g.sheet_inductance = sheet_inductance;
    g.wire_width = wire_width;
    g.squares = std::ceil(L_target / sheet_inductance * (1.0 - 1e-12));
    g.area = g.squares * wire_width * wire_width;
    return g;
}

}  // namespace soen::drive
