#include "soen/chain.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "soen/constants.hpp"
#include "soen/error.hpp"

namespace soen::chain {

void ThresholdParams::validate() const {
    for (double v : {jtl_junction_Ic, pre_ro_junction_Ic, ro_junction_Ic, ro_bias, L1, r1, r2})
        if (!(v > 0.0)) throw ConfigError("threshold parameters must be positive");
    if (!(ro_bias < ro_junction_Ic)) throw ConfigError("ro_bias must be below ro_junction_Ic");
}

ThresholdEvent threshold_event(const ThresholdParams& params, double trigger_time,
                               double gate_critical_current) {
    params.validate();
    if (!(trigger_time >= 0.0)) throw ConfigError("trigger_time must be non-negative");
    ThresholdEvent ev;
    ev.pulse = drive::exponential_pulse(params.ro_bias, params.tau_rise(), params.tau_fall(),
                                        5.0 * params.tau_rise(), trigger_time);
    const double peak = ev.pulse.current(ev.pulse.t_off());
    if (peak < gate_critical_current) throw SimulationError("trigger insufficient to switch nTron");
    ev.ntron_switch_time =
        trigger_time - params.tau_rise() * std::log1p(-gate_critical_current / params.ro_bias);
    return ev;
}

void ChainConfig::validate() const {
    threshold.validate();
    ntron.validate();
    channel.validate();
    diode.validate();
    circuit.validate();
    if (!(zeta >= 1.0)) throw ConfigError("zeta must be at least 1");
    if (k_out < 1) throw ConfigError("k_out must be at least 1");
    if (square_on_time && !(*square_on_time > 0.0)) throw ConfigError("square_on_time must be positive");
}

namespace {

[[noreturn]] void stage_failure(const char* stage, const std::exception& e) {
    const std::string msg = std::string(stage) + ": " + e.what();
    if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
    throw SimulationError(msg);
}

// Time at which the cumulative photon count first reaches one.
double first_photon_time(const diode::LedTransient& tr, const diode::DiodeParams& d) {
    const double scale = d.eta_qe / constants::elementary_charge;
    double sum = 0.0;
    const auto& t = tr.series.times;
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double inc = 0.5 * (tr.pn_current[k] + tr.pn_current[k - 1]) * (t[k] - t[k - 1]) * scale;
        if (sum + inc >= 1.0) return t[k - 1] + (1.0 - sum) / inc * (t[k] - t[k - 1]);
        sum += inc;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

FiringEventResult fire(const ChainConfig& config) {
    config.validate();
    FiringEventResult out;

    ThresholdEvent trig;
    try {
        trig = threshold_event(config.threshold, 0.0, config.ntron.gate_critical_current);
    } catch (const std::exception& e) {
        stage_failure("threshold", e);
    }
    out.timings.trigger_to_ntron = trig.ntron_switch_time;

    drive::PulseShape gate;
    drive::GateResponse response;
    try {
        if (config.square_on_time) {
            const double d = drive::required_square_for_ton(config.stack, config.channel, config.ntron,
                                                            *config.square_on_time);
            gate = drive::square_pulse(config.ntron.channel_current, d, trig.ntron_switch_time);
        } else {
            gate = config.ntron.pulse(trig.ntron_switch_time);
            out.tau_nT = config.ntron.tau();
        }
        response = drive::drive_htron(config.stack, config.channel, gate, config.ntron.r_load);
    } catch (const std::exception& e) {
        stage_failure("htron", e);
    }
    auto schedule = htron::resistance_schedule(response.series, config.channel);
    if (schedule.segments.empty()) throw SimulationError("htron: channel never switched");
    if (config.square_on_time) {
        // Hold exactly the requested time from the thermal switch-on.
        const double t0 = schedule.segments.front().t_begin;
        schedule.segments = {{t0, t0 + *config.square_on_time, config.channel.r_normal()}};
    }
    out.t_on = schedule.total_duration();
    out.timings.ntron_to_switch = schedule.segments.front().t_begin - trig.ntron_switch_time;
    out.E_gate = response.gate_energy;

    diode::LedTransient led;
    try {
        auto circuit = config.circuit;
        circuit.r_normal = config.channel.r_normal();
        led = diode::simulate_led_drive(config.diode, circuit, schedule,
                                        {schedule.segments.front().t_begin, schedule.segments.back().t_end});
    } catch (const std::exception& e) {
        stage_failure("led", e);
    }
    out.N_ph = diode::photon_count(led, config.diode);
    out.E_LED = diode::dissipated_energy(led);
    out.E_total = out.E_LED + out.E_gate;
    out.eta_RC = diode::rc_efficiency(led, config.diode);

    if (config.diode.eta_qe > 0.0) {
        out.eta_LED = diode::led_efficiency(out.eta_RC, config.diode.eta_qe, config.diode.eta_wg);
        out.eta_hT = config.diode.photon_energy() * out.N_ph / out.E_gate;
        out.eta_amp = out.eta_hT > 0.0 ? 1.0 / (1.0 / out.eta_LED + 1.0 / out.eta_hT) : 0.0;
        out.timings.switch_to_first_photon = first_photon_time(led, config.diode) - schedule.segments.front().t_begin;
    } else {
        out.warnings.push_back("eta_qe is zero: no photons, efficiencies reported as 0");
        out.timings.switch_to_first_photon = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double amplifier_energy(double N_ph, double zeta, double eta_amp, double wavelength) {
    if (!(eta_amp > 0.0)) throw ConfigError("efficiency must be positive");
    if (!(wavelength > 0.0)) throw ConfigError("wavelength must be positive");
    return zeta * constants::photon_energy(wavelength) * N_ph / eta_amp;
}

Delivery delivery_reliability(double N_ph, int k_out, double link_loss_dB, double detector_efficiency) {
    if (k_out < 1) throw ConfigError("k_out must be at least 1");
    if (!(link_loss_dB >= 0.0)) throw ConfigError("link loss must be non-negative");
    if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0))
        throw ConfigError("detector efficiency must lie in (0, 1]");
    if (!(N_ph >= 0.0)) throw ConfigError("photon count must be non-negative");
    Delivery d;
    d.mean_photons = N_ph / k_out * std::pow(10.0, -link_loss_dB / 10.0) * detector_efficiency;
    d.p_zero = std::exp(-d.mean_photons);
    return d;
}

double sample_zero_fraction(double N_ph, int k_out, double link_loss_dB, double detector_efficiency,
                            std::uint64_t seed, int trials) {
    if (trials < 1) throw ConfigError("trials must be at least 1");
    const auto d = delivery_reliability(N_ph, k_out, link_loss_dB, detector_efficiency);
    if (d.mean_photons == 0.0) return 1.0;
    std::mt19937_64 rng(seed);
    std::poisson_distribution<long> arrivals(d.mean_photons);
    long zeros = 0;
    const long total = static_cast<long>(trials) * k_out;
    for (long i = 0; i < total; ++i)
        if (arrivals(rng) == 0) ++zeros;
    return static_cast<double>(zeros) / static_cast<double>(total);
}

EfficiencyRow efficiency_point(const ChainConfig& config, double N_target) {
    EfficiencyRow row;
    row.N_target = N_target;
    auto circuit = config.circuit;
    circuit.r_normal = config.channel.r_normal();
    row.t_on = diode::min_pulse_for_photons(config.diode, circuit, N_target);
    row.tau_nT = drive::required_tau_for_ton(config.stack, config.channel, config.ntron, row.t_on);
    auto cfg = config;
    cfg.square_on_time.reset();
    cfg.ntron.L_nT = row.tau_nT * cfg.ntron.r_load;
    const auto r = fire(cfg);
    row.N_ph = r.N_ph;
    row.eta_LED = r.eta_LED;
    row.eta_hT = r.eta_hT;
    row.eta_amp = r.eta_amp;
    if (r.eta_amp > 0.0) {
        row.E_amp = amplifier_energy(r.N_ph, config.zeta, r.eta_amp, config.diode.photon_wavelength);
        row.E_amp_no_zeta = amplifier_energy(r.N_ph, 1.0, r.eta_amp, config.diode.photon_wavelength);
    } else {
        row.E_amp = row.E_amp_no_zeta = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<EfficiencyRow> efficiency_report(const ChainConfig& config, const std::vector<double>& N_grid) {
    if (N_grid.empty()) throw ConfigError("photon grid is empty");
    std::vector<EfficiencyRow> rows;
    rows.reserve(N_grid.size());
    for (double n : N_grid) rows.push_back(efficiency_point(config, n));
    return rows;
}

}  // namespace soen::chain
