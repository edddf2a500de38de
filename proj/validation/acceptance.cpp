#include "acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "oracles.hpp"
#include "soen/calibrate.hpp"
#include "soen/chain.hpp"
#include "soen/diode.hpp"
#include "soen/drive.hpp"
#include "soen/error.hpp"
#include "soen/figures.hpp"
#include "soen/htron.hpp"
#include "soen/neuron.hpp"
#include "soen/ode.hpp"
#include "soen/sweep.hpp"

namespace soen::acceptance {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Check in_range(std::string name, double value, double lo, double hi, const char* unit = "", double scale = 1.0) {
    const bool ok = value >= lo && value <= hi;
    return {std::move(name), ok,
            fmt("%.4g %s in [%.4g, %.4g]", value * scale, unit, lo * scale, hi * scale)};
}

Check near(std::string name, double value, double target, double rel, const char* unit = "", double scale = 1.0) {
    const double lo = target * (1.0 - rel), hi = target * (1.0 + rel);
    const bool ok = value >= std::min(lo, hi) && value <= std::max(lo, hi);
    return {std::move(name), ok,
            fmt("%.4g %s vs %.4g %s +/- %.3g%%", value * scale, unit, target * scale, unit, rel * 100.0)};
}

Check abs_close(std::string name, double value, double target, double tol) {
    return {std::move(name), std::abs(value - target) <= tol,
            fmt("%.15g vs %.15g (|diff| %.3g, tol %.3g)", value, target, std::abs(value - target), tol)};
}

oracles::JunctionInputs junction_of(const diode::DiodeParams& d) {
    return {d.N_a, d.N_d, d.n_i, d.tau_np, d.tau_pn, d.mu_pn, d.mu_np, d.T, d.A};
}

config::RunConfig with_led(config::RunConfig cfg, double C, double eta_qe, double I) {
    cfg.diode.C = C;
    cfg.diode.eta_qe = eta_qe;
    cfg.circuit.I_LED = I;
    return cfg;
}

// Criterion bodies. Each appends checks; an exception fails the criterion.

void led_timing(const config::RunConfig& base, Criterion& c) {
    struct Case {
        double C, eta, t, E;
        const char* tag;
    };
    for (const Case& k : {Case{10e-15, 0.1, 2.9e-9, 25e-15, "C=10fF eta_qe=0.1"},
                          Case{100e-15, 0.01, 29e-9, 251e-15, "C=100fF eta_qe=0.01"}}) {
        const auto cfg = with_led(base, k.C, k.eta, 10e-6);
        const auto t0 = clock_type::now();
        const auto circuit = cfg.led_circuit();
        const double t_min = diode::min_pulse_for_photons(cfg.diode, circuit, 1e4);
        const auto tr = diode::run_square_pulse(cfg.diode, circuit, t_min);
        const double secs = elapsed(t0);
        const std::string tag = k.tag;
        c.checks.push_back(near("min pulse for 1e4 photons, " + tag, t_min, k.t, 0.30, "ns", 1e9));
        c.checks.push_back(near("dissipation, " + tag, diode::dissipated_energy(tr), k.E, 0.30, "fJ", 1e15));
        if (k.eta == 0.1)
            c.checks.push_back(near("eta_RC, " + tag, diode::rc_efficiency(tr, cfg.diode), 0.64, 0.10 / 0.64));
        c.checks.push_back(in_range("runtime, " + tag, secs, 0.0, 5.0, "s"));
    }
    // Same pulse, different eta_qe: the drive-circuit efficiency counts electrons.
    const auto a = with_led(base, 10e-15, 0.1, 10e-6), b = with_led(base, 10e-15, 0.01, 10e-6);
    const double ea = diode::rc_efficiency(diode::run_square_pulse(a.diode, a.led_circuit(), 2.9e-9), a.diode);
    const double eb = diode::rc_efficiency(diode::run_square_pulse(b.diode, b.led_circuit(), 2.9e-9), b.diode);
    c.checks.push_back({"eta_RC independent of eta_qe", std::abs(ea - eb) <= 1e-12 * ea,
                        fmt("%.12g vs %.12g", ea, eb)});
}

void led_slope(const config::RunConfig& base, Criterion& c) {
    const double t_on = 10e-9, eta = 0.01;
    const auto junction = junction_of(base.diode);
    for (double C : {1e-15, 3e-15, 10e-15, 30e-15, 100e-15}) {
        // Fit where the pulse carries at least 1.5x the charge that brings C to V_f.
        std::vector<double> currents, photons;
        for (int k = 1; k <= 10; ++k) {
            const double I = 2e-6 * k;
            if (I * t_on < 1.5 * C * oracles::shockley_voltage(junction, I)) continue;
            auto cfg = with_led(base, C, eta, I);
            currents.push_back(I);
            photons.push_back(diode::photon_count(diode::run_square_pulse(cfg.diode, cfg.led_circuit(), t_on),
                                                  cfg.diode));
        }
        const std::string tag = fmt("C=%gfF", C * 1e15);
        if (currents.size() < 2) {
            c.checks.push_back({"slope " + tag, false, "fewer than two currents in the linear regime"});
            continue;
        }
        const double slope = figures::linear_slope(currents, photons) * 1e-6;
        const double oracle = oracles::led_slope(junction, currents, t_on, C, eta) * 1e-6;
        c.checks.push_back(in_range("slope " + tag, slope, 520.0, 680.0, "photons/uA"));
        c.checks.push_back(near("slope vs charge-then-emit oracle " + tag, slope, oracle, 0.10, "photons/uA"));
    }
}

void diode_anchor(const config::RunConfig& base, Criterion& c) {
    const double V = diode::forward_voltage(base.diode, 10e-6);
    c.checks.push_back(in_range("forward voltage at 10 uA", V, 0.95, 1.05, "V"));
    c.checks.push_back(near("forward voltage vs closed-form Shockley inverse", V,
                            oracles::shockley_voltage(junction_of(base.diode), 10e-6), 1e-9, "V"));
}

void htron_switching(const config::RunConfig& base, Criterion& c) {
    const auto table = htron::load_materials(base.materials_file);
    const auto fresh = calibrate::calibrate_thermal(base.stack, table, base.channel);
    const double shipped_spacer = table.at(base.stack.materials[1]).cv_cubic;
    const double shipped_channel = table.at(base.stack.materials[2]).cv_cubic;
    c.checks.push_back(near("shipped spacer c(T) matches a fresh calibration", shipped_spacer,
                            fresh.spacer_cv_cubic, 0.01, "J/(kg K^4)"));
    c.checks.push_back(near("shipped channel c(T) matches a fresh calibration", shipped_channel,
                            fresh.channel_cv_cubic, 0.01, "J/(kg K^4)"));

    const auto stack = base.thermal_stack();
    const double ton = calibrate::turn_on_time(stack, base.channel, 1.2e-3, 10.0);
    c.checks.push_back(in_range("14.4 uW square turn-on", ton, 0.3e-9, 3e-9, "ns", 1e9));

    const auto pulse = drive::exponential_pulse(1.2e-3, 300e-12, 30e-9, base.ntron.drive_time);
    const auto g = drive::drive_htron(stack, base.channel, pulse, 10.0);
    c.checks.push_back(near("t_above for tau_nT=30ns", g.t_above, 4.7e-9, 0.5, "ns", 1e9));

    for (double t : {2e-9, 5e-9, 10e-9, 20e-9, 50e-9}) {
        const double tau = drive::required_tau_for_ton(stack, base.channel, base.ntron, t);
        c.checks.push_back(in_range(fmt("tau_nT/t_above at t_above=%gns", t * 1e9), tau / t, 5.0, 20.0));
    }
}

void steady_power(const config::RunConfig& base, Criterion& c) {
    const double p = htron::steady_state_power_density(base.thermal_stack(), base.channel) * 1e-3;  // nW/um^2
    c.checks.push_back(in_range("within 2x of 494 nW/um^2", p, 494.0 / 2.0, 494.0 * 2.0, "nW/um^2"));
    c.checks.push_back({"at least 400 nW/um^2", p >= 400.0, fmt("%.5g nW/um^2 >= 400", p)});
}

void gate_energy_ratio(const config::RunConfig& base, Criterion& c) {
    const auto stack = base.thermal_stack();
    const double t = 10e-9;
    const double tau = drive::required_tau_for_ton(stack, base.channel, base.ntron, t);
    const double square = drive::required_square_for_ton(stack, base.channel, base.ntron, t);
    auto nt = base.ntron;
    nt.L_nT = tau * nt.r_load;
    const double e_exp = drive::gate_energy(nt.pulse(), nt.r_load);
    const double e_sq = drive::gate_energy(drive::square_pulse(nt.channel_current, square), nt.r_load);
    c.checks.push_back(in_range("E_exp/E_square at t_above=10ns", e_exp / e_sq, 3.0, 30.0));
    // Quadrature of I^2 r over the pulse, independent of the closed form.
    const double quad =
        oracles::integrate([&](double s) { const double i = nt.pulse().current(s); return i * i * nt.r_load; },
                           0.0, nt.pulse().t_off(), 1e-24) +
        oracles::integrate([&](double s) { const double i = nt.pulse().current(s); return i * i * nt.r_load; },
                           nt.pulse().t_off(), nt.pulse().t_off() + 60.0 * tau, 1e-24);
    c.checks.push_back(near("exponential gate energy vs quadrature", e_exp, quad, 1e-4, "fJ", 1e15));
}

void chain_photons(const config::RunConfig& base, Criterion& c) {
    auto at_tau = [&](double tau) {
        auto cfg = with_led(base, 10e-15, 0.01, base.circuit.I_LED);
        cfg.ntron.L_nT = tau * cfg.ntron.r_load;
        cfg.chain_square_on_time = 0.0;
        return chain::fire(cfg.chain_config());
    };
    const auto f50 = at_tau(50e-9);
    c.checks.push_back({"N_ph > 3000 at tau_nT=50ns", f50.N_ph > 3000.0, fmt("%.5g > 3000", f50.N_ph)});
    const auto f100 = at_tau(100e-9);
    c.checks.push_back(near("N_ph at tau_nT=100ns", f100.N_ph, 1e4, 0.30));
    for (double C : {1e-15, 10e-15})
        for (double N : {300.0, 1e3, 1e4}) {
            const auto cfg = with_led(base, C, 1e-3, base.circuit.I_LED);
            const auto row = chain::efficiency_point(cfg.chain_config(), N);
            c.checks.push_back(in_range(fmt("eta_amp at N=%g C=%gfF eta_qe=1e-3", N, C * 1e15), row.eta_amp,
                                        3e-5, 3e-4));
        }
}

void poisson_and_energy(const config::RunConfig&, Criterion& c) {
    const auto d = chain::delivery_reliability(5000.0, 1000, 0.0, 1.0);
    c.checks.push_back(abs_close("P_zero(lambda=5)", d.p_zero, oracles::poisson_zero(5.0), 1e-12));
    const auto lossy = chain::delivery_reliability(1e4, 1000, 3.0, 0.8);
    const auto ref = oracles::link_budget(1e4, 1000, 3.0, 0.8);
    c.checks.push_back(abs_close("P_zero with 3 dB loss and 0.8 detector", lossy.p_zero, ref.p_zero, 1e-12));
    const double E = chain::amplifier_energy(1e4, 10.0, 1e-4, 1.22e-6);
    c.checks.push_back(near("zeta h nu N/eta_amp", E, 1.63e-10, 0.01, "J"));
    c.checks.push_back(near("zeta h nu N/eta_amp vs oracle", E, oracles::amplifier_energy(10.0, 1.22e-6, 1e4, 1e-4),
                            1e-12, "J"));
}

void inductor(const config::RunConfig&, Criterion& c) {
    const auto g = drive::inductor_geometry(1e-6, 180e-12, 10e-6);
    c.checks.push_back(near("1 uH meander area", g.area, 0.6e-6, 0.15, "mm^2", 1e6));
    c.checks.push_back(near("area vs squares x width^2", g.area, oracles::meander_area(1e-6, 180e-12, 10e-6), 1e-3,
                            "mm^2", 1e6));
}

neuron::NeuronConfig three_synapse_neuron(std::vector<neuron::SpikeTrain>& inputs) {
    neuron::NeuronConfig n;
    n.synapses = {{1, 10e-9, 100e-9, 1.0, 5e-9}, {1, 5e-9, 50e-9, 1.0, 5e-9}, {2, 10e-9, 200e-9, -0.5, 5e-9}};
    n.I_threshold = 1e-6;
    n.refractory = {50e-9, 1.0};
    n.max_rate = 20e6;
    inputs.assign(3, {});
    const double period[3] = {13e-9, 29e-9, 47e-9}, phase[3] = {1e-9, 7e-9, 20e-9};
    for (int i = 0; i < 3; ++i)
        for (int k = 0;; ++k) {
            const double t = phase[i] + k * period[i];
            if (t >= 1e-6) break;
            inputs[i].times.push_back(t);
        }
    // A burst that violates the dead time on the first synapse.
    inputs[0].times.insert(inputs[0].times.end(), {500.5e-9, 501e-9, 502e-9});
    std::sort(inputs[0].times.begin(), inputs[0].times.end());
    return n;
}

void properties(const config::RunConfig& base, Criterion& c) {
    // LED charge and energy bookkeeping.
    struct Case {
        double C, I, t;
    };
    double worst_q = 0.0, worst_e = 0.0;
    for (const Case& k : {Case{10e-15, 10e-6, 2.9e-9}, Case{100e-15, 10e-6, 29e-9}, Case{1e-15, 2e-6, 10e-9},
                          Case{10e-15, 20e-6, 50e-9}}) {
        const auto cfg = with_led(base, k.C, 0.01, k.I);
        const auto tr = diode::run_square_pulse(cfg.diode, cfg.led_circuit(), k.t);
        const double stored = k.C * tr.V2_final();
        worst_q = std::max(worst_q, std::abs(tr.charge_source - tr.charge_htron - tr.charge_pn - stored) /
                                        tr.charge_source);
        const double L = cfg.circuit.L_hT;
        const double in = tr.energy_supplied + 0.5 * L * (tr.I1_initial() * tr.I1_initial() -
                                                          tr.I1_final() * tr.I1_final());
        worst_e = std::max(worst_e, std::abs(in - diode::dissipated_energy(tr)) / in);
    }
    c.checks.push_back(in_range("LED charge conservation (worst relative error)", worst_q, 0.0, 0.005));
    c.checks.push_back(in_range("LED energy closure (worst relative error)", worst_e, 0.0, 0.01));

    // Thermal: heat in = stored + heat to bath.
    const auto stack = base.thermal_stack();
    const double r = 10.0, I = 1.2e-3, d = 5e-9;
    const auto Q = drive::gate_power(drive::square_pulse(I, d), r);
    const auto series = htron::simulate_thermal(stack, Q, {0.0, 300e-9});
    const double stored = stack.stored_energy(series.states.back());
    const double out = htron::heat_to_bath(stack, series);
    const double in = I * I * r * d;
    c.checks.push_back(in_range("thermal energy closure", std::abs(stored + out - in) / in, 0.0, 0.01));

    // RK4 global error order on y' = -y + sin t.
    ode::OdeSystem sys;
    sys.dimension = 1;
    sys.rhs = [](double t, std::span<const double> y, std::span<double> dy) { dy[0] = -y[0] + std::sin(t); };
    auto err = [&](double h) {
        ode::IntegratorConfig ic;
        ic.mode = ode::Mode::fixed_step;
        ic.dt = h;
        const auto s = ode::integrate(sys, {1.0}, {0.0, 5.0}, ic);
        return std::abs(s.states.back()[0] - oracles::forced_decay_exact(5.0, 1.0));
    };
    std::vector<double> log_h, log_err;
    for (double h : {0.1, 0.05, 0.025, 0.0125}) {
        log_h.push_back(std::log(h));
        log_err.push_back(std::log(err(h)));
    }
    const double order = figures::linear_slope(log_h, log_err);
    c.checks.push_back(in_range("RK4 observed order", order, 3.8, 4.2));

    // Event-driven neuron against 1 ps fixed-step integration.
    std::vector<neuron::SpikeTrain> inputs;
    const auto n = three_synapse_neuron(inputs);
    const auto exact = neuron::run_neuron(n, inputs, {0.0, 1e-6});
    const auto brute = neuron::run_neuron_fixed_step(n, inputs, {0.0, 1e-6}, 1e-12);
    bool same = exact.output.times.size() == brute.times.size() && exact.output.times.size() >= 3;
    double worst_dt = 0.0;
    if (same)
        for (std::size_t i = 0; i < brute.times.size(); ++i)
            worst_dt = std::max(worst_dt, std::abs(exact.output.times[i] - brute.times[i]));
    c.checks.push_back({"neuron event-driven vs 1 ps brute force", same && worst_dt <= 10e-12,
                        fmt("%zu vs %zu spikes, worst |dt| %.3g ps", exact.output.times.size(), brute.times.size(),
                            worst_dt * 1e12)});

    // Repeat runs and serial/parallel sweeps are byte-identical.
    const auto f1 = chain::fire(base.chain_config()), f2 = chain::fire(base.chain_config());
    const bool fire_same = std::memcmp(&f1.N_ph, &f2.N_ph, sizeof(double)) == 0 && f1.E_total == f2.E_total &&
                           f1.t_on == f2.t_on && f1.eta_amp == f2.eta_amp;
    c.checks.push_back({"fire() repeatable", fire_same, fmt("N_ph %.17g / %.17g", f1.N_ph, f2.N_ph)});
    const auto serial = figures::figure_dataset("fig4c", base, 1).to_csv();
    const auto parallel = figures::figure_dataset("fig4c", base, 4).to_csv();
    const auto again = figures::figure_dataset("fig4c", base, 4).to_csv();
    c.checks.push_back({"sweep output byte-identical (serial, parallel, repeat)",
                        serial == parallel && parallel == again, fmt("%zu bytes", serial.size())});
    const auto text = config::dump(base);
    c.checks.push_back({"config dump round-trips", config::dump(config::parse(text)) == text, ""});
}

struct Entry {
    const char* title;
    void (*body)(const config::RunConfig&, Criterion&);
};

const Entry entries[criterion_count] = {
    {"LED minimum pulse, dissipation and RC efficiency", led_timing},
    {"photon count slope vs LED bias", led_slope},
    {"diode forward voltage", diode_anchor},
    {"hTron switching after calibration", htron_switching},
    {"steady-state switching power density", steady_power},
    {"square vs exponential gate energy", gate_energy_ratio},
    {"firing-event photon counts and amplifier efficiency", chain_photons},
    {"Poisson delivery and amplifier energy", poisson_and_energy},
    {"inductor meander geometry", inductor},
    {"property suites", properties},
};

}  // namespace

bool Criterion::passed() const {
    if (checks.empty()) return false;
    for (const auto& k : checks)
        if (!k.passed) return false;
    return true;
}

Criterion run_criterion(int id, const config::RunConfig& base) {
    if (id < 1 || id > criterion_count) throw ConfigError("no acceptance criterion " + std::to_string(id));
    Criterion c;
    c.id = id;
    c.title = entries[id - 1].title;
    const auto t0 = clock_type::now();
    try {
        entries[id - 1].body(base, c);
    } catch (const std::exception& e) {
        c.checks.push_back({"evaluation", false, std::string("error: ") + e.what()});
    }
    c.seconds = elapsed(t0);
    return c;
}

std::vector<Criterion> run_all(const config::RunConfig& base, const std::function<void(const Criterion&)>& on_done) {
    std::vector<Criterion> out;
    const auto t0 = clock_type::now();
    for (int id = 1; id <= criterion_count; ++id) {
        auto c = run_criterion(id, base);
        if (id == criterion_count) c.checks.push_back(in_range("full suite runtime", elapsed(t0), 0.0, 180.0, "s"));
        if (on_done) on_done(c);
        out.push_back(std::move(c));
    }
    return out;
}

std::string format(const Criterion& c) {
    std::ostringstream s;
    s << (c.passed() ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title
      << fmt(" (%.2f s)", c.seconds) << '\n';
    for (const auto& k : c.checks)
        s << "    " << (k.passed ? "ok  " : "FAIL") << "  " << k.name << (k.detail.empty() ? "" : ": ") << k.detail
          << '\n';
    return s.str();
}

}  // namespace soen::acceptance
