#include "soen/diode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "soen/constants.hpp"
#include "soen/error.hpp"

namespace soen::diode {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(name) + " must be positive");
}

void require_fraction(double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in (0, 1]");
}

}  // namespace

void DiodeParams::validate() const {
    require_positive(N_a, "N_a");
    require_positive(N_d, "N_d");
    require_positive(n_i, "n_i");
    require_positive(tau_np, "tau_np");
    require_positive(tau_pn, "tau_pn");
    require_positive(mu_pp, "mu_pp");
    require_positive(mu_pn, "mu_pn");
    require_positive(mu_nn, "mu_nn");
    require_positive(mu_np, "mu_np");
    require_positive(T, "T");
    require_positive(A, "A");
    require_positive(C, "C");
    // eta_qe = 0 is tolerated so a dark emitter can be simulated; it yields no photons.
    if (!(eta_qe >= 0.0 && eta_qe <= 1.0)) throw ConfigError("eta_qe must lie in [0, 1]");
    require_fraction(eta_wg, "eta_wg");
    require_positive(photon_wavelength, "photon_wavelength");
}

double DiodeParams::thermal_voltage() const {
    return constants::boltzmann * T / constants::elementary_charge;
}

double DiodeParams::L_p() const { return std::sqrt(D_p() * tau_pn); }
double DiodeParams::L_n() const { return std::sqrt(D_n() * tau_np); }

double DiodeParams::saturation_current() const {
    return constants::elementary_charge * A * ((D_p() / L_p()) * p_n() + (D_n() / L_n()) * n_p());
}

double DiodeParams::photon_energy() const { return constants::photon_energy(photon_wavelength); }

void DriveCircuitParams::validate() const {
    require_positive(L_hT, "L_hT");
    require_positive(r_normal, "r_normal");
    if (!(r1 >= 0.0)) throw ConfigError("r1 must be non-negative");
    if (!(I_LED >= 0.0)) throw ConfigError("I_LED must be non-negative");
    require_positive(quasi_static_threshold, "quasi_static_threshold");
}

double i_pn(const DiodeParams& params, double V) {
    const double x = V / params.thermal_voltage();
    const double is = params.saturation_current();
    if (x <= exponent_clamp) return is * std::expm1(x);
    // Linear continuation keeps the characteristic monotone and C1 past the clamp.
    const double e = std::exp(exponent_clamp);
    return is * (e * (1.0 + (x - exponent_clamp)) - 1.0);
}

double di_pn_dV(const DiodeParams& params, double V) {
    const double vt = params.thermal_voltage();
    const double x = std::min(V / vt, exponent_clamp);
    return params.saturation_current() * std::exp(x) / vt;
}

double forward_voltage(const DiodeParams& params, double I) {
    if (!(I > 0.0)) throw ConfigError("non-positive current has no forward voltage");
    // Bracket [0, hi] with i_pn(0) = 0 < I.
    double lo = 0.0;
    double hi = params.thermal_voltage();
    while (i_pn(params, hi) < I) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw SimulationError("forward voltage bracket failed");
    }
    double v = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double f = i_pn(params, v) - I;
        if (std::abs(f) <= 1e-12 * I) return v;
        if (f > 0.0) hi = v; else lo = v;
        const double slope = di_pn_dV(params, v);
        double next = v - f / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
        v = next;
    }
    return v;
}

Schedule square_schedule(double r_normal, double duration, double t_start) {
    Schedule s;
    if (duration > 0.0) s.segments.push_back({t_start, t_start + duration, r_normal});
    return s;
}

namespace {

struct SegmentIntegrals {
    double charge_source = 0.0, charge_htron = 0.0, charge_pn = 0.0;
    double supplied = 0.0, r1 = 0.0, htron = 0.0, junction = 0.0;
};

SegmentIntegrals integrate_segment(const ode::TimeSeries& seg, const DiodeParams& diode,
                                   const DriveCircuitParams& circuit, double r_hc) {
    const std::size_t n = seg.size();
    std::vector<double> i1(n), ipn(n), supplied(n), p_r1(n), p_ht(n), p_pn(n), src(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double I1 = seg.states[k][0];
        const double V2 = seg.states[k][1];
        const double Ir1 = circuit.I_LED - I1;
        const double VA = V2 + circuit.r1 * Ir1;
        i1[k] = I1;
        ipn[k] = i_pn(diode, V2);
        src[k] = circuit.I_LED;
        supplied[k] = circuit.I_LED * VA;
        p_r1[k] = circuit.r1 * Ir1 * Ir1;
        p_ht[k] = r_hc * I1 * I1;
        p_pn[k] = V2 * ipn[k];
    }
    SegmentIntegrals out;
    out.charge_source = ode::trapezoid(seg.times, src);
    out.charge_htron = ode::trapezoid(seg.times, i1);
    out.charge_pn = ode::trapezoid(seg.times, ipn);
    out.supplied = ode::trapezoid(seg.times, supplied);
    out.r1 = ode::trapezoid(seg.times, p_r1);
    out.htron = ode::trapezoid(seg.times, p_ht);
    out.junction = ode::trapezoid(seg.times, p_pn);
    return out;
}

}  // namespace

LedTransient simulate_led_drive(const DiodeParams& diode, const DriveCircuitParams& circuit,
                                const Schedule& r_schedule, std::pair<double, double> t_span,
                                const LedSolverOptions& options) {
    diode.validate();
    circuit.validate();
    const auto [t0, t1] = t_span;
    if (!(t1 > t0)) throw ConfigError("t_span must be increasing");
    for (const auto& s : r_schedule.segments) {
        if (!(s.t_end >= s.t_begin)) throw ConfigError("schedule segment ends before it begins");
        if (!(s.value >= 0.0)) throw ConfigError("channel resistance must be non-negative");
    }

    std::vector<double> cuts = {t0, t1};
    for (const auto& s : r_schedule.segments) {
        if (s.t_begin > t0 && s.t_begin < t1) cuts.push_back(s.t_begin);
        if (s.t_end > t0 && s.t_end < t1) cuts.push_back(s.t_end);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    LedTransient out;
    out.schedule = r_schedule;
    out.I_LED = circuit.I_LED;
    out.L_hT = circuit.L_hT;
    out.C = diode.C;

    ode::State y = {circuit.I_LED, 0.0};
    const double I = circuit.I_LED, r1 = circuit.r1, L = circuit.L_hT, C = diode.C;

    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const double r_hc = r_schedule(0.5 * (a + b));

        ode::OdeSystem sys;
        sys.dimension = 2;
        sys.rhs = [&diode, I, r1, L, C, r_hc](double, std::span<const double> s, std::span<double> d) {
            d[0] = (s[1] + r1 * I - (r1 + r_hc) * s[0]) / L;
            d[1] = (I - s[0] - i_pn(diode, s[1])) / C;
        };
        const double branch_tau = L / (r1 + r_hc);
        const bool quasi_static = r_hc > 0.0 && branch_tau < circuit.quasi_static_threshold * (b - a);
        double jump_energy = 0.0;
        if (quasi_static) {
            sys.algebraic.push_back({0, [I, r1, r_hc](double, std::span<const double> s) {
                                         return (s[1] + r1 * I) / (r1 + r_hc);
                                     }});
            ++out.quasi_static_segments;
            // The branch relaxes within L/(r1+r_hc); its stored energy goes into r_hc.
            const double settled = (y[1] + r1 * I) / (r1 + r_hc);
            jump_energy = 0.5 * L * (y[0] * y[0] - settled * settled);
        }

        ode::IntegratorConfig cfg;
        cfg.rel_tol = options.rel_tol;
        cfg.abs_tol = options.abs_tol;
        cfg.max_step = (b - a) / options.points_per_segment;
        auto seg = ode::integrate(sys, y, {a, b}, cfg);

        const auto ints = integrate_segment(seg, diode, circuit, r_hc);
        out.charge_source += ints.charge_source;
        out.charge_htron += ints.charge_htron;
        out.charge_pn += ints.charge_pn;
        out.energy_supplied += ints.supplied;
        out.dissipated.r1 += ints.r1;
        out.dissipated.htron += ints.htron + jump_energy;
        out.dissipated.junction += ints.junction;

        if (out.series.empty()) out.series = seg;
        else out.series.append(seg);
        y = seg.states.back();
    }

    out.pn_current.reserve(out.series.size());
    for (const auto& s : out.series.states) out.pn_current.push_back(i_pn(diode, s[1]));
    out.dissipated.residual_capacitor = 0.5 * C * y[1] * y[1];
    return out;
}

double photon_count(const LedTransient& transient, const DiodeParams& diode) {
    return diode.eta_qe / constants::elementary_charge * transient.charge_pn;
}

double dissipated_energy(const LedTransient& transient) { return transient.dissipated.total(); }

double rc_efficiency(const LedTransient& transient, const DiodeParams& diode) {
    const double e_rc = dissipated_energy(transient);
    if (!(e_rc > 0.0)) throw SimulationError("no dissipation; efficiency undefined");
    const double electrons = transient.charge_pn / constants::elementary_charge;
    return diode.photon_energy() * electrons / e_rc;
}

double led_efficiency(double eta_rc, double eta_qe, double eta_wg) {
    if (!(eta_rc > 0.0) || !(eta_qe > 0.0) || !(eta_wg > 0.0))
        throw ConfigError("efficiency must be positive");
    return 1.0 / (1.0 / eta_rc + 1.0 / eta_qe + 1.0 / eta_wg);
}

LedTransient run_square_pulse(const DiodeParams& diode, const DriveCircuitParams& circuit,
                              double duration) {
    if (!(duration > 0.0)) return simulate_led_drive(diode, circuit, {}, {0.0, 1e-12});
    return simulate_led_drive(diode, circuit, square_schedule(circuit.r_normal, duration),
                              {0.0, duration});
}

double min_pulse_for_photons(const DiodeParams& diode, const DriveCircuitParams& circuit,
                             double n_target) {
    if (!(n_target > 0.0)) throw ConfigError("photon target must be positive");
    auto photons = [&](double duration) {
        return photon_count(run_square_pulse(diode, circuit, duration), diode);
    };

    double lo = 0.0;
    double hi = 1e-10;
    while (photons(hi) < n_target) {
        if (hi >= max_pulse_duration) throw SimulationError("target photon count unreachable");
        lo = hi;
        hi = std::min(2.0 * hi, max_pulse_duration);
    }

    double best = hi;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double n = photons(mid);
        if (std::abs(n - n_target) <= 1e-3 * n_target) return mid;
        if (n < n_target) lo = mid;
        else hi = best = mid;
        if (hi - lo <= 1e-15) break;
    }
    return best;
}

}  // namespace soen::diode
