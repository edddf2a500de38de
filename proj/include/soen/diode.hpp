#pragma once

// LED drive circuit: a current-biased hTron channel (inductance L_hT in series
// with a switchable resistance r_hc) from node A to ground, and a series
// resistor r1 from node A to the LED node (capacitance C in parallel with a
// Shockley p-n junction).
//
//   dI1/dt = (V2 + r1*I_LED - (r1 + r_hc)*I1) / L_hT
//   dV2/dt = (I_LED - I1 - I_pn(V2)) / C

#include <cstddef>
#include <utility>
#include <vector>

#include "soen/ode.hpp"
#include "soen/piecewise.hpp"

namespace soen::diode {

/// Junction constants (SI units: densities in m^-3, mobilities m^2/(V s)).
struct DiodeParams {
    double N_a = 5e25;
    double N_d = 5e25;
    double n_i = 1.5e16;
    double tau_np = 40e-9;
    double tau_pn = 40e-9;
    double mu_pp = 1e-2;
    double mu_pn = 1e-2;
    double mu_nn = 2.5e-2;
    double mu_np = 2.5e-2;
    double T = 300.0;               ///< model temperature, K
    double A = 5e-6 * 200e-9;       ///< junction area, m^2
    double C = 10e-15;              ///< F
    double eta_qe = 0.01;
    double eta_wg = 1.0;
    double photon_wavelength = 1.22e-6;

    void validate() const;

    [[nodiscard]] double thermal_voltage() const;  ///< k_B T / e
    [[nodiscard]] double p_n() const { return n_i * n_i / N_d; }
    [[nodiscard]] double n_p() const { return n_i * n_i / N_a; }
    [[nodiscard]] double D_p() const { return thermal_voltage() * mu_pn; }
    [[nodiscard]] double D_n() const { return thermal_voltage() * mu_np; }
    [[nodiscard]] double L_p() const;
    [[nodiscard]] double L_n() const;
    /// e A [(D_p/L_p) p_n + (D_n/L_n) n_p]
    [[nodiscard]] double saturation_current() const;
    [[nodiscard]] double photon_energy() const;
};

struct DriveCircuitParams {
    double L_hT = 360e-9;   ///< 2000 squares x 180 pH/sq
    double r1 = 1.0;
    double r_normal = 800e3;
    double I_LED = 10e-6;
    double quasi_static_threshold = 0.01;

    void validate() const;
};

/// Exponent argument eV/k_BT beyond which the exponential is continued linearly.
inline constexpr double exponent_clamp = 60.0;

double i_pn(const DiodeParams& params, double V);
double di_pn_dV(const DiodeParams& params, double V);

/// Inverse of i_pn by safeguarded Newton iteration. Throws ConfigError for I <= 0.
double forward_voltage(const DiodeParams& params, double I);

/// Dissipation inside the drive circuit, J.
struct EnergyBreakdown {
    double r1 = 0.0;
    double htron = 0.0;
    double junction = 0.0;
    /// Capacitor energy left at the end of the run; dissipated after switch-off.
    double residual_capacitor = 0.0;

    [[nodiscard]] double total() const { return r1 + htron + junction + residual_capacitor; }
    [[nodiscard]] double total_without_r1() const { return htron + junction + residual_capacitor; }
};

struct LedTransient {
    /// Components: 0 = I1 (hTron branch current, A), 1 = V2 (LED node, V).
    ode::TimeSeries series;
    std::vector<double> pn_current;
    Schedule schedule;
    double I_LED = 0.0;
    double L_hT = 0.0;
    double C = 0.0;

    // Integrals over the run, trapezoidal on the accepted points.
    double charge_source = 0.0;
    double charge_htron = 0.0;
    double charge_pn = 0.0;
    double energy_supplied = 0.0;   ///< int I_LED * V_A dt
    EnergyBreakdown dissipated;

    std::size_t quasi_static_segments = 0;  ///< segments run with the algebraic I1 closure

    [[nodiscard]] double V2_final() const { return series.states.back()[1]; }
    [[nodiscard]] double I1_initial() const { return series.states.front()[0]; }
    [[nodiscard]] double I1_final() const { return series.states.back()[0]; }
};

struct LedSolverOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-15;
    double points_per_segment = 400.0;  ///< caps the step at segment/points
};

/// Runs from the superconducting steady state (I1 = I_LED, V2 = 0) at
/// t_span.first. `r_schedule` gives r_hc(t); it is zero outside its segments.
LedTransient simulate_led_drive(const DiodeParams& diode, const DriveCircuitParams& circuit,
                                const Schedule& r_schedule, std::pair<double, double> t_span,
                                const LedSolverOptions& options = {});

/// Schedule with r_normal held for `duration` starting at `t_start`.
Schedule square_schedule(double r_normal, double duration, double t_start = 0.0);

/// (eta_qe / e) * int I_pn dt
double photon_count(const LedTransient& transient, const DiodeParams& diode);

/// Energy dissipated per event: integrated dissipation plus residual capacitor energy.
double dissipated_energy(const LedTransient& transient);

/// h nu (int I_pn dt / e) / E_RC: photon energy per junction electron over the
/// total dissipation. Independent of eta_qe.
double rc_efficiency(const LedTransient& transient, const DiodeParams& diode);

/// 1/eta_LED = 1/eta_RC + 1/eta_qe + 1/eta_wg
double led_efficiency(double eta_rc, double eta_qe, double eta_wg);

/// Upper limit of the on-duration search.
inline constexpr double max_pulse_duration = 1e-6;

/// Shortest square on-duration producing `n_target` photons (within 0.5%).
double min_pulse_for_photons(const DiodeParams& diode, const DriveCircuitParams& circuit,
                             double n_target);

/// Simulates a square pulse of `duration` from t = 0 (convenience for sweeps).
LedTransient run_square_pulse(const DiodeParams& diode, const DriveCircuitParams& circuit,
                              double duration);

}  // namespace soen::diode
