#pragma once

// Closed-form and brute-force references, written without the simulation
// modules so the acceptance checks compare against something independent.

#include <functional>
#include <vector>

namespace soen::oracles {

// Exact SI constants, repeated here on purpose.
inline constexpr double q_e = 1.602176634e-19;
inline constexpr double k_B = 1.380649e-23;
inline constexpr double h_planck = 6.62607015e-34;
inline constexpr double c_light = 299792458.0;

struct JunctionInputs {
    double N_a, N_d, n_i;     // m^-3
    double tau_np, tau_pn;    // s
    double mu_pn, mu_np;      // minority mobilities, m^2/(V s)
    double T, A;
};

/// Ideal-diode saturation current from the long-base formula.
double saturation_current(const JunctionInputs& j);
/// V with I = Is (exp(V/Vt) - 1), inverted in closed form.
double shockley_voltage(const JunctionInputs& j, double I);

/// Photons from a square current pulse into C parallel with a junction: the
/// pulse first charges C to V_f(I), after which every electron crosses.
double led_photons_charge_then_emit(const JunctionInputs& j, double I, double t_on, double C, double eta_qe);

/// Least-squares slope of the charge-then-emit photon count over `currents`.
double led_slope(const JunctionInputs& j, const std::vector<double>& currents, double t_on, double C,
                 double eta_qe);

double photon_energy(double wavelength);
double poisson_zero(double lambda);
/// zeta h nu N / eta
double amplifier_energy(double zeta, double wavelength, double N_ph, double eta_amp);
/// Meander footprint: (L / L_sheet) squares of width w.
double meander_area(double L, double sheet_inductance, double width);

/// Adaptive Simpson quadrature of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

/// y' = -y + sin(t), y(0) = y0: exact solution.
double forced_decay_exact(double t, double y0);

/// Mean photons per synapse after link loss, and the zero-photon probability.
struct LinkBudget {
    double lambda;
    double p_zero;
};
LinkBudget link_budget(double N_ph, int k_out, double loss_dB, double detector_efficiency);

}  // namespace soen::oracles
