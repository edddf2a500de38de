#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace soen::oracles {

double saturation_current(const JunctionInputs& j) {
    const double vt = k_B * j.T / q_e;
    const double Dp = vt * j.mu_pn, Dn = vt * j.mu_np;
    const double Lp = std::sqrt(Dp * j.tau_pn), Ln = std::sqrt(Dn * j.tau_np);
    const double pn = j.n_i * j.n_i / j.N_d, np = j.n_i * j.n_i / j.N_a;
    return q_e * j.A * (Dp / Lp * pn + Dn / Ln * np);
}

double shockley_voltage(const JunctionInputs& j, double I) {
    return k_B * j.T / q_e * std::log1p(I / saturation_current(j));
}

double led_photons_charge_then_emit(const JunctionInputs& j, double I, double t_on, double C, double eta_qe) {
    const double emitted = I * t_on - C * shockley_voltage(j, I);
    return emitted > 0.0 ? eta_qe * emitted / q_e : 0.0;
}

double led_slope(const JunctionInputs& j, const std::vector<double>& currents, double t_on, double C,
                 double eta_qe) {
    if (currents.size() < 2) throw std::invalid_argument("need two currents");
    const double n = static_cast<double>(currents.size());
    double mx = 0, my = 0;
    std::vector<double> y;
    for (double I : currents) {
        y.push_back(led_photons_charge_then_emit(j, I, t_on, C, eta_qe));
        mx += I;
        my += y.back();
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < currents.size(); ++i) {
        sxy += (currents[i] - mx) * (y[i] - my);
        sxx += (currents[i] - mx) * (currents[i] - mx);
    }
    return sxy / sxx;
}

double photon_energy(double wavelength) { return h_planck * c_light / wavelength; }

double poisson_zero(double lambda) { return std::exp(-lambda); }

double amplifier_energy(double zeta, double wavelength, double N_ph, double eta_amp) {
    return zeta * photon_energy(wavelength) * N_ph / eta_amp;
}

double meander_area(double L, double sheet_inductance, double width) {
    return L / sheet_inductance * width * width;
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

double forced_decay_exact(double t, double y0) {
    return 0.5 * (std::sin(t) - std::cos(t)) + (y0 + 0.5) * std::exp(-t);
}

LinkBudget link_budget(double N_ph, int k_out, double loss_dB, double detector_efficiency) {
    const double lambda = N_ph * std::pow(10.0, -loss_dB / 10.0) * detector_efficiency / k_out;
    return {lambda, std::exp(-lambda)};
}

}  // namespace soen::oracles
