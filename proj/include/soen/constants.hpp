#pragma once

namespace soen::constants {

// SI 2019 exact values.
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;             // J/K
inline constexpr double planck = 6.62607015e-34;              // J s
inline constexpr double speed_of_light = 299792458.0;         // m/s

/// Magnetic flux quantum h/2e.
inline constexpr double flux_quantum = planck / (2.0 * elementary_charge);  // Wb

/// Photon energy h*c/lambda.
constexpr double photon_energy(double wavelength_m) {
    return planck * speed_of_light / wavelength_m;
}

}  // namespace soen::constants
