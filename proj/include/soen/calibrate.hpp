#pragma once

// Fits the cubic heat-capacity coefficients of the spacer and channel
// materials to two timing anchors: the turn-on delay under a constant gate
// current, and the time above T_c under an exponential nTron pulse.

#include <string>
#include <vector>

#include "soen/drive.hpp"
#include "soen/htron.hpp"

namespace soen::calibrate {

struct ThermalAnchors {
    double gate_current = 1.2e-3;
    double gate_resistance = 10.0;
    double target_turn_on = 1e-9;
    double exp_tau_fall = 30e-9;
    double exp_tau_rise = 300e-12;
    double exp_drive_time = 1e-9;
    double target_t_above = 4.7e-9;
};

struct CalibrationResult {
    htron::MaterialTable materials;
    double spacer_cv_cubic = 0.0;
    double channel_cv_cubic = 0.0;
    double turn_on = 0.0;
    double t_above = 0.0;
    double residual_norm = 0.0;  ///< in log units
    int iterations = 0;
};

/// Delay from switch-on of a constant gate current to the channel crossing T_c.
/// Returns a negative value if it never crosses within `horizon`.
double turn_on_time(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                    double gate_current, double gate_resistance, double horizon = 30e-9);

/// Levenberg-Marquardt in log-coefficients. The spacer coefficient is shared by
/// both spacer materials of `spec`; the channel material gets its own.
CalibrationResult calibrate_thermal(const htron::StackSpec& spec, const htron::MaterialTable& start,
                                    const htron::ChannelSpec& channel, const ThermalAnchors& anchors = {});

}  // namespace soen::calibrate
