#include "soen/calibrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "soen/error.hpp"

namespace soen::calibrate {

double turn_on_time(const htron::ThermalStack& stack, const htron::ChannelSpec& channel,
                    double gate_current, double gate_resistance, double horizon) {
    const auto Q = drive::gate_power(drive::square_pulse(gate_current, horizon), gate_resistance);
    const double Tc = channel.T_c;
    auto series = htron::simulate_thermal(stack, Q, {0.0, horizon}, {},
                                          [Tc](double, std::span<const double> T) { return T[2] > Tc; });
    auto t = ode::find_crossing(series, htron::channel_node, Tc, ode::Direction::rising);
    return t ? *t : -1.0;
}

namespace {

using Vec2 = std::array<double, 2>;

htron::MaterialTable with_coefficients(const htron::StackSpec& spec, htron::MaterialTable table,
                                       const Vec2& log_p) {
    for (std::size_t i : {std::size_t{1}, std::size_t{3}}) table.at(spec.materials[i]).cv_cubic = std::exp(log_p[0]);
    table.at(spec.materials[2]).cv_cubic = std::exp(log_p[1]);
    return table;
}

struct Evaluation {
    Vec2 residual{};
    double turn_on = 0.0;
    double t_above = 0.0;
};

Evaluation evaluate(const htron::StackSpec& spec, const htron::MaterialTable& start,
                    const htron::ChannelSpec& channel, const ThermalAnchors& a, const Vec2& log_p) {
    const auto stack = htron::build_stack(spec, with_coefficients(spec, start, log_p));
    Evaluation e;
    e.turn_on = turn_on_time(stack, channel, a.gate_current, a.gate_resistance, 30.0 * a.target_turn_on);
    const auto pulse = drive::exponential_pulse(a.gate_current, a.exp_tau_rise, a.exp_tau_fall, a.exp_drive_time);
    e.t_above = drive::drive_htron(stack, channel, pulse, a.gate_resistance).t_above;
    // A channel that never switches is scored as far too slow / far too short.
    const double on = e.turn_on > 0.0 ? e.turn_on : 100.0 * a.target_turn_on;
    const double above = e.t_above > 0.0 ? e.t_above : 1e-3 * a.target_t_above;
    e.residual = {std::log(on / a.target_turn_on), std::log(above / a.target_t_above)};
    return e;
}

double norm(const Vec2& r) { return std::sqrt(r[0] * r[0] + r[1] * r[1]); }

}  // namespace

CalibrationResult calibrate_thermal(const htron::StackSpec& spec, const htron::MaterialTable& start,
                                    const htron::ChannelSpec& channel, const ThermalAnchors& anchors) {
    for (std::size_t i = 0; i < 4; ++i)
        if (!start.count(spec.materials[i])) throw ConfigError("unknown material " + spec.materials[i]);
    const double spacer0 = start.at(spec.materials[1]).cv_cubic;
    const double channel0 = start.at(spec.materials[2]).cv_cubic;
    if (!(spacer0 > 0.0) || !(channel0 > 0.0))
        throw ConfigError("calibration needs positive starting cv_cubic for spacer and channel");

    Vec2 p = {std::log(spacer0), std::log(channel0)};
    auto cur = evaluate(spec, start, channel, anchors, p);
    double lambda = 1e-2;
    int iter = 0;
    for (; iter < 40 && norm(cur.residual) > 1e-3; ++iter) {
        // Forward-difference Jacobian in log space.
        std::array<Vec2, 2> J{};
        constexpr double h = 1e-3;
        for (std::size_t j = 0; j < 2; ++j) {
            Vec2 q = p;
            q[j] += h;
            const auto e = evaluate(spec, start, channel, anchors, q);
            for (std::size_t i = 0; i < 2; ++i) J[i][j] = (e.residual[i] - cur.residual[i]) / h;
        }
        const auto& r = cur.residual;
        bool improved = false;
        for (int tries = 0; tries < 12 && !improved; ++tries) {
            // (J^T J + lambda diag(J^T J)) dp = -J^T r
            double a11 = J[0][0] * J[0][0] + J[1][0] * J[1][0];
            double a22 = J[0][1] * J[0][1] + J[1][1] * J[1][1];
            const double a12 = J[0][0] * J[0][1] + J[1][0] * J[1][1];
            const double g1 = J[0][0] * r[0] + J[1][0] * r[1];
            const double g2 = J[0][1] * r[0] + J[1][1] * r[1];
            a11 *= 1.0 + lambda;
            a22 *= 1.0 + lambda;
            const double det = a11 * a22 - a12 * a12;
            if (!(std::abs(det) > 0.0)) break;
            Vec2 dp = {-(a22 * g1 - a12 * g2) / det, -(a11 * g2 - a12 * g1) / det};
            for (double& d : dp) d = std::clamp(d, -2.0, 2.0);
            const Vec2 q = {p[0] + dp[0], p[1] + dp[1]};
            const auto e = evaluate(spec, start, channel, anchors, q);
            if (norm(e.residual) < norm(r)) {
                p = q;
                cur = e;
                lambda = std::max(lambda / 3.0, 1e-6);
                improved = true;
            } else {
                lambda *= 4.0;
            }
        }
        if (!improved) break;
    }

    CalibrationResult out;
    out.materials = with_coefficients(spec, start, p);
    out.spacer_cv_cubic = std::exp(p[0]);
    out.channel_cv_cubic = std::exp(p[1]);
    out.turn_on = cur.turn_on;
    out.t_above = cur.t_above;
    out.residual_norm = norm(cur.residual);
    out.iterations = iter;
    return out;
}

}  // namespace soen::calibrate
