#include "soen/htron.hpp"

#include <algorithm>
#include <cmath>

#include "soen/error.hpp"

namespace soen::htron {

double ThermalStack::capacity(std::size_t node, double T) const {
    const auto& l = layers.at(node);
    return l.material.specific_heat(T) * l.material.density * l.volume();
}

double ThermalStack::stored_energy(std::span<const double> T) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& l = layers[i];
        sum += (l.material.enthalpy(T[i]) - l.material.enthalpy(T_g)) * l.material.density * l.volume();
    }
    return sum;
}

ThermalStack build_stack(const std::vector<Layer>& layers, double T_g) {
    if (layers.size() != 4) throw ConfigError("stack must have 4 layers");
    if (!(T_g > 0.0)) throw ConfigError("T_g must be positive");
    ThermalStack s;
    s.T_g = T_g;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& l = layers[i];
        l.material.validate();
        if (!(l.thickness > 0.0)) throw ConfigError("layer thickness must be positive");
        if (!(l.area > 0.0)) throw ConfigError("layer area must be positive");
        s.layers[i] = l;
    }
    for (std::size_t i = 0; i < 3; ++i) s.R[i] = s.layers[i].resistance(0.5) + s.layers[i + 1].resistance(0.5);
    s.R[3] = s.layers[3].resistance(0.5);
    return s;
}

ThermalStack build_stack(const StackSpec& spec, const MaterialTable& materials) {
    if (!(spec.side > 0.0)) throw ConfigError("stack side must be positive");
    std::vector<Layer> layers;
    for (std::size_t i = 0; i < 4; ++i) {
        auto it = materials.find(spec.materials[i]);
        if (it == materials.end()) throw ConfigError("unknown material " + spec.materials[i]);
        layers.push_back({it->second, spec.thickness[i], spec.side * spec.side});
    }
    return build_stack(layers, spec.T_g);
}

double node_time_constant(const ThermalStack& stack, std::size_t node, double T) {
    double g = 1.0 / stack.R.at(node);
    if (node > 0) g += 1.0 / stack.R[node - 1];
    return stack.capacity(node, T) / g;
}

void ChannelSpec::validate() const {
    if (!(T_c > 0.0)) throw ConfigError("T_c must be positive");
    if (!(sheet_resistance > 0.0)) throw ConfigError("sheet_resistance must be positive");
    if (!(squares > 0.0)) throw ConfigError("squares must be positive");
    if (!(wire_width > 0.0)) throw ConfigError("wire_width must be positive");
    if (!(I_c > 0.0)) throw ConfigError("I_c must be positive");
}

namespace {

// Conductances of the chain: g[0] between nodes 1-2, ..., g[3] node 4 to bath.
std::array<double, 4> conductances(const ThermalStack& stack) {
    return {1.0 / stack.R[0], 1.0 / stack.R[1], 1.0 / stack.R[2], 1.0 / stack.R[3]};
}

// Steady-state temperatures of the closed nodes given the dynamic ones: a
// tridiagonal solve over the 4-node chain.
void close_nodes(const ThermalStack& stack, const std::array<bool, 4>& closed, double q,
                 std::span<double> T) {
    const auto g = conductances(stack);
    std::array<double, 4> lo{}, di{}, up{}, rhs{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!closed[i]) {
            di[i] = 1.0;
            rhs[i] = T[i];
            continue;
        }
        const double g_left = i > 0 ? g[i - 1] : 0.0;
        const double g_right = g[i];
        di[i] = g_left + g_right;
        if (i > 0) lo[i] = -g_left;
        if (i < 3) up[i] = -g_right;
        rhs[i] = (i == 0 ? q : 0.0) + (i == 3 ? g_right * stack.T_g : 0.0);
    }
    for (std::size_t i = 1; i < 4; ++i) {
        const double m = lo[i] / di[i - 1];
        di[i] -= m * up[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::array<double, 4> x{};
    x[3] = rhs[3] / di[3];
    for (std::size_t i = 3; i-- > 0;) x[i] = (rhs[i] - up[i] * x[i + 1]) / di[i];
    for (std::size_t i = 0; i < 4; ++i)
        if (closed[i]) T[i] = x[i];
}

ode::OdeSystem thermal_system(const ThermalStack& stack, std::function<double(double)> Q,
                              const std::array<bool, 4>& closed) {
    ode::OdeSystem sys;
    sys.dimension = 4;
    sys.rhs = [&stack, Q](double t, std::span<const double> T, std::span<double> d) {
        const auto& R = stack.R;
        const double q1 = (T[1] - T[0]) / R[0];
        const double q2 = (T[2] - T[1]) / R[1];
        const double q3 = (T[3] - T[2]) / R[2];
        const double q4 = (stack.T_g - T[3]) / R[3];
        d[0] = (Q(t) + q1) / stack.capacity(0, T[0]);
        d[1] = (q2 - q1) / stack.capacity(1, T[1]);
        d[2] = (q3 - q2) / stack.capacity(2, T[2]);
        d[3] = (q4 - q3) / stack.capacity(3, T[3]);
    };
    for (std::size_t i = 0; i < 4; ++i) {
        if (!closed[i]) continue;
        sys.algebraic.push_back({i, [&stack, Q, closed, i](double t, std::span<const double> T) {
                                     std::array<double, 4> x = {T[0], T[1], T[2], T[3]};
                                     close_nodes(stack, closed, Q(t), x);
                                     return x[i];
                                 }});
    }
    return sys;
}

}  // namespace

ode::TimeSeries simulate_thermal_from(const ThermalStack& stack, const PiecewiseFunction& Q,
                                      std::array<double, 4> T0, std::pair<double, double> t_span,
                                      const ThermalOptions& options, const ode::StopCondition& stop) {
    const auto [t0, t1] = t_span;
    if (!(t1 > t0)) throw ConfigError("t_span must be increasing");
    for (double T : T0)
        if (!(T > 0.0)) throw ConfigError("initial temperatures must be positive");

    std::vector<double> cuts = {t0, t1};
    for (double b : Q.breakpoints())
        if (b > t0 && b < t1) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    ode::IntegratorConfig cfg;
    cfg.rel_tol = options.rel_tol;
    cfg.abs_tol = options.abs_tol;
    cfg.max_step = options.max_step;

    std::array<bool, 4> closed{};
    for (std::size_t i = 0; i < 4; ++i)
        closed[i] = node_time_constant(stack, i, options.closure_temperature) < options.quasi_static_tau;
    if (closed[channel_node]) throw ConfigError("channel node cannot be quasi-static");

    ode::TimeSeries out;
    ode::State y(T0.begin(), T0.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double a = cuts[k], b = cuts[k + 1];
        const auto* piece = Q.piece_at(0.5 * (a + b));
        std::function<double(double)> q = piece ? piece->fn : std::function<double(double)>([](double) { return 0.0; });
        for (double probe : {a, 0.5 * (a + b)})
            if (q(probe) < 0.0) throw ConfigError("heater power must be non-negative");
        auto seg = ode::integrate(thermal_system(stack, q, closed), y, {a, b}, cfg, stop);
        if (out.empty()) out = std::move(seg);
        else out.append(seg);
        y = out.states.back();
        if (out.times.back() < b) break;  // stopped early
    }
    return out;
}

ode::TimeSeries simulate_thermal(const ThermalStack& stack, const PiecewiseFunction& Q,
                                 std::pair<double, double> t_span, const ThermalOptions& options,
                                 const ode::StopCondition& stop) {
    return simulate_thermal_from(stack, Q, {stack.T_g, stack.T_g, stack.T_g, stack.T_g}, t_span,
                                 options, stop);
}

std::vector<std::pair<double, double>> intervals_above_tc(const ode::TimeSeries& series,
                                                          const ChannelSpec& channel) {
    std::vector<std::pair<double, double>> out;
    if (series.empty()) return out;
    const auto crossings = ode::all_crossings(series, channel_node, channel.T_c);
    bool above = series.states.front()[channel_node] > channel.T_c;
    double start = series.times.front();
    for (double c : crossings) {
        if (above) out.emplace_back(start, c);
        else start = c;
        above = !above;
    }
    if (above) out.emplace_back(start, series.times.back());
    return out;
}

double time_above_tc(const ode::TimeSeries& series, const ChannelSpec& channel) {
    double sum = 0.0;
    for (const auto& [a, b] : intervals_above_tc(series, channel)) sum += b - a;
    return sum;
}

double steady_state_power(const ThermalStack& stack, const ChannelSpec& channel) {
    // All heater power crosses R3 and R4 in series on its way to the bath.
    return (channel.T_c - stack.T_g) / (stack.R[2] + stack.R[3]);
}

double steady_state_power_density(const ThermalStack& stack, const ChannelSpec& channel) {
    return steady_state_power(stack, channel) / stack.area();
}

double channel_resistance(const ChannelSpec& channel, double T) {
    return T > channel.T_c ? channel.r_normal() : 0.0;
}

Schedule resistance_schedule(const ode::TimeSeries& series, const ChannelSpec& channel) {
    Schedule s;
    for (const auto& [a, b] : intervals_above_tc(series, channel))
        if (b > a) s.segments.push_back({a, b, channel.r_normal()});
    return s;
}

double heat_to_bath(const ThermalStack& stack, const ode::TimeSeries& series) {
    std::vector<double> flow;
    flow.reserve(series.size());
    for (const auto& T : series.states) flow.push_back((T[3] - stack.T_g) / stack.R[3]);
    return ode::trapezoid(series.times, flow);
}

}  // namespace soen::htron
