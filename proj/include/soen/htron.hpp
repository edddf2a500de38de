#pragma once

// hTron thermal switch: four lumped nodes (heater, upper spacer, channel,
// lower spacer) between a Joule-heated gate and the bath.
//
//   dT1/dt = Q/C1 + (T2-T1)/(R1 C1)
//   dT2/dt = (T1-T2)/(R1 C2) + (T3-T2)/(R2 C2)
//   dT3/dt = (T2-T3)/(R2 C3) + (T4-T3)/(R3 C3)
//   dT4/dt = (T3-T4)/(R3 C4) + (Tg-T4)/(R4 C4)

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "soen/ode.hpp"
#include "soen/piecewise.hpp"

namespace soen::htron {

/// Specific heat c(T) = cv_linear*T + cv_cubic*T^3, J/(kg K).
struct MaterialProps {
    std::string name;
    double density = 0.0;               ///< kg/m^3
    double thermal_conductivity = 0.0;  ///< W/(m K)
    double cv_linear = 0.0;             ///< J/(kg K^2)
    double cv_cubic = 0.0;              ///< J/(kg K^4)

    void validate() const;
    [[nodiscard]] double specific_heat(double T) const { return (cv_linear + cv_cubic * T * T) * T; }
    /// int_0^T c(T') dT'
    [[nodiscard]] double enthalpy(double T) const {
        return 0.5 * cv_linear * T * T + 0.25 * cv_cubic * T * T * T * T;
    }
};

using MaterialTable = std::map<std::string, MaterialProps>;

/// Whitespace-separated records: name density conductivity cv_linear cv_cubic.
/// '#' starts a comment.
MaterialTable parse_materials(const std::string& text);
MaterialTable load_materials(const std::string& path);
std::string format_materials(const MaterialTable& table);

struct Layer {
    MaterialProps material;
    double thickness = 0.0;  ///< m
    double area = 0.0;       ///< m^2

    [[nodiscard]] double volume() const { return thickness * area; }
    /// d / (k A) for the given fraction of the thickness.
    [[nodiscard]] double resistance(double fraction = 1.0) const {
        return fraction * thickness / (material.thermal_conductivity * area);
    }
};

struct ThermalStack {
    std::array<Layer, 4> layers;  ///< heater, upper spacer, channel, lower spacer
    double T_g = 4.2;
    std::array<double, 4> R{};    ///< K/W; R[3] links node 4 to the bath

    [[nodiscard]] double capacity(std::size_t node, double T) const;  ///< J/K
    /// Sum over nodes of int_{T_g}^{T_i} C_i dT.
    [[nodiscard]] double stored_energy(std::span<const double> T) const;
    [[nodiscard]] double area() const { return layers[0].area; }
};

ThermalStack build_stack(const std::vector<Layer>& layers, double T_g);

/// Stack described by material names and thicknesses over a square footprint.
struct StackSpec {
    std::array<std::string, 4> materials = {"Al", "a-Si", "MoSi", "SiO2"};
    std::array<double, 4> thickness = {10e-9, 10e-9, 8e-9, 50e-9};
    double side = 5.4e-6;
    double T_g = 4.2;
};

ThermalStack build_stack(const StackSpec& spec, const MaterialTable& materials);

struct ChannelSpec {
    double T_c = 6.2;
    double sheet_resistance = 400.0;  ///< ohm/sq
    double squares = 2000.0;
    double wire_width = 100e-9;
    double I_c = 16e-6;

    void validate() const;
    [[nodiscard]] double r_normal() const { return sheet_resistance * squares; }
};

/// Channel node index in the state vector.
inline constexpr std::size_t channel_node = 2;

struct ThermalOptions {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;   ///< K
    double max_step = 20e-12;
    /// Nodes relaxing faster than this (at closure_temperature) are held at
    /// their instantaneous steady state instead of being integrated.
    double quasi_static_tau = 5e-12;
    double closure_temperature = 6.2;
};

/// C_i / (sum of conductances to neighbours), evaluated at T.
double node_time_constant(const ThermalStack& stack, std::size_t node, double T);

/// Integrates from uniform T_g. The power function is split at its piece
/// boundaries. A stop condition may end the run early.
ode::TimeSeries simulate_thermal(const ThermalStack& stack, const PiecewiseFunction& Q,
                                 std::pair<double, double> t_span,
                                 const ThermalOptions& options = {},
                                 const ode::StopCondition& stop = {});

/// Same, from an arbitrary initial temperature vector.
ode::TimeSeries simulate_thermal_from(const ThermalStack& stack, const PiecewiseFunction& Q,
                                      std::array<double, 4> T0, std::pair<double, double> t_span,
                                      const ThermalOptions& options = {},
                                      const ode::StopCondition& stop = {});

/// Intervals during which the channel node is above T_c.
std::vector<std::pair<double, double>> intervals_above_tc(const ode::TimeSeries& series,
                                                          const ChannelSpec& channel);

/// Total time the channel node spends above T_c.
double time_above_tc(const ode::TimeSeries& series, const ChannelSpec& channel);

/// Smallest constant heater power holding the channel node at T_c, per unit area (W/m^2).
double steady_state_power_density(const ThermalStack& stack, const ChannelSpec& channel);
double steady_state_power(const ThermalStack& stack, const ChannelSpec& channel);

/// 0 at or below T_c, r_normal above.
double channel_resistance(const ChannelSpec& channel, double T);

/// Resistance schedule r_hc(t) from the above-T_c intervals.
Schedule resistance_schedule(const ode::TimeSeries& series, const ChannelSpec& channel);

/// Heat delivered to the bath, int (T4 - T_g)/R4 dt.
double heat_to_bath(const ThermalStack& stack, const ode::TimeSeries& series);

}  // namespace soen::htron
