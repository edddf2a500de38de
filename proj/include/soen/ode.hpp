#pragma once

// Explicit initial-value-problem integration: Dormand-Prince 5(4) with PI step
// control, or classical fixed-step RK4. State components may be pinned to an
// algebraic closure instead of being integrated (quasi-static reduction).

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace soen::ode {

using State = std::vector<double>;

/// dy/dt = rhs(t, y). Must be pure: same inputs, same outputs, no mutation of y.
using Rhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// Pins state[component] = value(t, state) at every stage. The integrator
/// never evolves a pinned component and excludes it from error control.
struct AlgebraicClosure {
    std::size_t component = 0;
    std::function<double(double t, std::span<const double> y)> value;
};

struct OdeSystem {
    std::size_t dimension = 0;
    Rhs rhs;
    std::vector<AlgebraicClosure> algebraic;
};

enum class Mode { fixed_step, adaptive };

struct IntegratorConfig {
    Mode mode = Mode::adaptive;
    double dt = 1e-3;                 ///< fixed-step size
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    double initial_step = 0.0;        ///< 0 selects a step from the initial derivative
    std::size_t max_steps = 2'000'000;
};

/// Accepted solution points; times strictly increasing.
struct TimeSeries {
    std::vector<double> times;
    std::vector<State> states;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] bool empty() const { return times.empty(); }
    [[nodiscard]] std::vector<double> component(std::size_t index) const;

    /// Appends another trajectory that starts where this one ends. A leading
    /// point at the current end time is dropped.
    void append(const TimeSeries& tail);
};

/// Terminates integration early once it returns true for an accepted point.
using StopCondition = std::function<bool(double t, std::span<const double> y)>;

TimeSeries integrate(const OdeSystem& system, State state0, std::pair<double, double> t_span,
                     const IntegratorConfig& config, const StopCondition& stop = {});

enum class Direction { rising, falling };

/// First linearly interpolated crossing of `level` in the given direction.
std::optional<double> find_crossing(const TimeSeries& series, std::size_t component, double level,
                                    Direction direction);

/// Every crossing of `level` (either direction), in time order.
std::vector<double> all_crossings(const TimeSeries& series, std::size_t component, double level);

/// Trapezoidal integral of samples over strictly increasing abscissae.
double trapezoid(std::span<const double> x, std::span<const double> y);

}  // namespace soen::ode
