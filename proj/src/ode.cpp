#include "soen/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "soen/error.hpp"

namespace soen::ode {

std::vector<double> TimeSeries::component(std::size_t index) const {
    std::vector<double> out;
    out.reserve(states.size());
    for (const auto& s : states) out.push_back(s.at(index));
    return out;
}

void TimeSeries::append(const TimeSeries& tail) {
    std::size_t first = 0;
    if (!times.empty() && !tail.times.empty() && tail.times.front() <= times.back()) first = 1;
    for (std::size_t i = first; i < tail.size(); ++i) {
        times.push_back(tail.times[i]);
        states.push_back(tail.states[i]);
    }
}

namespace {

[[noreturn]] void diverged(double t) {
    std::ostringstream msg;
    msg << "model divergence at t=" << t;
    throw SimulationError(msg.str());
}

class Stepper {
public:
    Stepper(const OdeSystem& system) : sys_(system), pinned_(system.dimension, false) {
        for (const auto& a : system.algebraic) {
            if (a.component >= system.dimension) throw ConfigError("bad component index");
            pinned_[a.component] = true;
        }
    }

    void project(double t, std::span<double> y) const {
        for (const auto& a : sys_.algebraic) y[a.component] = a.value(t, y);
    }

    void eval(double t, std::span<const double> y, std::span<double> dydt) const {
        sys_.rhs(t, y, dydt);
        for (std::size_t i = 0; i < dydt.size(); ++i) {
            if (pinned_[i]) {
                dydt[i] = 0.0;
            } else if (!std::isfinite(dydt[i])) {
                diverged(t);
            }
        }
    }

    [[nodiscard]] bool pinned(std::size_t i) const { return pinned_[i]; }

private:
    const OdeSystem& sys_;
    std::vector<bool> pinned_;
};

void check_budget(std::size_t steps, const IntegratorConfig& config) {
    if (steps >= config.max_steps) throw SimulationError("integration budget exhausted");
}

TimeSeries integrate_rk4(const Stepper& st, State y, double t0, double t1,
                         const IntegratorConfig& config, const StopCondition& stop) {
    const std::size_t n = y.size();
    TimeSeries out;
    out.times.push_back(t0);
    out.states.push_back(y);

    State k1(n), k2(n), k3(n), k4(n), tmp(n);
    double t = t0;
    std::size_t steps = 0;
    while (t < t1) {
        check_budget(steps++, config);
        double h = config.dt;
        // Land exactly on t1 rather than leaving a sliver step.
        if (t + h >= t1 || (t1 - (t + h)) < 1e-9 * h) h = t1 - t;

        st.eval(t, y, k1);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        st.project(t + 0.5 * h, tmp);
        st.eval(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        st.project(t + 0.5 * h, tmp);
        st.eval(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
        st.project(t + h, tmp);
        st.eval(t + h, tmp, k4);
        for (std::size_t i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (h == t1 - t) ? t1 : t + h;
        st.project(t, y);

        out.times.push_back(t);
        out.states.push_back(y);
        if (stop && stop(t, y)) break;
    }
    return out;
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

TimeSeries integrate_dopri(const Stepper& st, State y, double t0, double t1,
                           const IntegratorConfig& config, const StopCondition& stop) {
    const std::size_t n = y.size();
    TimeSeries out;
    out.times.push_back(t0);
    out.states.push_back(y);

    std::array<State, 7> k;
    for (auto& v : k) v.assign(n, 0.0);
    State tmp(n), y_new(n);

    auto weight = [&](double a, double b) {
        return config.abs_tol + config.rel_tol * std::max(std::abs(a), std::abs(b));
    };

    st.eval(t0, y, k[0]);

    const double span = t1 - t0;
    double h = config.initial_step;
    if (h <= 0.0) {
        double d0 = 0.0, d1 = 0.0;
        std::size_t active = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (st.pinned(i)) continue;
            const double w = weight(y[i], y[i]);
            d0 += (y[i] / w) * (y[i] / w);
            d1 += (k[0][i] / w) * (k[0][i] / w);
            ++active;
        }
        if (active > 0) {
            d0 = std::sqrt(d0 / active);
            d1 = std::sqrt(d1 / active);
        }
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    }
    h = std::min({h, config.max_step, span});

    constexpr double safety = 0.9, beta = 0.04, alpha = 0.2 - 0.75 * beta;
    constexpr double fac_min = 0.2, fac_max = 10.0;
    double err_prev = 1e-4;
    bool last_rejected = false;

    double t = t0;
    std::size_t steps = 0;
    while (t < t1) {
        check_budget(steps++, config);
        bool final_step = false;
        if (t + h >= t1 || (t1 - (t + h)) < 1e-12 * span) {
            h = t1 - t;
            final_step = true;
        }
        if (h <= std::abs(t) * 1e-15) {
            std::ostringstream msg;
            msg << "step size underflow at t=" << t;
            throw SimulationError(msg.str());
        }

        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k[0][i];
        st.project(t + c[1] * h, tmp);
        st.eval(t + c[1] * h, tmp, k[1]);
        for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
        st.project(t + c[2] * h, tmp);
        st.eval(t + c[2] * h, tmp, k[2]);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a41 * k[0][i] + a42 * k[1][i] + a43 * k[2][i]);
        st.project(t + c[3] * h, tmp);
        st.eval(t + c[3] * h, tmp, k[3]);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a51 * k[0][i] + a52 * k[1][i] + a53 * k[2][i] + a54 * k[3][i]);
        st.project(t + c[4] * h, tmp);
        st.eval(t + c[4] * h, tmp, k[4]);
        for (std::size_t i = 0; i < n; ++i)
            tmp[i] = y[i] + h * (a61 * k[0][i] + a62 * k[1][i] + a63 * k[2][i] + a64 * k[3][i] +
                                 a65 * k[4][i]);
        const double t_new = final_step ? t1 : t + h;
        st.project(t_new, tmp);
        st.eval(t_new, tmp, k[5]);
        for (std::size_t i = 0; i < n; ++i)
            y_new[i] = y[i] + h * (a71 * k[0][i] + a73 * k[2][i] + a74 * k[3][i] + a75 * k[4][i] +
                                   a76 * k[5][i]);
        st.project(t_new, y_new);
        st.eval(t_new, y_new, k[6]);

        double err = 0.0;
        std::size_t active = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (st.pinned(i)) continue;
            const double ei = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                   e6 * k[5][i] + e7 * k[6][i]);
            const double r = ei / weight(y[i], y_new[i]);
            err += r * r;
            ++active;
        }
        err = active > 0 ? std::sqrt(err / active) : 0.0;
        if (!std::isfinite(err)) diverged(t);

        if (err <= 1.0) {
            t = t_new;
            y = y_new;
            k[0] = k[6];
            out.times.push_back(t);
            out.states.push_back(y);
            if (stop && stop(t, y)) break;

            double fac = err == 0.0 ? fac_max
                                    : safety * std::pow(err, -alpha) * std::pow(err_prev, beta);
            fac = std::clamp(fac, fac_min, fac_max);
            if (last_rejected) fac = std::min(fac, 1.0);
            err_prev = std::max(err, 1e-4);
            last_rejected = false;
            h = std::min(h * fac, config.max_step);
        } else {
            const double fac = std::max(fac_min, safety * std::pow(err, -0.2));
            h *= fac;
            last_rejected = true;
        }
    }
    return out;
}

}  // namespace

TimeSeries integrate(const OdeSystem& system, State state0, std::pair<double, double> t_span,
                     const IntegratorConfig& config, const StopCondition& stop) {
    if (!system.rhs) throw ConfigError("ode system has no right-hand side");
    if (state0.size() != system.dimension)
        throw ConfigError("initial state length does not match system dimension");
    if (!(t_span.second > t_span.first)) throw ConfigError("t_span must be increasing");
    if (config.mode == Mode::fixed_step && !(config.dt > 0.0)) throw ConfigError("dt must be positive");
    if (config.mode == Mode::adaptive && !(config.rel_tol > 0.0)) throw ConfigError("rel_tol must be positive");
    if (!(config.max_step > 0.0)) throw ConfigError("max_step must be positive");

    Stepper stepper(system);
    stepper.project(t_span.first, state0);
    if (config.mode == Mode::fixed_step)
        return integrate_rk4(stepper, std::move(state0), t_span.first, t_span.second, config, stop);
    return integrate_dopri(stepper, std::move(state0), t_span.first, t_span.second, config, stop);
}

std::optional<double> find_crossing(const TimeSeries& series, std::size_t component, double level,
                                    Direction direction) {
    if (series.empty()) throw ConfigError("empty time series");
    if (component >= series.states.front().size()) throw ConfigError("bad component index");
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double a = series.states[i - 1][component] - level;
        const double b = series.states[i][component] - level;
        const bool hit = direction == Direction::rising ? (a < 0.0 && b >= 0.0) : (a > 0.0 && b <= 0.0);
        if (hit) {
            const double t0 = series.times[i - 1], t1 = series.times[i];
            return t0 + (t1 - t0) * a / (a - b);
        }
    }
    return std::nullopt;
}

std::vector<double> all_crossings(const TimeSeries& series, std::size_t component, double level) {
    if (series.empty()) throw ConfigError("empty time series");
    if (component >= series.states.front().size()) throw ConfigError("bad component index");
    std::vector<double> out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const double a = series.states[i - 1][component] - level;
        const double b = series.states[i][component] - level;
        if ((a <= 0.0) != (b <= 0.0)) {
            const double t0 = series.times[i - 1], t1 = series.times[i];
            out.push_back(t0 + (t1 - t0) * a / (a - b));
        }
    }
    return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("trapezoid: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return sum;
}

}  // namespace soen::ode
