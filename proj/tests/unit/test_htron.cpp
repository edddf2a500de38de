#include <cmath>

#include <doctest.h>

#include "soen/config.hpp"
#include "soen/drive.hpp"
#include "soen/error.hpp"
#include "soen/htron.hpp"

using namespace soen;

namespace {

htron::ThermalStack default_stack() { return config::RunConfig{}.thermal_stack(); }

}  // namespace

TEST_CASE("materials table parsing") {
    const auto t = htron::parse_materials("# comment\nAl 2700 30 0.05 9.19e-4\nX 1000 1 0 1e-3 # tail\n");
    CHECK(t.size() == 2);
    CHECK(t.at("Al").cv_linear == 0.05);
    CHECK(htron::parse_materials(htron::format_materials(t)).at("X").cv_cubic == 1e-3);
    CHECK_THROWS_AS(htron::parse_materials("Al 2700 30\n"), ConfigError);
    CHECK_THROWS_AS(htron::parse_materials("Al 2700 30 0 0\n"), ConfigError);
    CHECK_THROWS_AS(htron::parse_materials("A 1 1 1 1\nA 1 1 1 1\n"), ConfigError);
}

TEST_CASE("stack geometry and resistances") {
    const auto s = default_stack();
    CHECK(s.area() == doctest::Approx(5.4e-6 * 5.4e-6));
    CHECK(s.R[0] == doctest::Approx(17152.0).epsilon(1e-3));
    CHECK(s.R[3] == doctest::Approx(85734.0).epsilon(1e-3));
    CHECK_THROWS_WITH(htron::build_stack(std::vector<htron::Layer>(3), 4.2), "stack must have 4 layers");
}

TEST_CASE("thermal response: no power stays at bath, heat raises channel") {
    const auto s = default_stack();
    const auto idle = htron::simulate_thermal(s, {}, {0.0, 10e-9});
    for (double T : idle.states.back()) CHECK(T == doctest::Approx(s.T_g));

    const auto Q = drive::gate_power(drive::square_pulse(1.2e-3, 3e-9), 10.0);
    const auto hot = htron::simulate_thermal(s, Q, {0.0, 100e-9});
    htron::ChannelSpec ch;
    const auto intervals = htron::intervals_above_tc(hot, ch);
    REQUIRE(intervals.size() == 1);
    CHECK(htron::time_above_tc(hot, ch) == doctest::Approx(intervals[0].second - intervals[0].first));
    const auto sched = htron::resistance_schedule(hot, ch);
    CHECK(sched.total_duration() == doctest::Approx(htron::time_above_tc(hot, ch)));
    CHECK(hot.states.back()[htron::channel_node] < ch.T_c);
}

TEST_CASE("steady state and channel resistance") {
    const auto s = default_stack();
    htron::ChannelSpec ch;
    const double p = htron::steady_state_power(s, ch);
    CHECK(p == doctest::Approx(htron::steady_state_power_density(s, ch) * s.area()));
    // Holding that power long enough parks the channel at T_c.
    PiecewiseFunction Q;
    Q.pieces.push_back({0.0, 1e-6, [p](double) { return p; }});
    const auto r = htron::simulate_thermal(s, Q, {0.0, 1e-6});
    CHECK(r.states.back()[htron::channel_node] == doctest::Approx(ch.T_c).epsilon(1e-4));
    CHECK(htron::channel_resistance(ch, 6.0) == 0.0);
    CHECK(htron::channel_resistance(ch, 7.0) == ch.r_normal());
}

TEST_CASE("fast spacer nodes are closed algebraically") {
    const auto s = default_stack();
    CHECK(htron::node_time_constant(s, 1, 6.2) < 5e-12);
    CHECK(htron::node_time_constant(s, htron::channel_node, 6.2) > 5e-12);
    // Closing nodes must not move the answer.
    const auto Q = drive::gate_power(drive::square_pulse(1.2e-3, 3e-9), 10.0);
    htron::ThermalOptions full;
    full.quasi_static_tau = 0.0;
    full.max_step = 1e-12;
    htron::ChannelSpec ch;
    const double a = htron::time_above_tc(htron::simulate_thermal(s, Q, {0.0, 30e-9}), ch);
    const double b = htron::time_above_tc(htron::simulate_thermal(s, Q, {0.0, 30e-9}, full), ch);
    CHECK(a == doctest::Approx(b).epsilon(2e-3));
}
