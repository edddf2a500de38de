#include <cmath>

#include <doctest.h>

#include "soen/error.hpp"
#include "soen/ode.hpp"

using namespace soen::ode;

namespace {

OdeSystem decay(double k) {
    OdeSystem s;
    s.dimension = 1;
    s.rhs = [k](double, std::span<const double> y, std::span<double> d) { d[0] = -k * y[0]; };
    return s;
}

}  // namespace

TEST_CASE("adaptive integration of exponential decay meets tolerance") {
    IntegratorConfig c;
    c.rel_tol = 1e-10;
    c.abs_tol = 1e-14;
    const auto s = integrate(decay(3.0), {2.0}, {0.0, 2.0}, c);
    CHECK(s.times.back() == 2.0);
    CHECK(s.states.back()[0] == doctest::Approx(2.0 * std::exp(-6.0)).epsilon(1e-8));
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.times[i] > s.times[i - 1]);
}

TEST_CASE("harmonic oscillator conserves energy under tight tolerance") {
    OdeSystem s;
    s.dimension = 2;
    s.rhs = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    IntegratorConfig c;
    c.rel_tol = 1e-11;
    c.abs_tol = 1e-13;
    const auto r = integrate(s, {1.0, 0.0}, {0.0, 20.0}, c);
    const auto& y = r.states.back();
    CHECK(y[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-8));
    CHECK(y[0] * y[0] + y[1] * y[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("algebraic closure pins a component") {
    OdeSystem s;
    s.dimension = 2;
    s.rhs = [](double, std::span<const double> y, std::span<double> d) {
        d[0] = -y[1];
        d[1] = 0.0;
    };
    s.algebraic.push_back({1, [](double, std::span<const double> y) { return 0.5 * y[0]; }});
    IntegratorConfig c;
    const auto r = integrate(s, {1.0, 0.5}, {0.0, 1.0}, c);
    CHECK(r.states.back()[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-7));
    CHECK(r.states.back()[1] == doctest::Approx(0.5 * r.states.back()[0]));
}

TEST_CASE("stop condition ends early and crossings interpolate") {
    IntegratorConfig c;
    c.max_step = 1e-3;
    const auto r = integrate(decay(1.0), {1.0}, {0.0, 10.0}, c,
                             [](double, std::span<const double> y) { return y[0] < 0.5; });
    CHECK(r.times.back() < 0.8);
    const auto t = find_crossing(r, 0, 0.5, Direction::falling);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(std::log(2.0)).epsilon(1e-6));
    CHECK_FALSE(find_crossing(r, 0, 0.5, Direction::rising).has_value());
    CHECK(all_crossings(r, 0, 0.5).size() == 1);
}

TEST_CASE("trapezoid and divergence") {
    const std::vector<double> x = {0, 1, 2}, y = {0, 1, 2};
    CHECK(trapezoid(x, y) == doctest::Approx(2.0));
    OdeSystem s;
    s.dimension = 1;
    s.rhs = [](double, std::span<const double>, std::span<double> d) { d[0] = std::nan(""); };
    CHECK_THROWS_AS(integrate(s, {1.0}, {0.0, 1.0}, IntegratorConfig{}), soen::SimulationError);
}
