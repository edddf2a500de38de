#include <cmath>

#include <doctest.h>

#include "soen/config.hpp"
#include "soen/drive.hpp"
#include "soen/error.hpp"
#include "soen/figures.hpp"

using namespace soen;

TEST_CASE("pulse shapes") {
    const auto sq = drive::square_pulse(1e-3, 2e-9, 1e-9);
    CHECK(sq.current(0.5e-9) == 0.0);
    CHECK(sq.current(2e-9) == 1e-3);
    CHECK(sq.current(3.5e-9) == 0.0);
    const auto ex = drive::exponential_pulse(1e-3, 300e-12, 30e-9, 1e-9);
    CHECK(ex.t_off() == doctest::Approx(1e-9));
    CHECK(ex.current(1e-9 - 1e-15) == doctest::Approx(1e-3 * (1 - std::exp(-1e-9 / 300e-12))));
    CHECK(ex.current(31e-9) == doctest::Approx(1e-3 * std::exp(-1.0)));
    CHECK(drive::gate_energy(sq, 10.0) == doctest::Approx(1e-6 * 10.0 * 2e-9));
    drive::NtronParams nt;
    CHECK(nt.tau() == doctest::Approx(50e-9));
}

TEST_CASE("required drive hits the target time above T_c") {
    const config::RunConfig cfg;
    const auto s = cfg.thermal_stack();
    const double tau = drive::required_tau_for_ton(s, cfg.channel, cfg.ntron, 10e-9);
    auto nt = cfg.ntron;
    nt.L_nT = tau * nt.r_load;
    const auto g = drive::drive_htron(s, cfg.channel, nt.pulse(), nt.r_load);
    CHECK(g.t_above == doctest::Approx(10e-9).epsilon(0.02));
    const double sq = drive::required_square_for_ton(s, cfg.channel, cfg.ntron, 10e-9);
    const auto gs = drive::drive_htron(s, cfg.channel, drive::square_pulse(nt.channel_current, sq), nt.r_load);
    CHECK(gs.t_above == doctest::Approx(10e-9).epsilon(0.02));

    auto weak = cfg.ntron;
    weak.channel_current = 50e-6;
    CHECK_THROWS_WITH(drive::required_tau_for_ton(s, cfg.channel, weak, 5e-9), "insufficient drive amplitude");
}

TEST_CASE("tau_nT grows about ten times faster than t_above") {
    const config::RunConfig cfg;
    std::vector<double> t, tau;
    for (double x : {5e-9, 10e-9, 20e-9, 40e-9}) {
        t.push_back(x);
        tau.push_back(drive::required_tau_for_ton(cfg.thermal_stack(), cfg.channel, cfg.ntron, x));
    }
    const double slope = figures::linear_slope(t, tau);
    CHECK(slope > 8.0);
    CHECK(slope < 12.0);
}

TEST_CASE("meander geometry") {
    const auto g = drive::inductor_geometry(360e-9, 180e-12, 100e-9);
    CHECK(g.squares == 2000.0);
    CHECK(g.area == doctest::Approx(2000 * 1e-14));
    CHECK_THROWS_AS(drive::inductor_geometry(0.0, 1.0, 1.0), ConfigError);
}
