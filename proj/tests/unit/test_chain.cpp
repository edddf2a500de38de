#include <cmath>

#include <doctest.h>

#include "soen/chain.hpp"
#include "soen/config.hpp"
#include "soen/error.hpp"

using namespace soen;

TEST_CASE("threshold event") {
    chain::ThresholdParams p;
    const auto ev = chain::threshold_event(p, 1e-9, 100e-6);
    CHECK(ev.pulse.amplitude == 140e-6);
    CHECK(ev.ntron_switch_time - 1e-9 ==
          doctest::Approx(-p.tau_rise() * std::log1p(-100e-6 / 140e-6)).epsilon(1e-3));
    CHECK_THROWS_WITH(chain::threshold_event(p, 0.0, 200e-6), "trigger insufficient to switch nTron");
}

TEST_CASE("firing event bookkeeping") {
    const config::RunConfig cfg;
    const auto f = chain::fire(cfg.chain_config());
    CHECK(f.N_ph > 0.0);
    CHECK(f.E_total == doctest::Approx(f.E_LED + f.E_gate));
    CHECK(1.0 / f.eta_amp == doctest::Approx(1.0 / f.eta_LED + 1.0 / f.eta_hT));
    CHECK(f.tau_nT == doctest::Approx(50e-9));
    CHECK(f.timings.trigger_to_ntron > 0.0);
    CHECK(f.warnings.empty());
}

TEST_CASE("square override fixes the on-time") {
    auto cfg = config::RunConfig{};
    cfg.chain_square_on_time = 10e-9;
    const auto f = chain::fire(cfg.chain_config());
    CHECK(f.t_on == doctest::Approx(10e-9).epsilon(1e-9));
}

TEST_CASE("dark emitter warns") {
    auto cfg = config::RunConfig{};
    cfg.diode.eta_qe = 0.0;
    const auto f = chain::fire(cfg.chain_config());
    CHECK(f.N_ph == 0.0);
    CHECK_FALSE(f.warnings.empty());
}

TEST_CASE("delivery statistics") {
    const auto d = chain::delivery_reliability(1e4, 1000, 3.0, 1.0);
    CHECK(d.mean_photons == doctest::Approx(10.0 * std::pow(10.0, -0.3)));
    const double mc = chain::sample_zero_fraction(5000.0, 1000, 0.0, 1.0, 7, 200);
    CHECK(mc == doctest::Approx(std::exp(-5.0)).epsilon(0.3));
    CHECK(chain::sample_zero_fraction(5000.0, 1000, 0.0, 1.0, 7, 200) == mc);
    CHECK_THROWS_AS(chain::delivery_reliability(1e4, 0, 0.0, 1.0), ConfigError);
}

TEST_CASE("efficiency point sizes the LED pulse") {
    const config::RunConfig cfg;
    const auto row = chain::efficiency_point(cfg.chain_config(), 1e3);
    CHECK(row.N_ph == doctest::Approx(1e3).epsilon(0.05));
    CHECK(row.E_amp == doctest::Approx(cfg.zeta * row.E_amp_no_zeta));
}
