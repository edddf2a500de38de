#include <cmath>

#include <doctest.h>

#include "soen/constants.hpp"
#include "soen/diode.hpp"
#include "soen/error.hpp"

using namespace soen::diode;

TEST_CASE("junction characteristic") {
    DiodeParams d;
    CHECK(i_pn(d, 0.0) == 0.0);
    CHECK(i_pn(d, -1.0) < 0.0);
    const double V = forward_voltage(d, 10e-6);
    CHECK(V == doctest::Approx(1.0).epsilon(0.05));
    CHECK(i_pn(d, V) == doctest::Approx(10e-6).epsilon(1e-10));
    // Past the clamp the characteristic continues linearly and stays monotone.
    const double vc = exponent_clamp * d.thermal_voltage();
    CHECK(i_pn(d, vc + 0.1) > i_pn(d, vc));
    CHECK(di_pn_dV(d, vc + 0.1) == doctest::Approx(di_pn_dV(d, vc)));
    CHECK_THROWS_AS(forward_voltage(d, 0.0), soen::ConfigError);
}

TEST_CASE("square pulse accounting") {
    DiodeParams d;
    d.eta_qe = 0.1;
    DriveCircuitParams c;
    const auto tr = run_square_pulse(d, c, 3e-9);
    CHECK(tr.quasi_static_segments == 1);
    const double q = tr.charge_source - tr.charge_htron - tr.charge_pn - d.C * tr.V2_final();
    CHECK(std::abs(q) < 1e-3 * tr.charge_source);
    CHECK(photon_count(tr, d) == doctest::Approx(d.eta_qe * tr.charge_pn / soen::constants::elementary_charge));
    CHECK(dissipated_energy(tr) > tr.dissipated.total_without_r1());
    const double eta = rc_efficiency(tr, d);
    CHECK(eta > 0.0);
    CHECK(eta <= 1.0);
    CHECK(led_efficiency(eta, 0.1, 1.0) < 0.1);
}

TEST_CASE("zero duration and unreachable targets") {
    DiodeParams d;
    DriveCircuitParams c;
    const auto tr = run_square_pulse(d, c, 0.0);
    CHECK(photon_count(tr, d) == 0.0);
    CHECK_THROWS_WITH(rc_efficiency(tr, d), "no dissipation; efficiency undefined");
    CHECK_THROWS_WITH(min_pulse_for_photons(d, c, 1e12), "target photon count unreachable");
    CHECK_THROWS_WITH(led_efficiency(0.5, 0.0, 1.0), "efficiency must be positive");
}

TEST_CASE("minimum pulse hits the photon target") {
    DiodeParams d;
    d.eta_qe = 0.1;
    DriveCircuitParams c;
    const double t = min_pulse_for_photons(d, c, 1e4);
    CHECK(photon_count(run_square_pulse(d, c, t), d) == doctest::Approx(1e4).epsilon(5e-3));
}

TEST_CASE("invalid parameters") {
    DiodeParams d;
    d.C = -1.0;
    CHECK_THROWS_AS(d.validate(), soen::ConfigError);
    d = {};
    d.eta_wg = 1.5;
    CHECK_THROWS_AS(d.validate(), soen::ConfigError);
}
