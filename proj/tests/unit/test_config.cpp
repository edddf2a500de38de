#include <doctest.h>

#include "soen/config.hpp"
#include "soen/error.hpp"

using namespace soen;

TEST_CASE("quantities with units") {
    CHECK(config::parse_quantity("10", "fF", "F") == doctest::Approx(10e-15));
    CHECK(config::parse_quantity("5e19", "cm^-3", "m^-3") == doctest::Approx(5e25));
    CHECK(config::parse_quantity("1", "um^2", "m^2") == doctest::Approx(1e-12));
    CHECK(config::parse_quantity("400", "Ω/□", "Ohm/sq") == 400.0);
    CHECK(config::parse_quantity("2", "kOhm", "Ohm") == 2000.0);
    CHECK(config::parse_quantity("3", "µA", "A") == doctest::Approx(3e-6));
    CHECK_THROWS_AS(config::parse_quantity("1", "s", "F"), ConfigError);
    CHECK_THROWS_AS(config::parse_quantity("1", "", "F"), ConfigError);
    CHECK_THROWS_AS(config::parse_quantity("x", "F", "F"), ConfigError);
}

TEST_CASE("parse, dump, hash") {
    const auto c = config::parse("diode.C = 100 fF\nsynapse.1.tau_si = 20 ns\n");
    CHECK(c.diode.C == doctest::Approx(100e-15));
    CHECK(c.neuron.synapses.size() == 2);
    const auto text = config::dump(c);
    CHECK(config::dump(config::parse(text)) == text);
    CHECK(config::config_hash(c) == config::config_hash(config::parse(text)));
    CHECK(config::config_hash(c) != config::config_hash(config::RunConfig{}));
    CHECK(config::hash_hex(0x1234).size() == 16);
}

TEST_CASE("errors name the offending key") {
    CHECK_THROWS_WITH(config::parse("diode.C = 1 fF\ndiode.C = 2 fF\n", "x.cfg"), "x.cfg:2: diode.C: duplicate key");
    CHECK_THROWS_WITH(config::parse("nope.key = 1\n", "x.cfg"), "x.cfg:1: unknown parameter nope.key");
    CHECK_THROWS_AS(config::parse("diode.C = 1 furlong\n"), ConfigError);
    CHECK_THROWS_AS(config::parse("chain.k_out = 2.5\n"), ConfigError);
}

TEST_CASE("shipped defaults load and validate") {
    const auto c = config::load(SOEN_DATA_DIR "/defaults.cfg");
    c.validate();
    CHECK(c.diode.N_a == doctest::Approx(5e25));
    CHECK(c.ntron.tau() == doctest::Approx(50e-9));
    CHECK(config::get_si(c, "circuit.L_hT") == doctest::Approx(360e-9));
    auto d = c;
    config::set_si(d, "diode.C", 1e-15);
    CHECK(d.diode.C == 1e-15);
    CHECK(config::has_path(c, "synapse.0.w"));
    CHECK_FALSE(config::has_path(c, "diode.nope"));
}
