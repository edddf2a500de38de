#include <cmath>

#include <doctest.h>

#include "soen/constants.hpp"
#include "soen/error.hpp"
#include "soen/neuron.hpp"

using namespace soen::neuron;

TEST_CASE("synapse decay and jumps") {
    SynapseConfig s;
    SynapseState st;
    st.current = 1e-6;
    const auto a = synapse_update(st, s, 0.0, 50e-9, {});
    CHECK(a.current == doctest::Approx(1e-6 * std::exp(-0.5)).epsilon(1e-12));
    const auto b = synapse_update({}, s, 0.0, 10e-9, {2e-9});
    CHECK(b.current ==
          doctest::Approx(soen::constants::flux_quantum / s.L_si * std::exp(-8e-9 / s.tau_si)).epsilon(1e-12));
}

TEST_CASE("dead time filtering") {
    const auto kept = accepted_spikes({0.0, 5e-9, 25e-9, 30e-9, 50e-9}, 20e-9);
    CHECK(kept == std::vector<double>{0.0, 25e-9, 50e-9});
}

TEST_CASE("threshold, lockout and relative refraction") {
    NeuronConfig n;
    n.synapses = {SynapseConfig{}};
    CHECK(n.threshold_at(10e-9, 0.0) == doctest::Approx(1e-6 * (1 + std::exp(-10.0 / 50.0))));
    CHECK(n.lockout() == doctest::Approx(50e-9));
    // Strong drive: output limited by the lockout.
    n.synapses[0].w = 10;
    n.synapses[0].dead_time = 1e-9;
    SpikeTrain in;
    for (int k = 0; k < 500; ++k) in.times.push_back(k * 2e-9);
    const auto run = run_neuron(n, {in}, {0.0, 1e-6});
    REQUIRE(run.output.times.size() >= 2);
    for (std::size_t i = 1; i < run.output.times.size(); ++i)
        CHECK(run.output.times[i] - run.output.times[i - 1] >= n.lockout() - 1e-15);
    CHECK_THROWS_WITH(run_neuron(n, {}, {0.0, 1e-6}), "input/synapse arity mismatch");
    CHECK_THROWS_WITH(ni_current({1.0}, {}), "coupling/synapse arity mismatch");
}

TEST_CASE("inhibitory synapse delays firing") {
    NeuronConfig n;
    n.synapses = {SynapseConfig{}, SynapseConfig{}};
    n.synapses[1].c = -0.5;
    SpikeTrain ex, inh;
    for (int k = 0; k < 100; ++k) ex.times.push_back(1e-9 + k * 21e-9);
    const auto alone = run_neuron(n, {ex, inh}, {0.0, 2e-6});
    inh = ex;
    const auto both = run_neuron(n, {ex, inh}, {0.0, 2e-6});
    CHECK(both.output.times.size() < alone.output.times.size());
}

TEST_CASE("spike CSV") {
    const SpikeTrain t{{1e-9, 2.5e-9}};
    CHECK(parse_spike_csv(format_spike_csv(t)).times == t.times);
    CHECK_THROWS_AS(parse_spike_csv("time\n1\n"), soen::ConfigError);
    CHECK_THROWS_AS(parse_spike_csv("t_seconds\n2\n1\n"), soen::ConfigError);
}
