#include "soen/neuron.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "soen/constants.hpp"
#include "soen/error.hpp"

namespace soen::neuron {

namespace {
constexpr double neg_inf = -std::numeric_limits<double>::infinity();
}

void SynapseConfig::validate() const {
    if (w < 0) throw ConfigError("synaptic weight must be non-negative");
    if (!(L_si > 0.0)) throw ConfigError("L_si must be positive");
    if (!(tau_si > 0.0)) throw ConfigError("tau_si must be positive");
    if (!(dead_time >= 0.0)) throw ConfigError("dead_time must be non-negative");
    if (!std::isfinite(c)) throw ConfigError("coupling must be finite");
}

double SynapseConfig::jump() const { return w * constants::flux_quantum / L_si; }

void NeuronConfig::validate() const {
    for (const auto& s : synapses) s.validate();
    if (!(I_threshold > 0.0)) throw ConfigError("I_threshold must be positive");
    if (!(refractory.tau_ref > 0.0)) throw ConfigError("tau_ref must be positive");
    if (!(refractory.depth >= 0.0)) throw ConfigError("refractory depth must be non-negative");
    if (!(max_rate > 0.0 && max_rate <= 20e6)) throw ConfigError("max_rate must lie in (0, 20 MHz]");
}

double NeuronConfig::threshold_at(double t, double last_spike) const {
    if (last_spike == neg_inf) return I_threshold;
    return I_threshold * (1.0 + refractory.depth * std::exp(-(t - last_spike) / refractory.tau_ref));
}

std::vector<double> accepted_spikes(const std::vector<double>& times, double dead_time) {
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    for (double t : sorted)
        if (out.empty() || t - out.back() >= dead_time) out.push_back(t);
    return out;
}

SynapseState synapse_update(SynapseState state, const SynapseConfig& config, double t0, double dt,
                            const std::vector<double>& spikes_in_window) {
    config.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    std::vector<double> spikes = spikes_in_window;
    std::sort(spikes.begin(), spikes.end());
    double t = t0;
    for (double ts : spikes) {
        if (ts < t0 || ts >= t0 + dt) continue;
        if (ts - state.last_accepted < config.dead_time) continue;
        state.current *= std::exp(-(ts - t) / config.tau_si);
        state.current += config.jump();
        state.last_accepted = ts;
        t = ts;
    }
    state.current *= std::exp(-(t0 + dt - t) / config.tau_si);
    return state;
}

double ni_current(const std::vector<double>& synapse_currents, const std::vector<double>& couplings) {
    if (synapse_currents.size() != couplings.size()) throw ConfigError("coupling/synapse arity mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < couplings.size(); ++i) sum += couplings[i] * synapse_currents[i];
    return sum;
}

namespace {

struct Event {
    double t;
    std::size_t synapse;
};

class EventNeuron {
public:
    EventNeuron(const NeuronConfig& cfg, double t0) : cfg_(cfg), I_(cfg.synapses.size(), 0.0), t_(t0) {
        for (const auto& s : cfg.synapses) couplings_.push_back(s.c);
        double shortest = cfg.refractory.tau_ref;
        for (const auto& s : cfg.synapses) shortest = std::min(shortest, s.tau_si);
        scan_step_ = shortest / 50.0;
    }

    [[nodiscard]] double ni_at(double t) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < I_.size(); ++i)
            sum += couplings_[i] * I_[i] * std::exp(-(t - t_) / cfg_.synapses[i].tau_si);
        return sum;
    }
    [[nodiscard]] double margin(double t) const { return ni_at(t) - cfg_.threshold_at(t, last_spike_); }

    void advance(double t) {
        for (std::size_t i = 0; i < I_.size(); ++i) I_[i] *= std::exp(-(t - t_) / cfg_.synapses[i].tau_si);
        t_ = t;
    }

    void kick(std::size_t i) { I_[i] += cfg_.synapses[i].jump(); }

    // Fires every threshold crossing in [t_, t_end]; records each spike.
    void fire_until(double t_end, NeuronRun& run) {
        for (;;) {
            double ta = std::max(t_, last_spike_ + cfg_.lockout());
            if (ta > t_end) return;
            auto t_fire = first_crossing(ta, t_end);
            if (!t_fire) return;
            advance(*t_fire);
            last_spike_ = *t_fire;
            run.output.times.push_back(*t_fire);
            record(run);
        }
    }

    void record(NeuronRun& run) const {
        ode::State s = I_;
        s.push_back(ni_current(I_, couplings_));
        s.push_back(cfg_.threshold_at(t_, last_spike_));
        if (!run.state.times.empty() && run.state.times.back() == t_) {
            run.state.states.back() = std::move(s);
            return;
        }
        run.state.times.push_back(t_);
        run.state.states.push_back(std::move(s));
    }

private:
    std::optional<double> first_crossing(double a, double b) const {
        if (margin(a) >= 0.0) return a;
        double lo = a;
        while (lo < b) {
            const double hi = std::min(b, lo + scan_step_);
            if (margin(hi) >= 0.0) {
                double l = lo, h = hi;
                for (int k = 0; k < 200 && h - l > 1e-16; ++k) {
                    const double m = 0.5 * (l + h);
                    if (margin(m) >= 0.0) h = m;
                    else l = m;
                }
                return h;
            }
            lo = hi;
        }
        return std::nullopt;
    }

    const NeuronConfig& cfg_;
    std::vector<double> I_;
    std::vector<double> couplings_;
    double t_;
    double last_spike_ = neg_inf;
    double scan_step_;
};

std::vector<std::vector<double>> filtered_inputs(const NeuronConfig& config,
                                                 const std::vector<SpikeTrain>& inputs,
                                                 std::pair<double, double> t_span,
                                                 std::vector<std::size_t>* dropped) {
    if (inputs.size() != config.synapses.size()) throw ConfigError("input/synapse arity mismatch");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        std::vector<double> in_span;
        for (double t : inputs[i].times)
            if (t >= t_span.first && t <= t_span.second) in_span.push_back(t);
        auto acc = accepted_spikes(in_span, config.synapses[i].dead_time);
        if (dropped) dropped->push_back(in_span.size() - acc.size());
        out.push_back(std::move(acc));
    }
    return out;
}

}  // namespace

NeuronRun run_neuron(const NeuronConfig& config, const std::vector<SpikeTrain>& inputs,
                     std::pair<double, double> t_span) {
    config.validate();
    if (!(t_span.second > t_span.first)) throw ConfigError("t_span must be increasing");
    NeuronRun run;
    const auto accepted = filtered_inputs(config, inputs, t_span, &run.dropped_inputs);

    std::vector<Event> events;
    for (std::size_t i = 0; i < accepted.size(); ++i)
        for (double t : accepted[i]) events.push_back({t, i});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        return a.t < b.t || (a.t == b.t && a.synapse < b.synapse);
    });

    EventNeuron n(config, t_span.first);
    n.record(run);
    for (const auto& ev : events) {
        n.fire_until(ev.t, run);
        n.advance(ev.t);
        n.kick(ev.synapse);
        n.record(run);
    }
    n.fire_until(t_span.second, run);
    n.advance(t_span.second);
    n.record(run);
    return run;
}

SpikeTrain run_neuron_fixed_step(const NeuronConfig& config, const std::vector<SpikeTrain>& inputs,
                                 std::pair<double, double> t_span, double dt) {
    config.validate();
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    const auto accepted = filtered_inputs(config, inputs, t_span, nullptr);
    const std::size_t n = config.synapses.size();
    const auto steps = static_cast<std::size_t>(std::llround((t_span.second - t_span.first) / dt));

    std::vector<std::vector<std::size_t>> kicks_at;  // per synapse, grid indices
    for (const auto& acc : accepted) {
        std::vector<std::size_t> idx;
        for (double t : acc) idx.push_back(static_cast<std::size_t>(std::llround((t - t_span.first) / dt)));
        kicks_at.push_back(std::move(idx));
    }
    std::vector<std::size_t> next(n, 0);

    std::vector<double> I(n, 0.0);
    std::vector<double> c;
    for (const auto& s : config.synapses) c.push_back(s.c);
    SpikeTrain out;
    double last = neg_inf;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = t_span.first + static_cast<double>(k) * dt;
        for (std::size_t i = 0; i < n; ++i)
            while (next[i] < kicks_at[i].size() && kicks_at[i][next[i]] == k) {
                I[i] += config.synapses[i].jump();
                ++next[i];
            }
        if (t - last >= config.lockout() * (1.0 - 1e-12) && ni_current(I, c) >= config.threshold_at(t, last)) {
            out.times.push_back(t);
            last = t;
        }
        // Classical RK4 on dI/dt = -I/tau.
        for (std::size_t i = 0; i < n; ++i) {
            const double r = -1.0 / config.synapses[i].tau_si;
            const double k1 = r * I[i];
            const double k2 = r * (I[i] + 0.5 * dt * k1);
            const double k3 = r * (I[i] + 0.5 * dt * k2);
            const double k4 = r * (I[i] + dt * k3);
            I[i] += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    }
    return out;
}

SpikeTrain parse_spike_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool header = false;
    SpikeTrain out;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "t_seconds") throw ConfigError("spike CSV must start with a t_seconds header");
            header = true;
            continue;
        }
        std::size_t pos = 0;
        double t = 0.0;
        try {
            t = std::stod(line, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos == 0 || line.find_first_not_of(" \t", pos) != std::string::npos)
            throw ConfigError("spike CSV line " + std::to_string(lineno) + ": not a number");
        if (!out.times.empty() && t <= out.times.back())
            throw ConfigError("spike CSV line " + std::to_string(lineno) + ": times must increase");
        out.times.push_back(t);
    }
    if (!header) throw ConfigError("spike CSV must start with a t_seconds header");
    return out;
}

std::string format_spike_csv(const SpikeTrain& train) {
    std::ostringstream out;
    out << "t_seconds\n" << std::setprecision(17);
    for (double t : train.times) out << t << '\n';
    return out.str();
}

}  // namespace soen::neuron
