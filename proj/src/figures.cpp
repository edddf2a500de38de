#include "soen/figures.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "soen/chain.hpp"
#include "soen/error.hpp"

namespace soen::figures {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

const std::vector<double> capacitances_fF = {1.0, 10.0, 100.0};
const std::vector<double> quantum_efficiencies = {1e-3, 1e-2, 1e-1};

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
    std::vector<double> out;
    for (int k = 0; k <= n; ++k) out.push_back(lo * std::pow(10.0, static_cast<double>(k) / per_decade));
    return out;
}

// Cartesian product (first axis outermost). Axes are in display units;
// `compute` gets SI values (display / scale) and returns the output cells.
sweep::ResultTable tabulate(const std::string& id, const config::RunConfig& base,
                            const std::vector<std::string>& axis_columns,
                            const std::vector<std::vector<double>>& axes,
                            const std::vector<double>& axis_scale,
                            const std::vector<std::string>& output_columns,
                            const std::function<std::vector<double>(const std::vector<double>&)>& compute,
                            unsigned jobs) {
    std::size_t total = 1;
    for (const auto& a : axes) total *= a.size();

    sweep::ResultTable table;
    table.title = id;
    table.config_hash = config::hash_hex(config::config_hash(base));
    table.columns = axis_columns;
    table.columns.insert(table.columns.end(), output_columns.begin(), output_columns.end());
    table.rows.assign(total, {});
    table.errors.assign(total, "");

    sweep::parallel_for(total, jobs, [&](std::size_t index) {
        std::vector<double> point(axes.size());
        std::size_t rem = index;
        for (std::size_t a = axes.size(); a-- > 0;) {
            point[a] = axes[a][rem % axes[a].size()];
            rem /= axes[a].size();
        }
        std::vector<double> row = point;
        for (std::size_t a = 0; a < point.size(); ++a) point[a] /= axis_scale[a];
        try {
            const auto cells = compute(point);
            row.insert(row.end(), cells.begin(), cells.end());
        } catch (const std::exception& e) {
            row.resize(point.size() + output_columns.size(), nan);
            table.errors[index] = e.what();
        }
        table.rows[index] = std::move(row);
    });

    table.error_column = false;
    for (const auto& e : table.errors)
        if (!e.empty()) table.error_column = true;
    return table;
}

sweep::ResultTable fig4b(const config::RunConfig& base, unsigned jobs) {
    return tabulate("fig4b", base, {"t_on_ns", "C_fF", "eta_qe"},
                    {log_grid(0.1, 100.0, 10), capacitances_fF, quantum_efficiencies}, {1e9, 1e15, 1.0},
                    {"N_ph"},
                    [&](const std::vector<double>& p) {
                        auto cfg = base;
                        cfg.led_t_on = p[0];
                        cfg.diode.C = p[1];
                        cfg.diode.eta_qe = p[2];
                        return std::vector<double>{sweep::evaluate_target("led", cfg).at("N_ph")};
                    },
                    jobs);
}

sweep::ResultTable fig4c(const config::RunConfig& base, unsigned jobs) {
    std::vector<double> currents;
    for (int k = 1; k <= 10; ++k) currents.push_back(2.0 * k);
    return tabulate("fig4c", base, {"I_LED_uA", "C_fF"}, {currents, capacitances_fF}, {1e6, 1e15}, {"N_ph"},
                    [&](const std::vector<double>& p) {
                        auto cfg = base;
                        cfg.led_t_on = 10e-9;
                        cfg.diode.eta_qe = 0.01;
                        cfg.circuit.I_LED = p[0];
                        cfg.diode.C = p[1];
                        return std::vector<double>{sweep::evaluate_target("led", cfg).at("N_ph")};
                    },
                    jobs);
}

sweep::ResultTable fig6a(const config::RunConfig& base, unsigned jobs) {
    const std::vector<double> t_above = {2, 3, 5, 7, 10, 15, 20, 30, 40, 50};
    return tabulate("fig6a", base, {"t_above_ns"}, {t_above}, {1e9},
                    {"tau_nT_ns", "E_exp_fJ", "square_duration_ns", "E_square_fJ"},
                    [&](const std::vector<double>& p) {
                        auto cfg = base;
                        cfg.htron_t_target = p[0];
                        const auto r = sweep::evaluate_target("required_tau", cfg);
                        return std::vector<double>{r.at("tau_nT") * 1e9, r.at("E_exp") * 1e15,
                                                   r.at("square_duration") * 1e9, r.at("E_square") * 1e15};
                    },
                    jobs);
}

sweep::ResultTable fig6b(const config::RunConfig& base, unsigned jobs) {
    const std::vector<double> taus = {10, 20, 30, 50, 70, 100, 150, 200};
    return tabulate("fig6b", base, {"tau_nT_ns", "C_fF", "eta_qe"}, {taus, capacitances_fF, quantum_efficiencies},
                    {1e9, 1e15, 1.0}, {"N_ph", "t_on_ns"},
                    [&](const std::vector<double>& p) {
                        auto cfg = base;
                        cfg.ntron.L_nT = p[0] * cfg.ntron.r_load;
                        cfg.diode.C = p[1];
                        cfg.diode.eta_qe = p[2];
                        cfg.chain_square_on_time = 0.0;
                        const auto r = sweep::evaluate_target("chain", cfg);
                        return std::vector<double>{r.at("N_ph"), r.at("t_on") * 1e9};
                    },
                    jobs);
}

sweep::ResultTable fig7(const config::RunConfig& base, unsigned jobs) {
    const std::vector<double> targets = {1e2, 3e2, 1e3, 3e3, 1e4, 3e4, 1e5};
    return tabulate("fig7", base, {"N_target", "C_fF", "eta_qe"}, {targets, capacitances_fF, quantum_efficiencies},
                    {1.0, 1e15, 1.0},
                    {"N_ph", "t_on_ns", "tau_nT_ns", "eta_LED", "eta_hT", "eta_amp", "E_amp_J"},
                    [&](const std::vector<double>& p) {
                        auto cfg = base;
                        cfg.chain_N_target = p[0];
                        cfg.diode.C = p[1];
                        cfg.diode.eta_qe = p[2];
                        const auto r = sweep::evaluate_target("efficiency", cfg);
                        return std::vector<double>{r.at("N_ph"),   r.at("t_on") * 1e9, r.at("tau_nT") * 1e9,
                                                   r.at("eta_LED"), r.at("eta_hT"),     r.at("eta_amp"),
                                                   r.at("E_amp")};
                    },
                    jobs);
}

}  // namespace

const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"fig4b", "fig4c", "fig6a", "fig6b", "fig7"};
    return ids;
}

sweep::ResultTable figure_dataset(const std::string& id, const config::RunConfig& base, unsigned jobs) {
    base.validate();
    if (id == "fig4b") return fig4b(base, jobs);
    if (id == "fig4c") return fig4c(base, jobs);
    if (id == "fig6a") return fig6a(base, jobs);
    if (id == "fig6b") return fig6b(base, jobs);
    if (id == "fig7") return fig7(base, jobs);
    throw ConfigError("no such figure dataset: " + id);
}

double linear_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("slope needs two or more matched points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (!(sxx > 0.0)) throw ConfigError("slope undefined for constant x");
    return sxy / sxx;
}

}  // namespace soen::figures
