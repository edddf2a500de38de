#pragma once

// Parameter sweeps over a base RunConfig and the tables they produce.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "soen/config.hpp"

namespace soen::sweep {

struct ResultTable {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Per-row failure message ("" on success); emitted as a trailing column
    /// when error_column is set.
    std::vector<std::string> errors;
    bool error_column = true;
    std::string config_hash;
    std::string version = SOEN_VERSION;

    /// RFC 4180 style, preceded by one `# ...` provenance line.
    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::size_t column(const std::string& name) const;
};

struct Axis {
    std::string path;
    std::vector<double> values;  ///< SI
};

struct SweepSpec {
    std::string target;
    std::vector<Axis> axes;
    std::vector<std::pair<std::string, std::string>> fixed;  ///< path, "value unit"
    std::vector<std::string> outputs;
};

/// Lines: `target = <name>`, `outputs = a, b`, `axis <path> = v1, v2, ... unit`
/// (or `start:step:stop unit`), `set <path> = value unit`.
SweepSpec parse_spec(const std::string& text);

const std::vector<std::string>& targets();
const std::vector<std::string>& target_outputs(const std::string& target);

/// Runs one operation on a configuration; returns every output of the target.
std::map<std::string, double> evaluate_target(const std::string& target, const config::RunConfig& cfg);

/// Calls fn(i) for i in [0, n) on up to `jobs` threads (0 = all cores).
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

ResultTable run_sweep(const SweepSpec& spec, const config::RunConfig& base, unsigned jobs = 0);

}  // namespace soen::sweep
