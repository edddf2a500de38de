#pragma once

// Acceptance criteria 1-10 as named checks. Shared by `soen validate` and the
// acceptance test binary.

#include <functional>
#include <string>
#include <vector>

#include "soen/config.hpp"

namespace soen::acceptance {

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;

    [[nodiscard]] bool passed() const;
};

inline constexpr int criterion_count = 10;

/// Runs one criterion. Exceptions thrown while evaluating become failed checks.
Criterion run_criterion(int id, const config::RunConfig& base);

/// Runs 1..10 in order, calling `on_done` after each.
std::vector<Criterion> run_all(const config::RunConfig& base,
                               const std::function<void(const Criterion&)>& on_done = {});

/// One summary line, then one indented line per check.
std::string format(const Criterion& c);

}  // namespace soen::acceptance
