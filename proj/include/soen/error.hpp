#pragma once

#include <stdexcept>
#include <string>

namespace soen {

/// Invalid or inconsistent input (bad config value, violated precondition).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A simulation or solver that could not produce a result.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace soen
