#pragma once

#include <stdexcept>
#include <string>

namespace gfnoma {

// Error taxonomy mirrors the CLI exit codes: ConfigError -> 1,
// ConvergenceError -> 2, IoError -> 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gfnoma
