#pragma once

#include <stdexcept>
#include <string>

namespace spdc {

// Bad or inconsistent configuration / chain state. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: evanescent input, non-convergence, out-of-range
// wavelength, detection failure. CLI exit code 3.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace spdc
