#pragma once

#include <stdexcept>
#include <string>

namespace qpol {

// Bad run configuration (unknown option, invalid value). CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent input data (count files etc). CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpol
