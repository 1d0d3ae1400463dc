#pragma once

#include <stdexcept>
#include <string>

namespace fairfs {

// Malformed or inconsistent input data (CSV, config, serialized files).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: non-finite values, diverging iterations, undefined metrics.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid combination of user-facing options.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fairfs
