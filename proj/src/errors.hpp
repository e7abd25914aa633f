#pragma once

#include <stdexcept>
#include <string>

namespace epifit {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments, malformed configuration, contract violations.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Input data that parses but is semantically invalid (gaps, decreasing
// cumulatives, zero observed values inside a fitting window, ...).
class DataError : public Error {
public:
    using Error::Error;
};

// A resource guard tripped (e.g. exhaustive scan over a grid larger than
// the configured enumeration limit).
class GuardError : public Error {
public:
    using Error::Error;
};

// A simulation produced or received a state violating model invariants.
// Carries the day index at which the step failed.
class SimulationError : public Error {
public:
    SimulationError(const std::string& what, int day)
        : Error(what + " (day " + std::to_string(day) + ")"), day_(day) {}

    int day() const noexcept { return day_; }

private:
    int day_;
};

} // namespace epifit
