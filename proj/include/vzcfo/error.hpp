#pragma once

#include <stdexcept>
#include <string>

namespace vz {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: config values, bounds, CLI flags. Maps to exit status 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

// Objective evaluation failed inside a CFO run.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, std::size_t probe, std::size_t step)
        : Error(what), probe_(probe), step_(step) {}
    std::size_t probe() const noexcept { return probe_; }
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t probe_;
    std::size_t step_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace vz
