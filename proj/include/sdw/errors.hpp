#pragma once

#include <stdexcept>
#include <string>

namespace sdw {

// Invalid inputs: evaluation points inside a support, spikes without an
// outlier, colliding eigenvalues, non-unit vectors.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative solver did not reach its residual tolerance.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& msg, double last_residual)
        : std::runtime_error(msg), last_residual(last_residual) {}
    double last_residual;
};

// Malformed configuration / serialized documents.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// A Monte Carlo run produced no usable trials.
class ExperimentError : public std::runtime_error {
public:
    explicit ExperimentError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace sdw
