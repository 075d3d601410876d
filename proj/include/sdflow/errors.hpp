#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sdflow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Degenerate or inadmissible boundary geometry (1 + h k_G <= 0, height bound
// violations, malformed reference-curve data).
struct GeometryError : Error {
    using Error::Error;
};

// Surface energy density fails the strong ellipticity floor at evaluation time.
struct EllipticityError : Error {
    using Error::Error;
};

// Mapped strip mesh collapsed (non-positive element Jacobian) or invalid mesh spec.
struct MeshError : Error {
    using Error::Error;
};

// Linear solver failure (singular or indefinite system).
struct SolveError : Error {
    using Error::Error;
};

// A time step produced an inadmissible height field; the stepper rejects it.
struct StepRejected : Error {
    StepRejected(const std::string& what, double time) : Error(what), time(time) {}
    double time;
};

// Picard iteration observed expanding iterate distances.
struct NonContraction : Error {
    NonContraction(const std::string& what, std::vector<double> rhos)
        : Error(what), rhos(std::move(rhos)) {}
    std::vector<double> rhos;
};

// Decay-rate fit fed a series at or below the round-off floor.
struct DegenerateFit : Error {
    using Error::Error;
};

struct ConfigError : Error {
    ConfigError(const std::string& what, std::vector<std::string> violations)
        : Error(what), violations(std::move(violations)) {}
    std::vector<std::string> violations;
};

}  // namespace sdflow
