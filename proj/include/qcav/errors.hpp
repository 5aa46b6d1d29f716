#pragma once

#include <stdexcept>
#include <string>

namespace qcav {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hilbert-space description cannot be built (N = 0, cutoff 0, too many spins).
class InvalidSpaceError : public Error {
public:
    using Error::Error;
};

/// Operand shapes do not fit the requested operation.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Model container rejected (non-Hermitian H, negative rate, asymmetric damping).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Parameters are inconsistent with each other or out of range.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

/// Floating-point breakdown: norm collapse, step underflow, divergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Adaptive stepper could not make progress.
class StiffnessError : public NumericalError {
public:
    StiffnessError(const std::string& what, double time_reached)
        : NumericalError(what), time_reached_(time_reached) {}
    double time_reached() const noexcept { return time_reached_; }

private:
    double time_reached_;
};

/// Boson truncation too small for the requested state.
class CutoffError : public Error {
public:
    using Error::Error;
};

/// Exponential fit fell below the required R².
class FitQualityError : public NumericalError {
public:
    FitQualityError(const std::string& what, double r_squared)
        : NumericalError(what), r_squared_(r_squared) {}
    double r_squared() const noexcept { return r_squared_; }

private:
    double r_squared_;
};

/// Scene geometry violates a precondition (coincident points, near field).
class GeometryError : public Error {
public:
    using Error::Error;
};

}  // namespace qcav
