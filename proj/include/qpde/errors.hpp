#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qpde {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a physical relation (e.g. y outside [0, h]).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Mesh too coarse for the stencils, or inconsistent sizes.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Bit layout or dimension mismatch in the binary encoding.
class EncodingError : public Error {
public:
    using Error::Error;
};

/// Problem exceeds the enumeration / statevector limit.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (bad JSON, unknown key, violated invariant).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Numerical breakdown: singular pivot, non-finite objective, r_j singularity.
/// Carries the marching step when raised from inside the march.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, std::optional<int> step = std::nullopt)
        : Error(step ? "step " + std::to_string(*step) + ": " + what : what), step_(step) {}

    std::optional<int> step() const noexcept { return step_; }

private:
    std::optional<int> step_;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace qpde

namespace qpde {

/// File could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qpde
