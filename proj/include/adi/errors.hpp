#pragma once

#include <stdexcept>
#include <string>

namespace adi {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an invalid combination of inputs (bad grid, unknown
/// name, unsupported scheme/boundary pairing). Maps to a usage failure.
class UsageError : public Error {
public:
    using Error::Error;
};

/// The computation itself broke down (singular pivot, non-finite values).
class NumericalError : public Error {
public:
    using Error::Error;
};

class InvalidGridError : public UsageError { public: using UsageError::UsageError; };
class IncompatibleFieldsError : public UsageError { public: using UsageError::UsageError; };
class BoundaryClosureError : public UsageError { public: using UsageError::UsageError; };
class ShapeError : public UsageError { public: using UsageError::UsageError; };
class UnsupportedCombinationError : public UsageError { public: using UsageError::UsageError; };
class InvalidCoefficientsError : public UsageError { public: using UsageError::UsageError; };
class ConfigError : public UsageError { public: using UsageError::UsageError; };
class DomainError : public UsageError { public: using UsageError::UsageError; };

class SamplingError : public NumericalError { public: using NumericalError::NumericalError; };
class SingularMatrixError : public NumericalError {
public:
    SingularMatrixError(const std::string& what, std::size_t row)
        : NumericalError(what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

} // namespace adi
