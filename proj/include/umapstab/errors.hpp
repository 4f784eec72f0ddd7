#pragma once

#include <stdexcept>
#include <string>

namespace umapstab {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed inputs: dimension mismatches, unknown identifiers, inputs that
/// fail the ep-metric axioms where a valid metric is required.
struct StructuralError : Error {
    using Error::Error;
};

/// Out-of-range configuration values (k too large, nonpositive floor, ...).
struct ParameterError : Error {
    using Error::Error;
};

/// Inputs outside the mathematical domain of an operation (infinite ambient
/// distances in knn, zero denominators in compression factors, ...).
struct DomainError : Error {
    using Error::Error;
};

/// Combinatorial size guards tripped (complex enumeration past the cap).
struct ResourceError : Error {
    using Error::Error;
};

}  // namespace umapstab
