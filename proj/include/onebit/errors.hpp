#pragma once

#include <stdexcept>
#include <string>

namespace onebit {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pivot fell below the elimination tolerance.
struct SingularMatrix : Error {
    using Error::Error;
};

// The two decision-boundary vectors are (numerically) parallel.
struct DegenerateBoundary : Error {
    using Error::Error;
};

// Exhaustive enumeration requested beyond the instance-size budget.
struct InstanceTooLarge : Error {
    using Error::Error;
};

// A scenario or solver configuration violates its invariants.
struct ConfigInvalid : Error {
    using Error::Error;
};

// Result files could not be written or read.
struct IoError : Error {
    using Error::Error;
};

}  // namespace onebit
