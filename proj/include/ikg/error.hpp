#pragma once

#include <stdexcept>
#include <string>

namespace ikg {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, invalid manifest, unknown id.
/// Maps to CLI exit code 2.
struct InputError : Error {
    using Error::Error;
};

/// Numerical failure: singular metric or Jacobian, domain violation,
/// no convergence. Maps to CLI exit code 3.
struct NumericError : Error {
    using Error::Error;
};

}  // namespace ikg
