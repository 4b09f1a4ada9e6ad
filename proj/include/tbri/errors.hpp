#pragma once

#include <stdexcept>
#include <string>

namespace tbri {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimensions : Error {
    using Error::Error;
};

struct BasisTooLarge : Error {
    using Error::Error;
};

struct IndexOutOfRange : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ConvergenceFailure : Error {
    using Error::Error;
};

struct WindowTooShort : Error {
    using Error::Error;
};

struct InsufficientRange : Error {
    using Error::Error;
};

struct SaturationDominates : Error {
    using Error::Error;
};

struct QuadratureAccuracyLoss : Error {
    using Error::Error;
};

} // namespace tbri
