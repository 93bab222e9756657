#pragma once

#include <stdexcept>
#include <string>

namespace thermolen {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid state input (non-positive T or v, v below the excluded volume)
/// or a closed-form expression evaluated outside its validity domain.
struct DomainError : Error {
    using Error::Error;
};

/// Malformed model definition: bad gas constant, coefficient list of the
/// wrong length, unsupported truncation order, missing derivative data,
/// unknown configuration keys.
struct ConfigError : Error {
    using Error::Error;
};

/// Mechanical stability violated: (dp/dv)_T >= 0 somewhere on the
/// requested interval.  Carries a bracketing sub-interval around the
/// first located sign change.
struct StabilityError : Error {
    StabilityError(const std::string& what, double lo, double hi)
        : Error(what), v_lo(lo), v_hi(hi) {}
    double v_lo;
    double v_hi;
};

/// Metric too close to degenerate for the requested operation
/// (an eigenvalue at zero within tolerance, or a null vector passed
/// where a non-null one is required).
struct DegeneracyError : Error {
    using Error::Error;
};

/// Adaptive quadrature exhausted its subdivision depth without meeting
/// the requested tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

/// Closed-form isotherm length requested for a truncation order that has
/// no implemented closed form.
struct UnsupportedOrderError : Error {
    using Error::Error;
};

} // namespace thermolen
