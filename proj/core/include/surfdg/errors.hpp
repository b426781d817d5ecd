#pragma once

#include <stdexcept>
#include <string>

namespace surfdg {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Query point left the tube in which the signed distance function is valid.
struct OutOfTubeError : Error {
    using Error::Error;
};

/// An internal iteration (closest-point Newton, Krylov solver) failed to converge.
struct NoConvergenceError : Error {
    NoConvergenceError(const std::string& what, double residual)
        : Error(what), final_residual(residual) {}
    double final_residual;
};

/// Curved element map has a singular or inverted first fundamental form.
struct DegenerateJacobianError : Error {
    using Error::Error;
};

/// Local vector-space mass matrix is not positive definite.
struct SingularMassError : Error {
    using Error::Error;
};

/// Tangential lift system B = P_h(I-dH)P is too ill-conditioned to invert.
struct IllConditionedLiftError : Error {
    using Error::Error;
};

/// EOC input is unusable (mismatched lengths, nonpositive mesh sizes).
struct DegenerateInputError : Error {
    using Error::Error;
};

/// Config text could not be parsed.
struct ParseError : Error {
    ParseError(const std::string& what, int line_no)
        : Error(what + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    int line;
};

/// Config parsed but a field failed validation.
struct ValidationError : Error {
    ValidationError(const std::string& field_name, const std::string& what)
        : Error("invalid '" + field_name + "': " + what), field(field_name) {}
    std::string field;
};

/// Output file or directory could not be written.
struct IoError : Error {
    using Error::Error;
};

} // namespace surfdg
