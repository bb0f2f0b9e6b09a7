#pragma once

// Exception hierarchy for the qpmaps library. Everything derives from
// qpmaps::Error (itself a std::runtime_error) so callers can catch the
// whole family at once. Errors that point at a specific row/column carry
// the offending index.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpmaps {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shapes of lambda, A, B (or C) do not fit together.
struct DimensionMismatch : Error {
    using Error::Error;
};

// A column of the coefficient matrix A is structurally zero; the
// corresponding quasimonomial never acts on the state.
struct ZeroColumnInA : Error {
    explicit ZeroColumnInA(std::size_t col)
        : Error("coefficient matrix has a structurally zero column at index " +
                std::to_string(col)),
          column(col) {}
    std::size_t column;
};

// A row of the exponent matrix B is structurally zero; the quasimonomial
// would be the constant 1.
struct ZeroRowInB : Error {
    explicit ZeroRowInB(std::size_t row)
        : Error("exponent matrix has a structurally zero row at index " +
                std::to_string(row)),
          row(row) {}
    std::size_t row;
};

// Two rows of B coincide; the same quasimonomial is listed twice.
struct DuplicateBRows : Error {
    DuplicateBRows(std::size_t i, std::size_t j)
        : Error("exponent matrix rows " + std::to_string(i) + " and " +
                std::to_string(j) + " are structurally equal"),
          first(i), second(j) {}
    std::size_t first;
    std::size_t second;
};

// A quasimonomial exponent B*u left the safe range for exp().
struct OverflowGuard : Error {
    OverflowGuard(std::size_t monomial, double exponent, double limit,
                  std::size_t time = 0)
        : Error("quasimonomial " + std::to_string(monomial) +
                " exponent " + std::to_string(exponent) +
                " exceeds guard " + std::to_string(limit) +
                " at step " + std::to_string(time)),
          monomial(monomial), exponent(exponent), limit(limit), time(time) {}
    std::size_t monomial;
    double exponent;
    double limit;
    std::size_t time;
};

// A state component became NaN/Inf during a step.
struct NonFiniteState : Error {
    explicit NonFiniteState(std::size_t component, std::size_t time = 0)
        : Error("state component " + std::to_string(component) +
                " is not finite at step " + std::to_string(time)),
          component(component), time(time) {}
    std::size_t component;
    std::size_t time;
};

// A caller-supplied value violates a documented precondition.
struct InvalidParameter : Error {
    using Error::Error;
};

// A matrix required to be invertible is singular (or, for floating-point
// input, too ill-conditioned to trust).
struct SingularMatrix : Error {
    using Error::Error;
};

// An operation only defined for particular state dimensions was called on
// a map of the wrong dimension.
struct WrongDimension : Error {
    using Error::Error;
};

// Row/column index outside the matrix.
struct IndexOutOfRange : Error {
    using Error::Error;
};

// An operation requires specific structural conditions that the map fails.
struct ConditionsNotMet : Error {
    explicit ConditionsNotMet(const std::string& what, std::string failed = "")
        : Error(what), failed_conditions(std::move(failed)) {}
    std::string failed_conditions;
};

// File-level problems while reading or writing maps/trajectories.
struct FileError : Error {
    using Error::Error;
};

// Malformed input file; carries a JSON-pointer-ish location when known.
struct ParseError : Error {
    ParseError(const std::string& what, std::string where = "")
        : Error(where.empty() ? what : what + " at " + where),
          location(std::move(where)) {}
    std::string location;
};

} // namespace qpmaps
