#pragma once

#include <stdexcept>
#include <string>

namespace solvembed {

/// Base class of every domain error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what_arg) : std::runtime_error(what_arg) {}
};

#define SOLVEMBED_DEFINE_ERROR(NAME)                                          \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& what_arg) : Error(what_arg) {}       \
    };

// Data / format problems.
SOLVEMBED_DEFINE_ERROR(DimensionMismatch)
SOLVEMBED_DEFINE_ERROR(ParseError)
SOLVEMBED_DEFINE_ERROR(SchemaError)
SOLVEMBED_DEFINE_ERROR(UnknownName)

// Structural validation failures.
SOLVEMBED_DEFINE_ERROR(JacobiViolation)
SOLVEMBED_DEFINE_ERROR(NotSolvable)
SOLVEMBED_DEFINE_ERROR(NotSymmetric)
SOLVEMBED_DEFINE_ERROR(NotCommuting)
SOLVEMBED_DEFINE_ERROR(NoPositiveDerivation)
SOLVEMBED_DEFINE_ERROR(GradingIncompatible)
SOLVEMBED_DEFINE_ERROR(NotPositive)
SOLVEMBED_DEFINE_ERROR(NotDerivation)
SOLVEMBED_DEFINE_ERROR(ConditionsFailed)

// Linear-algebra / representation failures.
SOLVEMBED_DEFINE_ERROR(NotPositiveDefinite)
SOLVEMBED_DEFINE_ERROR(NotLowerTriangular)
SOLVEMBED_DEFINE_ERROR(NotFaithful)
SOLVEMBED_DEFINE_ERROR(NotBlockRespecting)

// Curvature / soliton failures.
SOLVEMBED_DEFINE_ERROR(NotSoliton)
SOLVEMBED_DEFINE_ERROR(Ambiguous)
SOLVEMBED_DEFINE_ERROR(ExtensionNotEinstein)

#undef SOLVEMBED_DEFINE_ERROR

/// Requested scale parameter lies below the feasibility threshold of the
/// construction.  Carries the certified minimum so callers can retry.
class ScaleTooSmall : public Error {
public:
    ScaleTooSmall(const std::string& what_arg, double min_feasible)
        : Error(what_arg), min_feasible_(min_feasible) {}

    double min_feasible() const noexcept { return min_feasible_; }

private:
    double min_feasible_;
};

}  // namespace solvembed
