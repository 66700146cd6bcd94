#pragma once

#include <stdexcept>
#include <string>

namespace hypercone {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceFailure : Error { using Error::Error; };
struct OverflowRisk : Error { using Error::Error; };
struct NotSelfAdjoint : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct NotStrictlyHyperbolic : Error { using Error::Error; };
struct IllConditionedEigenbasis : Error { using Error::Error; };
struct BadEpsilon : Error { using Error::Error; };
struct StepOverflow : Error { using Error::Error; };
struct SingularSymmetrizer : Error { using Error::Error; };
struct EmptyRegion : Error { using Error::Error; };
struct DynamicRangeExceeded : Error { using Error::Error; };
struct ConditionUndetermined : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct PreconditionError : Error { using Error::Error; };

} // namespace hypercone
