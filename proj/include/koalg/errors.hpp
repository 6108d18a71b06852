#ifndef KOALG_ERRORS_HPP
#define KOALG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace koalg {

// Base class for all library errors. The CLI maps anything derived from
// Error to exit code 1 with an "error:" prefixed message.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value failed a structural or domain invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Non-deterministic and probabilistic choices cannot be combined.
struct MixedChoiceError : Error {
    using Error::Error;
};

// Two processes were combined that must share one choice functor.
struct KindMismatchError : Error {
    using Error::Error;
};

// Two processes were summed over distinct input spaces.
struct InputMismatchError : Error {
    using Error::Error;
};

// A process does not have the space structure an operation requires.
struct ShapeError : Error {
    using Error::Error;
};

// A value lies outside a declared space.
struct MembershipError : Error {
    using Error::Error;
};

// Tree unfolding requires a finite, enumerated input space.
struct InputNotEnumerableError : Error {
    using Error::Error;
};

// A rollout hit a non-deterministic choice under the `error` policy.
struct NDetUnresolvedError : Error {
    using Error::Error;
};

// `evaluate` was applied to a non-deterministic tree.
struct NDetOutcomeError : Error {
    using Error::Error;
};

// The number of non-deterministic resolutions exceeded the cap.
struct ResolutionExplosionError : Error {
    using Error::Error;
};

// An enumeration (strategy modifications, tree nodes) exceeded its cap.
struct ExplosionError : Error {
    using Error::Error;
};

// Malformed game description input.
struct ParseError : Error {
    using Error::Error;
};

// A numeric parameter violated its constraints.
struct ParamError : Error {
    using Error::Error;
};

// Unknown built-in strategy name.
struct UnknownStrategyError : Error {
    using Error::Error;
};

// A construction request exceeded a hard size limit.
struct SizeError : Error {
    using Error::Error;
};

}  // namespace koalg

#endif  // KOALG_ERRORS_HPP
