#pragma once

#include <stdexcept>

namespace hc3 {

// Base class for solver and oracle failures. Input validation problems
// (bad parameters, malformed grids) throw std::invalid_argument instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A field entry is non-finite or non-positive.
struct NonFiniteInput : Error {
    using Error::Error;
};

// A guaranteed sign change was not found on the search interval.
struct BracketFailure : Error {
    using Error::Error;
};

// A root that must polish to full residual accuracy failed to do so.
struct ConvergenceFailure : Error {
    using Error::Error;
};

// The requested (graph, k) combination has no such computation.
struct UnsupportedCase : Error {
    using Error::Error;
};

// Full enumeration was requested beyond the exhaustive-size limit.
struct TooLarge : Error {
    using Error::Error;
};

// No admissible configuration exists, so the measure cannot be normalized.
struct EmptySupport : Error {
    using Error::Error;
};

}  // namespace hc3
