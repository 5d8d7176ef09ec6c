#pragma once

#include <stdexcept>
#include <string>

namespace ppgof {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pattern construction / geometry
struct DuplicatePoint : Error { using Error::Error; };
struct OutOfWindow : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct EmptyPattern : Error { using Error::Error; };
struct InvalidArgs : Error { using Error::Error; };

// simulators
struct InvalidSpec : Error { using Error::Error; };
struct SSIFailure : Error { using Error::Error; };

// summary estimators
struct BandwidthNonpositive : Error { using Error::Error; };
struct NoValidTestLocations : Error { using Error::Error; };

// test statistics
struct TooFewSimulations : Error { using Error::Error; };
struct IndexOutOfGrid : Error { using Error::Error; };

// orderings
struct MixedTags : Error { using Error::Error; };

// procedures
struct AlphaTooSmall : Error { using Error::Error; };
struct InsufficientSimulations : Error { using Error::Error; };
struct MixedDirections : Error { using Error::Error; };
struct MismatchedShapes : Error { using Error::Error; };
struct EstimatorFailure : Error { using Error::Error; };

// cli / io
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace ppgof
