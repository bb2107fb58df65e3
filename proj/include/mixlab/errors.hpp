#ifndef MIXLAB_ERRORS_HPP
#define MIXLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct EmptyDataset : Error { using Error::Error; };
struct NonFiniteMoment : Error { using Error::Error; };
struct NotCentered : Error { using Error::Error; };
struct NotInTheta : Error { using Error::Error; };
struct ZeroInput : Error { using Error::Error; };
struct EulerIdentityViolated : Error { using Error::Error; };
struct InvalidRho : Error { using Error::Error; };
struct InvalidDelta : Error { using Error::Error; };
struct DegenerateData : Error { using Error::Error; };
struct InvalidCount : Error { using Error::Error; };
struct InvalidFraction : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct MalformedRow : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace mixlab

#endif
