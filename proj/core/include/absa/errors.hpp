#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy shared across the library. Every throw site uses one of
// these so callers can react to the failure kind rather than parse text.
namespace absa {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyDistribution : Error { using Error::Error; };
struct NonFiniteSample : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NonPositiveSigma : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct DegenerateVariance : Error { using Error::Error; };

struct InsufficientRuns : Error { using Error::Error; };
struct SimulationFailure : Error { using Error::Error; };
struct InvalidSpec : Error { using Error::Error; };
struct InvalidParams : Error { using Error::Error; };
struct UnknownParameter : Error { using Error::Error; };
struct UnknownOutput : Error { using Error::Error; };

struct InvalidDimensions : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

struct IoFailure : Error { using Error::Error; };
struct CorruptRecord : Error { using Error::Error; };
struct MissingPrerequisite : Error { using Error::Error; };

}  // namespace absa
