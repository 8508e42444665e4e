#pragma once

#include <stdexcept>
#include <string>

namespace objnav {

// Base for all library errors so callers can catch everything at once.
struct ObjnavError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A world point or cell index outside the owning grid frame.
struct OutOfBounds : ObjnavError {
  using ObjnavError::ObjnavError;
};

// A measurement that violates its contract (zero point count, non-positive
// variance, non-unit query, ...).
struct InvalidObservation : ObjnavError {
  using ObjnavError::ObjnavError;
};

// Two grids that were required to share a frame do not.
struct FrameMismatch : ObjnavError {
  using ObjnavError::ObjnavError;
};

// A tour that is not a permutation of 1..n.
struct InvalidTour : ObjnavError {
  using ObjnavError::ObjnavError;
};

// Instance too large for the exact solver.
struct SizeExceeded : ObjnavError {
  using ObjnavError::ObjnavError;
};

// A sensor pose outside free space.
struct InvalidPose : ObjnavError {
  using ObjnavError::ObjnavError;
};

// Malformed or missing input data (scene files, suites, instances, traces).
struct DataError : ObjnavError {
  using ObjnavError::ObjnavError;
};

// An episode spec that cannot be run as stated.
struct SpecError : ObjnavError {
  using ObjnavError::ObjnavError;
};

}  // namespace objnav
