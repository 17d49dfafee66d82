#pragma once

#include <stdexcept>
#include <string>

namespace hgeom {

/// Base class for all errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed argument: dimension mismatch, bad parameter range, rank deficiency.
struct InvalidInput : Error {
  using Error::Error;
};

/// A candidate basis does not span a homogeneous subgroup (non-isotropic horizontal span).
struct NotASubgroup : Error {
  using Error::Error;
};

/// The subgroup is valid but not an element of the intrinsic Grassmannian
/// handled by this library (no orthogonal complementary subgroup).
struct NotInGrassmannian : Error {
  using Error::Error;
};

/// Too few sample points to run an estimator.
struct InsufficientData : Error {
  using Error::Error;
};

/// Rejection sampler acceptance rate fell below its floor.
struct SamplingStarved : Error {
  using Error::Error;
};

}  // namespace hgeom
