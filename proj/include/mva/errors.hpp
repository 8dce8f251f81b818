#pragma once

#include <stdexcept>
#include <string>

namespace mva {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The query point has no well-defined nearest manifold point (distance to the
/// medial axis is zero, or the point is farther from the manifold than the
/// reach allows).
struct OutsideTubularNeighborhood : Error {
  using Error::Error;
};

/// The leading eigenvalue of the quadratic form that defines a projection is
/// not simple, so the minimizer is not unique.
struct DegenerateSpectrum : OutsideTubularNeighborhood {
  using OutsideTubularNeighborhood::OutsideTubularNeighborhood;
};

/// A matrix that must be invertible for the projection to be well defined is
/// numerically rank deficient.
struct RankDeficient : OutsideTubularNeighborhood {
  using OutsideTubularNeighborhood::OutsideTubularNeighborhood;
};

/// An iterative scheme failed to reach its convergence tolerance within the
/// iteration budget.
struct NonConvergence : Error {
  using Error::Error;
};

/// An argument that must lie on the manifold does not.
struct PointNotOnManifold : Error {
  using Error::Error;
};

/// An argument that must lie in the normal space at the base point has a
/// tangential component beyond tolerance.
struct NotANormalVector : Error {
  using Error::Error;
};

/// A linear operator that must be inverted is singular to working precision.
struct SingularOperator : Error {
  using Error::Error;
};

/// A vector required to have unit norm deviates beyond tolerance.
struct NotUnit : Error {
  using Error::Error;
};

/// A vector required to lie in a tangent space does not.
struct NotTangent : Error {
  using Error::Error;
};

/// Too few samples to perform the requested estimate.
struct InsufficientSamples : Error {
  using Error::Error;
};

/// Array or vector sizes are inconsistent with the operation.
struct DimensionMismatch : Error {
  using Error::Error;
};

/// The approximation error budget passed to a bound is not smaller than the
/// reach, so the bound's hypothesis fails.
struct EpsilonExceedsReach : Error {
  using Error::Error;
};

/// A grid operation requires at least one valid (unmasked) cell.
struct AllMasked : Error {
  using Error::Error;
};

/// A CSV row cannot be parsed into the expected fields.
struct MalformedRow : Error {
  using Error::Error;
};

/// CSV rows do not form a complete rectangular grid.
struct NonRectangular : Error {
  using Error::Error;
};

/// A stencil neighbor required by a finite difference is masked or absent.
struct MaskedNeighbor : Error {
  using Error::Error;
};

/// The relative rotation is a half turn up to tolerance, so its logarithm has
/// no preferred sign.
struct AmbiguousLog : Error {
  using Error::Error;
};

/// The embedding differential is too ill-conditioned to pull a gradient back.
struct IllConditionedPullback : Error {
  using Error::Error;
};

/// Projecting a smoothed cell matrix back onto the rotation group failed
/// because the matrix is numerically rank deficient.
struct ProjectionFailed : Error {
  using Error::Error;
};

}  // namespace mva
