#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>

#include "mva/errors.hpp"
#include "mva/linalg.hpp"

namespace mva {

/// Orthonormal basis of the tangent space at a point on an embedded manifold.
/// `vectors` is d x D with orthonormal columns; `base` lies on the manifold.
struct TangentBasis {
  Vec base;
  Mat vectors;

  int ambient_dim() const { return static_cast<int>(base.size()); }
  int intrinsic_dim() const { return static_cast<int>(vectors.cols()); }
};

/// Shape operator at `frame.base` in direction `normal`, expressed in the
/// coordinates of `frame`: matrix(i,j) = <B_n t_i, t_j>. Always symmetric.
struct ShapeOperator {
  TangentBasis frame;
  Vec normal;
  Mat matrix;
};

/// A smooth compact manifold isometrically embedded in R^d. Implementations
/// are immutable and safe to share across threads.
///
/// The metric projection (nearest-point map) is the central operation: it is
/// well defined on the open tube of radius reach() around the manifold, and
/// every differential-geometric quantity here is derived from it.
class Manifold {
 public:
  Manifold(std::string name, int intrinsic_dim, int ambient_dim, std::optional<double> reach)
      : name_(std::move(name)), dim_(intrinsic_dim), ambient_dim_(ambient_dim), reach_(reach) {}
  virtual ~Manifold() = default;

  const std::string& name() const { return name_; }
  /// Intrinsic dimension D.
  int dim() const { return dim_; }
  /// Ambient dimension d.
  int ambient_dim() const { return ambient_dim_; }
  /// Known reach of the embedded set, if the model ships one.
  std::optional<double> reach() const { return reach_; }

  /// Nearest manifold point to x in the Euclidean metric. Throws
  /// OutsideTubularNeighborhood (or a subclass) when the minimizer is not
  /// unique to working precision.
  virtual Vec project(const Vec& x) const = 0;

  /// Euclidean distance from x to the manifold. Defined for every x, even
  /// where the projection is ambiguous.
  virtual double distance_to(const Vec& x) const;

  /// Deterministic orthonormal tangent basis at an on-manifold point.
  /// Throws PointNotOnManifold if `m` fails the membership test.
  virtual TangentBasis tangent_basis(const Vec& m) const = 0;

  /// Membership predicate. `tol` is applied to the model's defining residual,
  /// relative to coordinate magnitude.
  virtual bool contains(const Vec& x, double tol = kMembershipTol) const = 0;

  /// Uniform-ish random point used by samplers and estimators.
  virtual Vec random_point(std::mt19937_64& rng) const = 0;

  /// Shape operator at m in normal direction `normal` (need not be unit).
  /// The base implementation differentiates a projected normal field through
  /// central differences; models with a closed form override it.
  ///
  /// Preconditions: m on the manifold; normal orthogonal to the tangent space
  /// at m within 1e-8 relative (else NotANormalVector).
  virtual ShapeOperator shape_operator(const Vec& m, const Vec& normal) const;

  static constexpr double kMembershipTol = 1e-10;

 protected:
  /// Shared precondition checks for shape_operator implementations.
  TangentBasis checked_shape_operator_inputs(const Vec& m, const Vec& normal) const;

 private:
  std::string name_;
  int dim_;
  int ambient_dim_;
  std::optional<double> reach_;
};

/// Orthogonal projector onto the tangent space at m (d x d, symmetric,
/// idempotent, rank D).
Mat tangent_projector(const Manifold& model, const Vec& m);

/// Orthogonal projector onto the normal space at m: I - tangent_projector.
Mat normal_projector(const Manifold& model, const Vec& m);

/// Euclidean distance from x to the manifold (model.distance_to).
double distance_to_manifold(const Manifold& model, const Vec& x);

/// Metric projection with a tube guard: when the model publishes a reach,
/// points at distance >= reach throw OutsideTubularNeighborhood instead of
/// returning a possibly non-unique nearest point. Models without a stated
/// reach project unconditionally (their own degeneracy errors still apply).
Vec project_within_reach(const Manifold& model, const Vec& x);

/// Unit normal vector at m drawn by projecting a Gaussian onto the normal
/// space and normalizing.
Vec random_normal_vector(const Manifold& model, const Vec& m, std::mt19937_64& rng);

/// Differential of the metric projection at a tube point x = m + v, assembled
/// from the shape operator: with B the shape operator at m = project(x) in
/// direction v, extended by zero on the normal space,
///     dP(x) = T (I - B)^{-1} T^T
/// in an orthonormal tangent frame T. At on-manifold points this reduces to
/// the tangent projector.
///
/// Throws SingularOperator when the smallest eigenvalue of I - B falls below
/// 1e-6, and propagates projection errors.
Mat dprojection(const Manifold& model, const Vec& x);

/// Reference differential of the projection by central differences with step
/// h per ambient coordinate. Kept deliberately independent of dprojection so
/// the two can cross-check each other.
Mat dprojection_fd(const Manifold& model, const Vec& x, double h = 1e-6);

}  // namespace mva
