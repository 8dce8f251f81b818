#pragma once

#include <memory>

#include "mva/manifold.hpp"
#include "mva/symmetry.hpp"

namespace mva {

/// Unit sphere S^{d-1} in R^d. Reach 1.
class SphereModel final : public Manifold {
 public:
  explicit SphereModel(int ambient_dim);

  Vec project(const Vec& x) const override;
  double distance_to(const Vec& x) const override;
  TangentBasis tangent_basis(const Vec& m) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec random_point(std::mt19937_64& rng) const override;
  /// Closed form: for normal = c*m, the operator is -c * I on the tangent space.
  ShapeOperator shape_operator(const Vec& m, const Vec& normal) const override;
};

/// Closed form for the differential of the sphere projection away from the
/// origin: (I - u u^T)/|x| with u = x/|x|.
Mat sphere_dprojection(const Vec& x);

/// Parallel transport on the unit sphere along the geodesic through m with
/// initial unit tangent t: returns the value at arclength s of the parallel
/// field with Y(0) = y. y may have components along m, t, and their
/// complement; each block transports in closed form.
Vec sphere_parallel_transport(const Vec& m, const Vec& t, const Vec& y, double s);

/// Circle of radius r in R^2. Reach r.
class CircleModel final : public Manifold {
 public:
  explicit CircleModel(double radius);

  double radius() const { return radius_; }
  Vec project(const Vec& x) const override;
  double distance_to(const Vec& x) const override;
  TangentBasis tangent_basis(const Vec& m) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec random_point(std::mt19937_64& rng) const override;
  ShapeOperator shape_operator(const Vec& m, const Vec& normal) const override;

 private:
  double radius_;
};

/// Real projective plane embedded in R^9 as rank-one orthogonal projectors
/// x x^T (row-major flattened). Reach 1/sqrt(2).
class ProjectiveModel final : public Manifold {
 public:
  ProjectiveModel();

  Vec project(const Vec& x) const override;
  double distance_to(const Vec& x) const override;
  TangentBasis tangent_basis(const Vec& m) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec random_point(std::mt19937_64& rng) const override;

  /// Representative axis of an embedded point: the unit eigenvector of the
  /// symmetric part with leading eigenvalue, sign-fixed so the first
  /// component of magnitude > 1e-6 is positive.
  static Eigen::Vector3d axis_of(const Vec& m);
};

/// Embed a line through the origin, given by a unit direction, into R^9.
Vec rp2_embed(const Eigen::Vector3d& x);

/// Rotation group SO(3) embedded in R^9 (row-major flattening). No exact
/// reach is published for it, so reach() is empty and estimators report a
/// sampled value.
class RotationModel : public Manifold {
 public:
  RotationModel();

  Vec project(const Vec& x) const override;
  double distance_to(const Vec& x) const override;
  TangentBasis tangent_basis(const Vec& m) const override;
  bool contains(const Vec& x, double tol = kMembershipTol) const override;
  Vec random_point(std::mt19937_64& rng) const override;

 protected:
  RotationModel(std::string name);
};

/// Nearest rotation to a 3x3 matrix: the polar factor with a determinant
/// correction (U diag(1,1,det(UV^T)) V^T from the SVD). Throws RankDeficient
/// when the smallest singular value is below 1e-10.
Eigen::Matrix3d so3_project(const Eigen::Matrix3d& a);

/// SO(3) modulo a finite symmetry group. The embedded set coincides with
/// SO(3); cells of an orientation map are identified with their coset, and
/// quotient_representative selects the member used for embedding.
class QuotientRotationModel final : public RotationModel {
 public:
  explicit QuotientRotationModel(const std::string& symmetry_name);

  const SymmetryGroup& symmetry() const { return symmetry_; }

  /// Representative of the coset of r closest to anchor.
  Eigen::Matrix3d representative(const Eigen::Matrix3d& r, const Eigen::Matrix3d& anchor) const;

 private:
  SymmetryGroup symmetry_;
};

/// Shared-ownership factory for the model zoo by name: "sphere2" (S^2 in
/// R^3), "sphere" with explicit ambient dimension handled by callers, "rp2",
/// "so3", "circle" (unit radius), or "circle:R" for a specific positive
/// radius R. Throws Error for unknown names or an unparsable radius.
std::shared_ptr<const Manifold> make_model(const std::string& name);

}  // namespace mva
