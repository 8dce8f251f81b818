#include "mva/manifold.hpp"

#include <cmath>

namespace mva {

namespace {
constexpr double kShapeOperatorStep = 1e-5;
}

double Manifold::distance_to(const Vec& x) const { return (x - project(x)).norm(); }

TangentBasis Manifold::checked_shape_operator_inputs(const Vec& m, const Vec& normal) const {
  if (m.size() != ambient_dim() || normal.size() != ambient_dim())
    throw DimensionMismatch("shape_operator: wrong ambient dimension");
  if (!contains(m)) throw PointNotOnManifold("shape_operator: base point not on manifold");
  TangentBasis frame = tangent_basis(m);
  const double tangential = (frame.vectors.transpose() * normal).norm();
  if (tangential > 1e-8 * std::max(1.0, normal.norm()))
    throw NotANormalVector("shape_operator: direction has a tangential component");
  return frame;
}

ShapeOperator Manifold::shape_operator(const Vec& m, const Vec& normal) const {
  TangentBasis frame = checked_shape_operator_inputs(m, normal);
  const int dd = dim();
  const double h = kShapeOperatorStep;
  // B_n t_j = -P_T d/ds [ P_{N(gamma(s))} n ] at s=0 along gamma(s) = project(m + s t_j),
  // which has unit velocity t_j. The result does not depend on how n is
  // extended off the base point, so projecting the constant vector n onto the
  // moving normal space is a valid extension.
  Mat b(dd, dd);
  for (int j = 0; j < dd; ++j) {
    const Vec tj = frame.vectors.col(j);
    const Vec gp = project(m + h * tj);
    const Vec gm = project(m - h * tj);
    const TangentBasis fp = tangent_basis(gp);
    const TangentBasis fm = tangent_basis(gm);
    const Vec np = normal - fp.vectors * (fp.vectors.transpose() * normal);
    const Vec nm = normal - fm.vectors * (fm.vectors.transpose() * normal);
    const Vec dn = (np - nm) / (2.0 * h);
    b.col(j) = -(frame.vectors.transpose() * dn);
  }
  ShapeOperator op{std::move(frame), normal, 0.5 * (b + b.transpose())};
  return op;
}

Mat tangent_projector(const Manifold& model, const Vec& m) {
  const TangentBasis frame = model.tangent_basis(m);
  return frame.vectors * frame.vectors.transpose();
}

Mat normal_projector(const Manifold& model, const Vec& m) {
  return Mat::Identity(model.ambient_dim(), model.ambient_dim()) - tangent_projector(model, m);
}

double distance_to_manifold(const Manifold& model, const Vec& x) { return model.distance_to(x); }

Vec project_within_reach(const Manifold& model, const Vec& x) {
  if (model.reach() && model.distance_to(x) >= *model.reach())
    throw OutsideTubularNeighborhood("project_within_reach: point at distance >= reach");
  return model.project(x);
}

Vec random_normal_vector(const Manifold& model, const Vec& m, std::mt19937_64& rng) {
  const TangentBasis frame = model.tangent_basis(m);
  for (;;) {
    Vec g = random_gaussian(model.ambient_dim(), rng);
    Vec n = g - frame.vectors * (frame.vectors.transpose() * g);
    const double norm = n.norm();
    if (norm > 1e-8) return n / norm;
  }
}

Mat dprojection(const Manifold& model, const Vec& x) {
  const Vec m = model.project(x);
  const Vec v = x - m;
  const TangentBasis frame = model.tangent_basis(m);
  if (v.norm() < 1e-14)
    return frame.vectors * frame.vectors.transpose();
  const ShapeOperator op = model.shape_operator(m, v);
  const int dd = model.dim();
  const Mat a = Mat::Identity(dd, dd) - op.matrix;
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.eigenvalues().minCoeff() < 1e-6)
    throw SingularOperator("dprojection: I - B_v is singular to working precision");
  const Mat a_inv =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  return op.frame.vectors * a_inv * op.frame.vectors.transpose();
}

Mat dprojection_fd(const Manifold& model, const Vec& x, double h) {
  const int d = model.ambient_dim();
  if (x.size() != d) throw DimensionMismatch("dprojection_fd: wrong ambient dimension");
  Mat jac(d, d);
  for (int i = 0; i < d; ++i) {
    Vec xp = x;
    Vec xm = x;
    xp[i] += h;
    xm[i] -= h;
    jac.col(i) = (model.project(xp) - model.project(xm)) / (2.0 * h);
  }
  return jac;
}

}  // namespace mva
