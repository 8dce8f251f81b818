#include "mva/models.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>

namespace mva {

// ---------------------------------------------------------------------------
// Sphere

SphereModel::SphereModel(int ambient_dim)
    : Manifold("sphere" + std::to_string(ambient_dim - 1), ambient_dim - 1, ambient_dim, 1.0) {
  if (ambient_dim < 2) throw DimensionMismatch("SphereModel: ambient dimension must be >= 2");
}

Vec SphereModel::project(const Vec& x) const {
  if (x.size() != ambient_dim()) throw DimensionMismatch("sphere project: wrong dimension");
  const double norm = x.norm();
  if (norm < 1e-12)
    throw OutsideTubularNeighborhood("sphere project: point at the center has no nearest point");
  return x / norm;
}

double SphereModel::distance_to(const Vec& x) const { return std::abs(x.norm() - 1.0); }

TangentBasis SphereModel::tangent_basis(const Vec& m) const {
  if (!contains(m)) throw PointNotOnManifold("sphere tangent_basis: point not on sphere");
  return TangentBasis{m, householder_frame(m / m.norm())};
}

bool SphereModel::contains(const Vec& x, double tol) const {
  if (x.size() != ambient_dim()) return false;
  return std::abs(x.norm() - 1.0) <= tol * std::max(1.0, x.norm());
}

Vec SphereModel::random_point(std::mt19937_64& rng) const { return random_unit(ambient_dim(), rng); }

ShapeOperator SphereModel::shape_operator(const Vec& m, const Vec& normal) const {
  TangentBasis frame = checked_shape_operator_inputs(m, normal);
  const double c = normal.dot(m) / m.squaredNorm();
  ShapeOperator op{std::move(frame), normal, -c * Mat::Identity(dim(), dim())};
  return op;
}

Mat sphere_dprojection(const Vec& x) {
  const double norm = x.norm();
  if (norm < 1e-12)
    throw OutsideTubularNeighborhood("sphere_dprojection: undefined at the center");
  const Vec u = x / norm;
  return (Mat::Identity(x.size(), x.size()) - u * u.transpose()) / norm;
}

Vec sphere_parallel_transport(const Vec& m, const Vec& t, const Vec& y, double s) {
  if (m.size() != t.size() || m.size() != y.size())
    throw DimensionMismatch("sphere_parallel_transport: size mismatch");
  if (std::abs(m.norm() - 1.0) > 1e-10) throw NotUnit("sphere_parallel_transport: m not unit");
  if (std::abs(t.norm() - 1.0) > 1e-10) throw NotUnit("sphere_parallel_transport: t not unit");
  if (std::abs(m.dot(t)) > 1e-10) throw NotTangent("sphere_parallel_transport: t not tangent at m");
  // Decompose y in span{m}, span{t} and the fixed complement; the first two
  // rotate with the geodesic gamma(s) = m cos s + t sin s, the rest is constant.
  const double alpha = y.dot(m);
  const double beta = y.dot(t);
  const Vec w = y - alpha * m - beta * t;
  const Vec gamma = m * std::cos(s) + t * std::sin(s);
  const Vec gamma_dot = -m * std::sin(s) + t * std::cos(s);
  return alpha * gamma + beta * gamma_dot + w;
}

// ---------------------------------------------------------------------------
// Circle

CircleModel::CircleModel(double radius)
    : Manifold("circle", 1, 2, radius), radius_(radius) {
  if (!(radius > 0.0)) throw Error("CircleModel: radius must be positive");
}

Vec CircleModel::project(const Vec& x) const {
  if (x.size() != 2) throw DimensionMismatch("circle project: wrong dimension");
  const double norm = x.norm();
  if (norm < 1e-12 * radius_)
    throw OutsideTubularNeighborhood("circle project: point at the center has no nearest point");
  return (radius_ / norm) * x;
}

double CircleModel::distance_to(const Vec& x) const { return std::abs(x.norm() - radius_); }

TangentBasis CircleModel::tangent_basis(const Vec& m) const {
  if (!contains(m)) throw PointNotOnManifold("circle tangent_basis: point not on circle");
  Mat t(2, 1);
  t(0, 0) = -m[1] / m.norm();
  t(1, 0) = m[0] / m.norm();
  return TangentBasis{m, t};
}

bool CircleModel::contains(const Vec& x, double tol) const {
  if (x.size() != 2) return false;
  return std::abs(x.norm() - radius_) <= tol * std::max(1.0, x.norm());
}

Vec CircleModel::random_point(std::mt19937_64& rng) const { return radius_ * random_unit(2, rng); }

ShapeOperator CircleModel::shape_operator(const Vec& m, const Vec& normal) const {
  TangentBasis frame = checked_shape_operator_inputs(m, normal);
  const double c = normal.dot(m) / m.norm();  // signed length along the outward unit normal
  Mat b(1, 1);
  b(0, 0) = -c / radius_;
  ShapeOperator op{std::move(frame), normal, b};
  return op;
}

// ---------------------------------------------------------------------------
// Projective plane

ProjectiveModel::ProjectiveModel() : Manifold("rp2", 2, 9, 1.0 / std::sqrt(2.0)) {}

namespace {

Eigen::Matrix3d symmetric_part(const Vec& x) {
  const Eigen::Matrix3d a = unflatten_rm(x);
  return 0.5 * (a + a.transpose());
}

}  // namespace

Vec ProjectiveModel::project(const Vec& x) const {
  if (x.size() != 9) throw DimensionMismatch("rp2 project: wrong dimension");
  // Minimizing |A - u u^T|_F^2 over unit u maximizes u^T sym(A) u, so the
  // minimizer is the leading eigenvector; skew parts of A never matter.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(symmetric_part(x));
  const Eigen::Vector3d evals = es.eigenvalues();  // ascending
  if (evals[2] - evals[1] < 1e-10)
    throw DegenerateSpectrum("rp2 project: leading eigenvalue is not simple");
  const Eigen::Vector3d u = es.eigenvectors().col(2);
  return flatten_rm(u * u.transpose());
}

double ProjectiveModel::distance_to(const Vec& x) const {
  if (x.size() != 9) throw DimensionMismatch("rp2 distance: wrong dimension");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(symmetric_part(x), Eigen::EigenvaluesOnly);
  const double lead = es.eigenvalues().maxCoeff();
  // |A - u u^T|^2 = |A|^2 - 2 u^T sym(A) u + 1, valid even when the leading
  // eigenvalue is degenerate (any maximizing u attains the same distance).
  const double sq = x.squaredNorm() - 2.0 * lead + 1.0;
  return std::sqrt(std::max(0.0, sq));
}

Eigen::Vector3d ProjectiveModel::axis_of(const Vec& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(symmetric_part(m));
  Eigen::Vector3d u = es.eigenvectors().col(2);
  for (int i = 0; i < 3; ++i) {
    if (std::abs(u[i]) > 1e-6) {
      if (u[i] < 0) u = -u;
      break;
    }
  }
  return u;
}

TangentBasis ProjectiveModel::tangent_basis(const Vec& m) const {
  if (!contains(m)) throw PointNotOnManifold("rp2 tangent_basis: point not on manifold");
  const Eigen::Vector3d x = axis_of(m);
  const Mat frame3 = householder_frame(Vec(x));
  Mat vectors(9, 2);
  for (int j = 0; j < 2; ++j) {
    const Eigen::Vector3d u = frame3.col(j);
    vectors.col(j) = flatten_rm((u * x.transpose() + x * u.transpose()) / std::sqrt(2.0));
  }
  return TangentBasis{m, vectors};
}

bool ProjectiveModel::contains(const Vec& x, double tol) const {
  if (x.size() != 9) return false;
  const Eigen::Matrix3d a = unflatten_rm(x);
  const double scale = std::max(1.0, x.norm());
  const double sym_resid = (a - a.transpose()).cwiseAbs().maxCoeff();
  const double idem_resid = (a * a - a).cwiseAbs().maxCoeff();
  const double trace_resid = std::abs(a.trace() - 1.0);
  return sym_resid <= tol * scale && idem_resid <= tol * scale && trace_resid <= tol * scale;
}

Vec ProjectiveModel::random_point(std::mt19937_64& rng) const {
  const Vec u = random_unit(3, rng);
  return rp2_embed(Eigen::Vector3d(u));
}

Vec rp2_embed(const Eigen::Vector3d& x) {
  if (std::abs(x.norm() - 1.0) > 1e-10) throw NotUnit("rp2_embed: direction not unit");
  return flatten_rm(x * x.transpose());
}

// ---------------------------------------------------------------------------
// Rotations

RotationModel::RotationModel() : Manifold("so3", 3, 9, std::nullopt) {}
RotationModel::RotationModel(std::string name) : Manifold(std::move(name), 3, 9, std::nullopt) {}

Eigen::Matrix3d so3_project(const Eigen::Matrix3d& a) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()[2] < 1e-10)
    throw RankDeficient("so3_project: smallest singular value below 1e-10");
  const Eigen::Matrix3d uv = svd.matrixU() * svd.matrixV().transpose();
  Eigen::Vector3d d(1.0, 1.0, uv.determinant() >= 0 ? 1.0 : -1.0);
  return svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();
}

Vec RotationModel::project(const Vec& x) const {
  if (x.size() != 9) throw DimensionMismatch("so3 project: wrong dimension");
  return flatten_rm(so3_project(unflatten_rm(x)));
}

double RotationModel::distance_to(const Vec& x) const {
  if (x.size() != 9) throw DimensionMismatch("so3 distance: wrong dimension");
  const Eigen::Matrix3d a = unflatten_rm(x);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  const double sign = (svd.matrixU() * svd.matrixV().transpose()).determinant() >= 0 ? 1.0 : -1.0;
  const double sq = a.squaredNorm() - 2.0 * (s[0] + s[1] + sign * s[2]) + 3.0;
  return std::sqrt(std::max(0.0, sq));
}

TangentBasis RotationModel::tangent_basis(const Vec& m) const {
  if (!contains(m)) throw PointNotOnManifold("so3 tangent_basis: point not a rotation");
  const Eigen::Matrix3d r = unflatten_rm(m);
  Mat vectors(9, 3);
  const auto& basis = skew_basis();
  for (int j = 0; j < 3; ++j) vectors.col(j) = flatten_rm(r * basis[j]) / std::sqrt(2.0);
  return TangentBasis{m, vectors};
}

bool RotationModel::contains(const Vec& x, double tol) const {
  if (x.size() != 9) return false;
  const Eigen::Matrix3d r = unflatten_rm(x);
  const double scale = std::max(1.0, x.norm());
  const double ortho_resid = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return ortho_resid <= tol * scale && r.determinant() > 0;
}

Vec RotationModel::random_point(std::mt19937_64& rng) const {
  // Uniform rotation from a uniform unit quaternion.
  const Vec q = random_unit(4, rng);
  Eigen::Quaterniond quat(q[0], q[1], q[2], q[3]);
  return flatten_rm(quat.toRotationMatrix());
}

QuotientRotationModel::QuotientRotationModel(const std::string& symmetry_name)
    : RotationModel("so3/" + symmetry_name), symmetry_(symmetry_group(symmetry_name)) {}

Eigen::Matrix3d QuotientRotationModel::representative(const Eigen::Matrix3d& r,
                                                      const Eigen::Matrix3d& anchor) const {
  return quotient_representative(r, symmetry_, anchor);
}

// ---------------------------------------------------------------------------

std::shared_ptr<const Manifold> make_model(const std::string& name) {
  if (name == "sphere2" || name == "sphere") return std::make_shared<SphereModel>(3);
  if (name == "rp2") return std::make_shared<ProjectiveModel>();
  if (name == "so3") return std::make_shared<RotationModel>();
  if (name == "circle") return std::make_shared<CircleModel>(1.0);
  if (name.rfind("circle:", 0) == 0) {
    const std::string spec = name.substr(7);
    char* end = nullptr;
    errno = 0;
    const double radius = std::strtod(spec.c_str(), &end);
    if (spec.empty() || end != spec.c_str() + spec.size() || errno == ERANGE ||
        !std::isfinite(radius) || radius <= 0.0)
      throw Error("make_model: bad circle radius '" + spec + "'");
    return std::make_shared<CircleModel>(radius);
  }
  throw Error("make_model: unknown model '" + name + "'");
}

}  // namespace mva
