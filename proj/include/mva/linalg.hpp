#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <random>

namespace mva {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Spectral norm (largest singular value) of a general matrix, computed as
/// sqrt(lambda_max(A^T A)) with a self-adjoint eigensolver.
double spectral_norm(const Mat& a);

/// Spectral norm of a symmetric matrix (largest absolute eigenvalue).
/// Cheaper and slightly more accurate than the general routine; the argument
/// is symmetrized internally so tiny asymmetries are harmless.
double spectral_norm_sym(const Mat& a);

/// Orthonormal completion of a unit vector: returns a d x (d-1) matrix whose
/// columns span the orthogonal complement of `unit`. Built from a Householder
/// reflection, so the result is a deterministic function of the input.
Mat householder_frame(const Vec& unit);

/// Row-major flattening of a 3x3 matrix into R^9 and its inverse.
Vec flatten_rm(const Eigen::Matrix3d& m);
Eigen::Matrix3d unflatten_rm(const Vec& v);

/// Cross-product matrix: skew(w) * v == w x v.
Eigen::Matrix3d skew(const Eigen::Vector3d& w);

/// The fixed orthogonal basis of the skew-symmetric 3x3 matrices used for
/// rotation tangent spaces. Each element has Frobenius norm sqrt(2). Note the
/// second element is the negative of the cross-product matrix of e2.
const std::array<Eigen::Matrix3d, 3>& skew_basis();

/// Coordinates of a skew-symmetric matrix in skew_basis(): c_i = <K, s_i>/2.
Eigen::Vector3d skew_basis_coords(const Eigen::Matrix3d& k);

/// Linear combination sum_i c_i * s_i of the skew basis.
Eigen::Matrix3d skew_basis_combine(const Eigen::Vector3d& c);

/// Rodrigues exponential of a skew-symmetric matrix.
Eigen::Matrix3d exp_skew(const Eigen::Matrix3d& k);

/// Principal logarithm of a rotation as a skew-symmetric matrix. Throws
/// AmbiguousLog when the rotation angle is within 1e-6 of a half turn.
Eigen::Matrix3d log_rotation(const Eigen::Matrix3d& r);

/// Rotation angle of a rotation matrix, in [0, pi].
double rotation_angle(const Eigen::Matrix3d& r);

/// Right Jacobian of the rotation exponential: for a curve t -> exp(skew(w(t))),
/// the body angular rate is right_jacobian(w) * dw/dt.
Eigen::Matrix3d so3_right_jacobian(const Eigen::Vector3d& w);

/// SplitMix64 step, used to derive independent per-item seeds from one seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Engine seeded from (seed, stream) so that per-trial draws are independent
/// of evaluation order.
std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream);

/// Standard normal vector of length n.
Vec random_gaussian(int n, std::mt19937_64& rng);

/// Uniform point on the unit sphere in R^n.
Vec random_unit(int n, std::mt19937_64& rng);

/// Haar-random rotation in SO(n) via QR of a Gaussian matrix.
Mat random_rotation(int n, std::mt19937_64& rng);

/// Random orthogonal projector of rank k in R^n (QR of a Gaussian n x k block).
Mat random_projector(int n, int k, std::mt19937_64& rng);

/// Run fn(i) for i in [0, n). With threads <= 1 this is a plain loop; with
/// more threads the index range is split into contiguous chunks. fn must only
/// write to per-index slots so results do not depend on the schedule.
void parallel_for(long n, int threads, const std::function<void(long)>& fn);

}  // namespace mva
