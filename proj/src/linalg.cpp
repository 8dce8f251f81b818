#include "mva/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "mva/errors.hpp"

namespace mva {

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  // Work with the smaller Gram matrix of the two.
  const Mat gram = (a.rows() <= a.cols()) ? Mat(a * a.transpose()) : Mat(a.transpose() * a);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double spectral_norm_sym(const Mat& a) {
  if (a.size() == 0) return 0.0;
  const Mat sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(sym, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues().minCoeff()), std::abs(es.eigenvalues().maxCoeff()));
}

Mat householder_frame(const Vec& unit) {
  const long d = unit.size();
  if (d < 1) throw DimensionMismatch("householder_frame: empty vector");
  if (std::abs(unit.norm() - 1.0) > 1e-8) throw NotUnit("householder_frame: vector is not unit");
  // Reflection through v = unit + sign(unit_0) e_0 maps e_0 to -sign(unit_0)*unit;
  // its remaining columns therefore span the complement of `unit`.
  const double s = unit[0] >= 0.0 ? 1.0 : -1.0;
  Vec v = unit;
  v[0] += s;
  const double beta = 2.0 / v.squaredNorm();
  Mat frame(d, d - 1);
  for (long j = 1; j < d; ++j) {
    Vec col = -beta * v[j] * v;
    col[j] += 1.0;
    frame.col(j - 1) = col;
  }
  return frame;
}

Vec flatten_rm(const Eigen::Matrix3d& m) {
  Vec v(9);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v[3 * i + j] = m(i, j);
  return v;
}

Eigen::Matrix3d unflatten_rm(const Vec& v) {
  if (v.size() != 9) throw DimensionMismatch("unflatten_rm: need length 9");
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = v[3 * i + j];
  return m;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& w) {
  Eigen::Matrix3d k;
  k << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return k;
}

const std::array<Eigen::Matrix3d, 3>& skew_basis() {
  static const std::array<Eigen::Matrix3d, 3> basis = [] {
    std::array<Eigen::Matrix3d, 3> b;
    b[0] << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    b[1] << 0, 0, -1, 0, 0, 0, 1, 0, 0;
    b[2] << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    return b;
  }();
  return basis;
}

Eigen::Vector3d skew_basis_coords(const Eigen::Matrix3d& k) {
  const auto& s = skew_basis();
  Eigen::Vector3d c;
  for (int i = 0; i < 3; ++i) c[i] = 0.5 * (k.array() * s[i].array()).sum();
  return c;
}

Eigen::Matrix3d skew_basis_combine(const Eigen::Vector3d& c) {
  const auto& s = skew_basis();
  return c[0] * s[0] + c[1] * s[1] + c[2] * s[2];
}

Eigen::Matrix3d exp_skew(const Eigen::Matrix3d& k) {
  const Eigen::Vector3d w(k(2, 1), k(0, 2), k(1, 0));
  const double theta = w.norm();
  if (theta < 1e-12) return Eigen::Matrix3d::Identity() + k + 0.5 * k * k;
  const double a = std::sin(theta) / theta;
  const double b = (1.0 - std::cos(theta)) / (theta * theta);
  return Eigen::Matrix3d::Identity() + a * k + b * (k * k);
}

double rotation_angle(const Eigen::Matrix3d& r) {
  const double c = std::clamp(0.5 * (r.trace() - 1.0), -1.0, 1.0);
  return std::acos(c);
}

Eigen::Matrix3d log_rotation(const Eigen::Matrix3d& r) {
  const double theta = rotation_angle(r);
  if (theta > M_PI - 1e-6)
    throw AmbiguousLog("log_rotation: angle within 1e-6 of a half turn");
  const Eigen::Matrix3d k = 0.5 * (r - r.transpose());
  if (theta < 1e-8) return k;
  return (theta / std::sin(theta)) * k;
}

Eigen::Matrix3d so3_right_jacobian(const Eigen::Vector3d& w) {
  const double theta = w.norm();
  const Eigen::Matrix3d wx = skew(w);
  if (theta < 1e-6)
    return Eigen::Matrix3d::Identity() - 0.5 * wx + (1.0 / 6.0) * (wx * wx);
  const double a = (1.0 - std::cos(theta)) / (theta * theta);
  const double b = (theta - std::sin(theta)) / (theta * theta * theta);
  return Eigen::Matrix3d::Identity() - a * wx + b * (wx * wx);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

Vec random_gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Vec random_unit(int n, std::mt19937_64& rng) {
  for (;;) {
    Vec v = random_gaussian(n, rng);
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}

Mat random_rotation(int n, std::mt19937_64& rng) {
  Mat g(n, n);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the sign ambiguity of QR, then land in SO(n).
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(n - 1) = -q.col(n - 1);
  return q;
}

Mat random_projector(int n, int k, std::mt19937_64& rng) {
  if (k < 0 || k > n) throw DimensionMismatch("random_projector: rank out of range");
  if (k == 0) return Mat::Zero(n, n);
  Mat g(n, k);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat q = Mat(qr.householderQ()).leftCols(k);
  return q * q.transpose();
}

void parallel_for(long n, int threads, const std::function<void(long)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  const int workers = static_cast<int>(std::min<long>(threads, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace mva
