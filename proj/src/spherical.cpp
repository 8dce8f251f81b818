#include "mva/spherical.hpp"

#include <cmath>

namespace mva {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

/// Gauss-Legendre nodes/weights on [-1, 1] by Golub-Welsch: eigenvalues of
/// the Jacobi matrix are the nodes, weights are 2 * (first eigenvector
/// component)^2.
void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  Mat jacobi = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double beta = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k, k - 1) = beta;
    jacobi(k - 1, k) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
  nodes = solver.eigenvalues();
  weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
}

/// Fully normalized associated Legendre values Ptilde_l^m (m <= l <= L) from
/// cos(theta) and sin(theta), packed as table[l][m].  Normalization makes
/// Y_{l,0} = Ptilde_l^0 orthonormal over the sphere; no Condon-Shortley
/// phase.
std::vector<std::vector<double>> normalized_legendre(int L, double ct, double st) {
  std::vector<std::vector<double>> table(static_cast<std::size_t>(L) + 1);
  for (int l = 0; l <= L; ++l) table[static_cast<std::size_t>(l)].resize(l + 1);
  table[0][0] = std::sqrt(1.0 / (4.0 * kPi));
  for (int m = 1; m <= L; ++m)
    table[m][m] = st * std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * table[m - 1][m - 1];
  for (int m = 0; m < L; ++m)
    table[m + 1][m] = ct * std::sqrt(2.0 * m + 3.0) * table[m][m];
  for (int m = 0; m <= L; ++m) {
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b =
          std::sqrt(((l - 1.0) * (l - 1.0) - m * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      table[l][m] = a * (ct * table[l - 1][m] - b * table[l - 2][m]);
    }
  }
  return table;
}

}  // namespace

QuadratureRule sphere_quadrature(int L) {
  if (L < 0) throw DimensionMismatch("sphere_quadrature: negative degree");
  Vec ct, wt;
  gauss_legendre(L + 1, ct, wt);
  const int n_phi = 2 * L + 2;
  const double wphi = 2.0 * kPi / n_phi;

  QuadratureRule rule;
  rule.nodes.resize(3, static_cast<long>(L + 1) * n_phi);
  rule.weights.resize(rule.nodes.cols());
  long idx = 0;
  for (int i = 0; i <= L; ++i) {
    const double st = std::sqrt(std::max(0.0, 1.0 - ct[i] * ct[i]));
    for (int j = 0; j < n_phi; ++j, ++idx) {
      const double phi = wphi * j;
      rule.nodes.col(idx) << st * std::cos(phi), st * std::sin(phi), ct[i];
      rule.weights[idx] = wt[i] * wphi;
    }
  }
  return rule;
}

Vec sphere_harmonics(int L, const Vec& x) {
  if (x.size() != 3) throw DimensionMismatch("sphere_harmonics: expected a 3-vector");
  const double ct = x[2];
  const double st = std::hypot(x[0], x[1]);  // more accurate than sqrt(1-ct^2) near poles
  const double phi = std::atan2(x[1], x[0]);
  const auto legendre = normalized_legendre(L, ct, st);

  Vec out((L + 1) * (L + 1));
  const double sqrt2 = std::sqrt(2.0);
  for (int l = 0; l <= L; ++l) {
    const long base = static_cast<long>(l) * l + l;  // index of k = 0
    out[base] = legendre[l][0];
    for (int k = 1; k <= l; ++k) {
      const double p = sqrt2 * legendre[l][k];
      out[base + k] = p * std::cos(k * phi);
      out[base - k] = p * std::sin(k * phi);
    }
  }
  return out;
}

Vec SphereSeries::coeff(int l, int k) const {
  if (l < 0 || l > bandwidth || std::abs(k) > l)
    throw DimensionMismatch("SphereSeries::coeff: index out of range");
  return coeffs.col(static_cast<long>(l) * l + (k + l));
}

nlohmann::json SphereSeries::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (long i = 0; i < coeffs.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (long j = 0; j < coeffs.cols(); ++j) row.push_back(coeffs(i, j));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"type", "sphere"}, {"bandwidth", bandwidth}, {"coeffs", rows}};
}

SphereSeries SphereSeries::from_json(const nlohmann::json& j) {
  SphereSeries series;
  series.bandwidth = j.at("bandwidth").get<int>();
  const auto& rows = j.at("coeffs");
  series.coeffs.resize(static_cast<long>(rows.size()),
                       static_cast<long>(series.bandwidth + 1) * (series.bandwidth + 1));
  for (long i = 0; i < series.coeffs.rows(); ++i)
    for (long k = 0; k < series.coeffs.cols(); ++k) series.coeffs(i, k) = rows[i][k].get<double>();
  return series;
}

SphereSeries sphere_coefficients(const Mat& fsamples, const QuadratureRule& rule, int L) {
  if (fsamples.cols() != rule.size())
    throw DimensionMismatch("sphere_coefficients: one sample column per quadrature node");
  Mat harmonics(rule.size(), static_cast<long>(L + 1) * (L + 1));
  for (long n = 0; n < rule.size(); ++n)
    harmonics.row(n) = sphere_harmonics(L, rule.nodes.col(n)).transpose();
  SphereSeries series;
  series.bandwidth = L;
  series.coeffs = fsamples * rule.weights.asDiagonal() * harmonics;
  return series;
}

Vec sphere_eval(const SphereSeries& series, const Vec& x) {
  return series.coeffs * sphere_harmonics(series.bandwidth, x);
}

Mat sphere_eval_dtangent(const SphereSeries& series, const Vec& x, const Mat& basis, double h) {
  if (basis.rows() != 3) throw DimensionMismatch("sphere_eval_dtangent: basis must be 3 x k");
  const Vec at_x = sphere_eval(series, x);
  Mat out(series.coeffs.rows(), basis.cols());
  for (long i = 0; i < basis.cols(); ++i) {
    const Vec shifted = (x + h * basis.col(i)).normalized();
    out.col(i) = (sphere_eval(series, shifted) - at_x) / h;
  }
  return out;
}

Vec manifold_approximant(const Manifold& model, const SphereSeries& series, const Vec& x) {
  return project_within_reach(model, sphere_eval(series, x));
}

}  // namespace mva
