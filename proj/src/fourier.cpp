#include "mva/fourier.hpp"

#include <cmath>
#include <complex>

namespace mva {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TorusSeries::TorusSeries(int bandwidth, Eigen::MatrixXcd coeffs)
    : bandwidth_(bandwidth), coeffs_(std::move(coeffs)) {
  if (bandwidth_ < 0 || coeffs_.cols() != 2L * bandwidth_ + 1)
    throw DimensionMismatch("TorusSeries: coefficient matrix must have 2n+1 columns");
}

Eigen::VectorXcd TorusSeries::coeff(int k) const {
  if (std::abs(k) > bandwidth_) throw DimensionMismatch("TorusSeries::coeff: |k| > bandwidth");
  return coeffs_.col(k + bandwidth_);
}

Vec TorusSeries::eval(double t) const {
  Eigen::VectorXcd phases(coeffs_.cols());
  for (int k = -bandwidth_; k <= bandwidth_; ++k)
    phases[k + bandwidth_] = std::polar(1.0, kTwoPi * k * t);
  return (coeffs_ * phases).real();
}

Vec TorusSeries::eval_deriv(double t) const {
  Eigen::VectorXcd phases(coeffs_.cols());
  for (int k = -bandwidth_; k <= bandwidth_; ++k)
    phases[k + bandwidth_] =
        std::complex<double>(0.0, kTwoPi * k) * std::polar(1.0, kTwoPi * k * t);
  return (coeffs_ * phases).real();
}

TorusSeries TorusSeries::truncated(int m) const {
  if (m < 0 || m > bandwidth_)
    throw DimensionMismatch("TorusSeries::truncated: target bandwidth out of range");
  return TorusSeries(m, coeffs_.middleCols(bandwidth_ - m, 2 * m + 1));
}

nlohmann::json TorusSeries::to_json() const {
  nlohmann::json real = nlohmann::json::array();
  nlohmann::json imag = nlohmann::json::array();
  for (long i = 0; i < coeffs_.rows(); ++i) {
    nlohmann::json re_row = nlohmann::json::array();
    nlohmann::json im_row = nlohmann::json::array();
    for (long j = 0; j < coeffs_.cols(); ++j) {
      re_row.push_back(coeffs_(i, j).real());
      im_row.push_back(coeffs_(i, j).imag());
    }
    real.push_back(std::move(re_row));
    imag.push_back(std::move(im_row));
  }
  return nlohmann::json{
      {"type", "torus"}, {"bandwidth", bandwidth_}, {"re", real}, {"im", imag}};
}

TorusSeries TorusSeries::from_json(const nlohmann::json& j) {
  const int n = j.at("bandwidth").get<int>();
  const auto& real = j.at("re");
  const auto& imag = j.at("im");
  const long d = static_cast<long>(real.size());
  Eigen::MatrixXcd coeffs(d, 2 * n + 1);
  for (long i = 0; i < d; ++i)
    for (long k = 0; k < coeffs.cols(); ++k)
      coeffs(i, k) = {real[i][k].get<double>(), imag[i][k].get<double>()};
  return TorusSeries(n, std::move(coeffs));
}

TorusSeries torus_coefficients(const Mat& samples, int bandwidth) {
  const long N = samples.cols();
  if (bandwidth < 0) throw DimensionMismatch("torus_coefficients: negative bandwidth");
  if (N < 2L * bandwidth + 1)
    throw InsufficientSamples("torus_coefficients: need at least 2n+1 equispaced samples");
  Eigen::MatrixXcd coeffs(samples.rows(), 2 * bandwidth + 1);
  Eigen::VectorXcd phases(N);
  for (int k = -bandwidth; k <= bandwidth; ++k) {
    for (long j = 0; j < N; ++j)
      phases[j] = std::polar(1.0 / static_cast<double>(N),
                             -kTwoPi * k * static_cast<double>(j) / static_cast<double>(N));
    coeffs.col(k + bandwidth) = samples.cast<std::complex<double>>() * phases;
  }
  return TorusSeries(bandwidth, std::move(coeffs));
}

Vec manifold_approximant(const Manifold& model, const TorusSeries& series, double t) {
  return project_within_reach(model, series.eval(t));
}

}  // namespace mva
