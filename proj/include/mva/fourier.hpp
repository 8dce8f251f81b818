#pragma once

#include <nlohmann/json.hpp>

#include "mva/linalg.hpp"
#include "mva/manifold.hpp"

namespace mva {

/// Truncated trigonometric series f(t) = sum_{|k|<=n} c_k e^{2 pi i k t} on
/// the unit-period torus.  Columns of the coefficient matrix are the complex
/// d-vectors c_{-n}, ..., c_n in that order.  Evaluation returns the real
/// part; series built by torus_coefficients from real samples are
/// conjugate-symmetric, so the imaginary part vanishes identically.
class TorusSeries {
 public:
  TorusSeries() = default;
  TorusSeries(int bandwidth, Eigen::MatrixXcd coeffs);

  int bandwidth() const { return bandwidth_; }
  int dim() const { return static_cast<int>(coeffs_.rows()); }
  const Eigen::MatrixXcd& coeffs() const { return coeffs_; }

  /// The coefficient vector c_k, |k| <= bandwidth.
  Eigen::VectorXcd coeff(int k) const;

  Vec eval(double t) const;
  Vec eval_deriv(double t) const;

  /// Drops every mode with |k| > m.  Requires m <= bandwidth.
  TorusSeries truncated(int m) const;

  nlohmann::json to_json() const;
  static TorusSeries from_json(const nlohmann::json& j);

 private:
  int bandwidth_ = 0;
  Eigen::MatrixXcd coeffs_;  // d x (2n+1)
};

/// Discrete Fourier analysis of equispaced samples f(j/N), j = 0..N-1
/// (columns of `samples`): c_k = (1/N) sum_j f(j/N) e^{-2 pi i k j / N}.
/// Aliasing-free -- hence exact on trigonometric polynomials of degree <= n
/// -- precisely when N >= 2n+1; smaller N throws InsufficientSamples.
TorusSeries torus_coefficients(const Mat& samples, int bandwidth);

/// The manifold-valued approximant at t: metric projection of the linear
/// series value.  When the model publishes a reach, a linear value at
/// distance >= reach throws OutsideTubularNeighborhood; models without a
/// stated reach rely on the projection's own degeneracy errors.
Vec manifold_approximant(const Manifold& model, const TorusSeries& series, double t);

}  // namespace mva
