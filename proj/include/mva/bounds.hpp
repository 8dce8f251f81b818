#pragma once

#include <functional>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "mva/fourier.hpp"
#include "mva/manifold.hpp"

namespace mva {

/// Smoothness inputs for the pre-asymptotic bounds: the order r, the Sobolev
/// seminorm |f^(r)|_{L2}, and the observed sup errors of the linear
/// approximant over the evaluation grid.
struct SmoothnessData {
  int r = 0;
  double sobolev_norm = 0.0;
  double sup_value_error = 0.0;  // epsilon in the differential bound
  double sup_deriv_error = 0.0;

  nlohmann::json to_json() const;
};

/// Sobolev seminorm of a trigonometric series by Parseval:
///   |f^(r)|^2 = sum_k (2 pi |k|)^(2r) |c_k|^2.
/// Meaningful for the bounds only when the series resolves f well beyond the
/// experiment bandwidth.
double sobolev_norm_torus(const TorusSeries& series, int r);

/// Sup-norm bound on the manifold-valued approximation error given the
/// linear sup error eps: projection at most doubles the error, so 2*eps.
double value_bound(double eps);

/// Bound on the differential error of the projected approximant at a point
/// whose linear value error is value_err_at_x:
///   sup_lin_deriv_err + C * value_err_at_x,
///   C = (2/tau + 1/(tau - eps)) * (sup_lin_deriv_err + sup_df_norm).
/// Requires eps < tau (else EpsilonExceedsReach). As the approximation
/// errors vanish, C tends to (3/tau) * sup_df_norm.
double diff_bound(double tau, double eps, double sup_lin_deriv_err, double sup_df_norm,
                  double value_err_at_x);

/// Constants of the bandwidth-explicit Fourier bounds for a d-valued C^r
/// torus function:
///   C1 = sqrt(2 d) / (2 pi)^r,
///   C2 = C1 (2/tau + 1/(tau - eps)) (1 + 2 pi C1^2 n^(3/2 - r)),
/// and the minimal integer bandwidth n_min with n^(r - 1/2) >= C1 * Phi /
/// eps for Sobolev seminorm Phi (the condition keeping every linear value
/// within eps of the manifold).
struct FourierConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  long n_min = 0;

  nlohmann::json to_json() const;
};

FourierConstants fourier_constants(int d, int r, int n, double tau, double eps,
                                   double sobolev_norm);

/// Ground truth at a domain point: the value and the D x (domain dim)
/// Jacobian.
struct TruthSample {
  Vec value;
  Mat differential;
};

/// Per-grid-point record of observed errors against the bounds. Manifold
/// quantities and bounds are NaN at points flagged out of reach.
struct ReportPoint {
  Vec domain_point;
  double linear_value_error = 0.0;
  double linear_diff_error = 0.0;
  double df_norm = 0.0;
  double residual = 0.0;  // distance from the linear value to the manifold
  bool within_reach = true;
  double value_error = 0.0;  // manifold-valued approximant vs truth
  double diff_error = 0.0;   // spectral norm of the Jacobian difference
  double bound_value = 0.0;  // 2 * linear_value_error
  double bound_diff = 0.0;
};

struct ErrorReport {
  std::string model;
  long domain_dim = 0;
  double tau = 0.0;  // NaN when the model does not publish a reach
  SmoothnessData smoothness;
  double C = 0.0;  // differential-bound constant, NaN when not applicable
  double sup_df_norm = 0.0;
  double sup_value_error = 0.0;  // over within-reach points
  double sup_diff_error = 0.0;
  long out_of_reach = 0;
  std::vector<ReportPoint> points;

  nlohmann::json to_json() const;
  /// Flat CSV, one row per grid point, NaN spelled "nan".
  std::string to_csv() const;
};

/// Evaluates truth, the linear approximant, and the projected approximant on
/// every grid column; flags points whose linear value leaves the tubular
/// neighborhood; and attaches the pointwise bounds. r and sobolev_norm are
/// carried into the report for downstream constant computations (pass zeros
/// when not meaningful).
ErrorReport build_report(const Manifold& model,
                         const std::function<TruthSample(const Vec&)>& truth,
                         const std::function<Vec(const Vec&)>& linear_eval,
                         const std::function<Mat(const Vec&)>& linear_deriv, const Mat& grid,
                         int r, double sobolev_norm);

}  // namespace mva
