#pragma once

#include <nlohmann/json.hpp>
#include <utility>
#include <vector>

#include "mva/errors.hpp"
#include "mva/linalg.hpp"

namespace mva {

using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Orthonormal DCT-II analysis matrix (mode p, cell i):
///   D(p, i) = w_p cos(pi p (i + 1/2) / n),  w_0 = sqrt(1/n), w_p = sqrt(2/n).
Mat dct2_matrix(long n);

/// Separable 2D orthonormal cosine transform of a grid and its inverse.
Mat dct2(const Mat& grid);
Mat idct2(const Mat& coeffs);

/// A d-channel cosine series on an N1 x N2 cell-centered grid:
///   u_c(i, j) = sum_{p,q} C_c(p, q) w_p cos(pi p (i+1/2)/N1) w_q cos(pi q (j+1/2)/N2).
/// Immutable after construction; evaluation is pure.
class CosineGridSeries {
 public:
  CosineGridSeries() = default;
  CosineGridSeries(double smoothing, std::vector<Mat> coeffs);

  long rows() const { return coeffs_.empty() ? 0 : coeffs_.front().rows(); }
  long cols() const { return coeffs_.empty() ? 0 : coeffs_.front().cols(); }
  int channels() const { return static_cast<int>(coeffs_.size()); }
  double smoothing() const { return smoothing_; }
  const Mat& coeffs(int channel) const { return coeffs_.at(static_cast<std::size_t>(channel)); }

  /// Synthesized values of one channel at every cell center.
  Mat grid_values(int channel) const;

  /// Series derivative of one channel at every cell center, taken with
  /// respect to the fractional grid index along `axis` (0 = first index, 1 =
  /// second). Divide by the cell spacing to obtain a physical derivative.
  Mat grid_derivative(int channel, int axis) const;

  /// All channels at one cell center.
  Vec value_at(long i, long j) const;

  /// All channels of the index-space derivative (see grid_derivative) at one
  /// cell center.
  Vec derivative_at(long i, long j, int axis) const;

  nlohmann::json to_json() const;
  static CosineGridSeries from_json(const nlohmann::json& j);

 private:
  double smoothing_ = 0.0;
  std::vector<Mat> coeffs_;  // one N1 x N2 coefficient matrix per channel
};

/// Penalized least squares over cosine series,
///   minimize  sum_{mask} |u - uhat|^2 + s |Laplacian uhat|^2,
/// solved in the cosine basis by per-mode shrinkage 1/(1 + s (lambda_p +
/// lambda_q)^2) with lambda_k = 2 - 2 cos(pi k / N) the discrete Neumann
/// Laplacian eigenvalues.  Masked cells are imputed by iterating the weighted
/// solve to a fixed point (relative change < 1e-8 in the max norm, at most
/// 500 iterations, else NonConvergence); the first iterate starts from the
/// per-channel mean of the valid cells.  Throws AllMasked when no cell is
/// valid.
CosineGridSeries cosine_smooth(const std::vector<Mat>& grid, const BoolGrid& mask, double s);

/// Result of a generalized cross-validation scan over candidate smoothing
/// parameters. `scores` keeps every (s, score) pair; candidates whose fixed-
/// point iteration failed to converge are recorded with an infinite score.
struct GcvScan {
  double best_s = 0.0;
  double best_score = 0.0;
  std::vector<std::pair<double, double>> scores;
};

/// Picks the smoothing parameter minimizing the GCV score
///   (RSS / n_valid) / (1 - tr(H)/(N1 N2))^2,
/// where RSS sums squared residuals over valid cells and channels and tr(H) =
/// sum of the per-mode shrinkage factors, over 20 log-spaced candidates in
/// [1e-6, 1e6].
GcvScan choose_smoothing_gcv(const std::vector<Mat>& grid, const BoolGrid& mask);

}  // namespace mva
