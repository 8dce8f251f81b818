#include "mva/smoothing.hpp"

#include <cmath>
#include <limits>

namespace mva {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

/// Derivative of the DCT-II synthesis basis with respect to the fractional
/// cell index: Dd(p, i) = -w_p (pi p / n) sin(pi p (i + 1/2) / n).
Mat dct2_deriv_matrix(long n) {
  Mat d(n, n);
  for (long p = 0; p < n; ++p) {
    const double w = (p == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (long i = 0; i < n; ++i)
      d(p, i) = -w * (kPi * p / n) * std::sin(kPi * p * (i + 0.5) / n);
  }
  return d;
}

/// Per-mode shrinkage factors 1 / (1 + s (lambda_p + lambda_q)^2).
Mat shrinkage(long n1, long n2, double s) {
  Vec lam1(n1), lam2(n2);
  for (long k = 0; k < n1; ++k) lam1[k] = 2.0 - 2.0 * std::cos(kPi * k / n1);
  for (long k = 0; k < n2; ++k) lam2[k] = 2.0 - 2.0 * std::cos(kPi * k / n2);
  Mat gamma(n1, n2);
  for (long p = 0; p < n1; ++p)
    for (long q = 0; q < n2; ++q) gamma(p, q) = 1.0 / (1.0 + s * std::pow(lam1[p] + lam2[q], 2));
  return gamma;
}

struct SmoothResult {
  std::vector<Mat> coeffs;
  double rss = 0.0;  // over valid cells, summed across channels
  bool converged = true;
};

SmoothResult solve(const std::vector<Mat>& grid, const BoolGrid& mask, double s) {
  const long n1 = grid.front().rows();
  const long n2 = grid.front().cols();
  const std::size_t channels = grid.size();
  const Mat d1 = dct2_matrix(n1);
  const Mat d2 = dct2_matrix(n2);
  const Mat gamma = shrinkage(n1, n2, s);
  const Mat weights = mask.cast<double>().matrix();
  const bool full = mask.all();

  std::vector<Mat> smoothed(channels);
  std::vector<Mat> coeffs(channels);
  bool converged = true;

  for (std::size_t c = 0; c < channels; ++c) {
    const Mat& u = grid[c];
    if (full) {
      coeffs[c] = gamma.cwiseProduct(d1 * u * d2.transpose());
      smoothed[c] = d1.transpose() * coeffs[c] * d2;
      continue;
    }
    const double mean =
        (weights.cwiseProduct(u)).sum() / static_cast<double>(mask.count());
    Mat uhat = Mat::Constant(n1, n2, mean);
    uhat = mask.select(u, uhat);
    bool done = false;
    for (int it = 0; it < 500; ++it) {
      const Mat rhs = weights.cwiseProduct(u - uhat) + uhat;
      coeffs[c] = gamma.cwiseProduct(d1 * rhs * d2.transpose());
      const Mat next = d1.transpose() * coeffs[c] * d2;
      const double change = (next - uhat).cwiseAbs().maxCoeff();
      const double scale = std::max(next.cwiseAbs().maxCoeff(), 1e-300);
      uhat = next;
      if (change / scale < 1e-8) {
        done = true;
        break;
      }
    }
    converged = converged && done;
    smoothed[c] = uhat;
  }

  SmoothResult result;
  result.coeffs = std::move(coeffs);
  result.converged = converged;
  for (std::size_t c = 0; c < channels; ++c) {
    const Mat resid = mask.select(grid[c] - smoothed[c], Mat::Zero(n1, n2));
    result.rss += resid.squaredNorm();
  }
  return result;
}

void check_inputs(const std::vector<Mat>& grid, const BoolGrid& mask, double s) {
  if (grid.empty()) throw DimensionMismatch("cosine_smooth: no channels");
  const long n1 = grid.front().rows();
  const long n2 = grid.front().cols();
  if (n1 == 0 || n2 == 0) throw DimensionMismatch("cosine_smooth: empty grid");
  for (const Mat& channel : grid)
    if (channel.rows() != n1 || channel.cols() != n2)
      throw DimensionMismatch("cosine_smooth: channel shape mismatch");
  if (mask.rows() != n1 || mask.cols() != n2)
    throw DimensionMismatch("cosine_smooth: mask shape mismatch");
  if (s < 0.0) throw DimensionMismatch("cosine_smooth: negative smoothing parameter");
  if (!mask.any()) throw AllMasked("cosine_smooth: every cell is masked");
}

}  // namespace

Mat dct2_matrix(long n) {
  Mat d(n, n);
  for (long p = 0; p < n; ++p) {
    const double w = (p == 0) ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (long i = 0; i < n; ++i) d(p, i) = w * std::cos(kPi * p * (i + 0.5) / n);
  }
  return d;
}

Mat dct2(const Mat& grid) {
  return dct2_matrix(grid.rows()) * grid * dct2_matrix(grid.cols()).transpose();
}

Mat idct2(const Mat& coeffs) {
  return dct2_matrix(coeffs.rows()).transpose() * coeffs * dct2_matrix(coeffs.cols());
}

CosineGridSeries::CosineGridSeries(double smoothing, std::vector<Mat> coeffs)
    : smoothing_(smoothing), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DimensionMismatch("CosineGridSeries: no channels");
  for (const Mat& c : coeffs_)
    if (c.rows() != rows() || c.cols() != cols())
      throw DimensionMismatch("CosineGridSeries: channel shape mismatch");
}

Mat CosineGridSeries::grid_values(int channel) const { return idct2(coeffs(channel)); }

Mat CosineGridSeries::grid_derivative(int channel, int axis) const {
  const Mat& c = coeffs(channel);
  if (axis == 0) return dct2_deriv_matrix(rows()).transpose() * c * dct2_matrix(cols());
  if (axis == 1) return dct2_matrix(rows()).transpose() * c * dct2_deriv_matrix(cols());
  throw DimensionMismatch("CosineGridSeries::grid_derivative: axis must be 0 or 1");
}

Vec CosineGridSeries::value_at(long i, long j) const {
  Vec b1(rows()), b2(cols());
  for (long p = 0; p < rows(); ++p) {
    const double w = (p == 0) ? std::sqrt(1.0 / rows()) : std::sqrt(2.0 / rows());
    b1[p] = w * std::cos(kPi * p * (i + 0.5) / rows());
  }
  for (long q = 0; q < cols(); ++q) {
    const double w = (q == 0) ? std::sqrt(1.0 / cols()) : std::sqrt(2.0 / cols());
    b2[q] = w * std::cos(kPi * q * (j + 0.5) / cols());
  }
  Vec out(channels());
  for (int c = 0; c < channels(); ++c) out[c] = b1.dot(coeffs_[static_cast<std::size_t>(c)] * b2);
  return out;
}

Vec CosineGridSeries::derivative_at(long i, long j, int axis) const {
  if (axis != 0 && axis != 1)
    throw DimensionMismatch("CosineGridSeries::derivative_at: axis must be 0 or 1");
  Vec b1(rows()), b2(cols());
  for (long p = 0; p < rows(); ++p) {
    const double w = (p == 0) ? std::sqrt(1.0 / rows()) : std::sqrt(2.0 / rows());
    const double arg = kPi * p * (i + 0.5) / rows();
    b1[p] = (axis == 0) ? -w * (kPi * p / rows()) * std::sin(arg) : w * std::cos(arg);
  }
  for (long q = 0; q < cols(); ++q) {
    const double w = (q == 0) ? std::sqrt(1.0 / cols()) : std::sqrt(2.0 / cols());
    const double arg = kPi * q * (j + 0.5) / cols();
    b2[q] = (axis == 1) ? -w * (kPi * q / cols()) * std::sin(arg) : w * std::cos(arg);
  }
  Vec out(channels());
  for (int c = 0; c < channels(); ++c) out[c] = b1.dot(coeffs_[static_cast<std::size_t>(c)] * b2);
  return out;
}

nlohmann::json CosineGridSeries::to_json() const {
  nlohmann::json chans = nlohmann::json::array();
  for (const Mat& c : coeffs_) {
    nlohmann::json rows_json = nlohmann::json::array();
    for (long i = 0; i < c.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (long j = 0; j < c.cols(); ++j) row.push_back(c(i, j));
      rows_json.push_back(std::move(row));
    }
    chans.push_back(std::move(rows_json));
  }
  return nlohmann::json{{"type", "cosine-grid"},
                        {"rows", rows()},
                        {"cols", cols()},
                        {"smoothing", smoothing_},
                        {"coeffs", chans}};
}

CosineGridSeries CosineGridSeries::from_json(const nlohmann::json& j) {
  const long n1 = j.at("rows").get<long>();
  const long n2 = j.at("cols").get<long>();
  std::vector<Mat> coeffs;
  for (const auto& chan : j.at("coeffs")) {
    Mat c(n1, n2);
    for (long i = 0; i < n1; ++i)
      for (long k = 0; k < n2; ++k) c(i, k) = chan[i][k].get<double>();
    coeffs.push_back(std::move(c));
  }
  return CosineGridSeries(j.at("smoothing").get<double>(), std::move(coeffs));
}

CosineGridSeries cosine_smooth(const std::vector<Mat>& grid, const BoolGrid& mask, double s) {
  check_inputs(grid, mask, s);
  SmoothResult result = solve(grid, mask, s);
  if (!result.converged)
    throw NonConvergence("cosine_smooth: masked fixed-point iteration did not converge");
  return CosineGridSeries(s, std::move(result.coeffs));
}

GcvScan choose_smoothing_gcv(const std::vector<Mat>& grid, const BoolGrid& mask) {
  check_inputs(grid, mask, 0.0);
  const long n1 = grid.front().rows();
  const long n2 = grid.front().cols();
  const double n_valid = static_cast<double>(mask.count());
  const double n_cells = static_cast<double>(n1 * n2);

  GcvScan scan;
  scan.best_score = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const double s = std::pow(10.0, -6.0 + 12.0 * i / 19.0);
    double score = std::numeric_limits<double>::infinity();
    const SmoothResult result = solve(grid, mask, s);
    // A candidate whose imputation iteration stalls is skipped rather than
    // aborting the scan; cosine_smooth itself still reports NonConvergence.
    if (result.converged) {
      const double tr_h = shrinkage(n1, n2, s).sum();
      const double denom = 1.0 - tr_h / n_cells;
      score = (result.rss / n_valid) / (denom * denom);
    }
    scan.scores.emplace_back(s, score);
    if (score < scan.best_score) {
      scan.best_score = score;
      scan.best_s = s;
    }
  }
  if (!std::isfinite(scan.best_score))
    throw NonConvergence("choose_smoothing_gcv: no candidate converged");
  return scan;
}

}  // namespace mva
