#include "mva/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mva/io.hpp"

namespace mva {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

nlohmann::json SmoothnessData::to_json() const {
  return nlohmann::json{{"r", r},
                        {"sobolev_norm", sobolev_norm},
                        {"sup_value_error", sup_value_error},
                        {"sup_deriv_error", sup_deriv_error}};
}

double sobolev_norm_torus(const TorusSeries& series, int r) {
  if (r < 0) throw Error("sobolev_norm_torus: negative order");
  double sum = 0.0;
  for (int k = -series.bandwidth(); k <= series.bandwidth(); ++k)
    sum += std::pow(kTwoPi * std::abs(k), 2 * r) * series.coeff(k).squaredNorm();
  return std::sqrt(sum);
}

double value_bound(double eps) {
  if (eps < 0.0) throw Error("value_bound: negative error");
  return 2.0 * eps;
}

double diff_bound(double tau, double eps, double sup_lin_deriv_err, double sup_df_norm,
                  double value_err_at_x) {
  if (!(tau > 0.0)) throw Error("diff_bound: reach must be positive");
  if (eps >= tau) throw EpsilonExceedsReach("diff_bound: sup value error reaches the reach");
  const double c = (2.0 / tau + 1.0 / (tau - eps)) * (sup_lin_deriv_err + sup_df_norm);
  return sup_lin_deriv_err + c * value_err_at_x;
}

nlohmann::json FourierConstants::to_json() const {
  return nlohmann::json{{"C1", C1}, {"C2", C2}, {"n_min", n_min}};
}

FourierConstants fourier_constants(int d, int r, int n, double tau, double eps,
                                   double sobolev_norm) {
  if (d < 1 || r < 2 || n < 1) throw Error("fourier_constants: need d >= 1, r >= 2, n >= 1");
  if (!(tau > 0.0)) throw Error("fourier_constants: reach must be positive");
  if (!(eps > 0.0)) throw Error("fourier_constants: eps must be positive");
  if (eps >= tau) throw EpsilonExceedsReach("fourier_constants: eps reaches the reach");

  FourierConstants out;
  out.C1 = std::sqrt(2.0 * d) / std::pow(kTwoPi, r);
  out.C2 = out.C1 * (2.0 / tau + 1.0 / (tau - eps)) *
           (1.0 + kTwoPi * out.C1 * out.C1 * std::pow(n, 1.5 - r));

  // Minimal integer bandwidth with n^(r - 1/2) >= C1 * Phi / eps; the
  // floating-point ceil is corrected by direct checks so the tightness
  // property (n_min passes, n_min - 1 does not) holds exactly.
  const double target = out.C1 * sobolev_norm / eps;
  const double power = static_cast<double>(r) - 0.5;
  long n_min = 0;
  if (target > 0.0) {
    n_min = static_cast<long>(std::ceil(std::pow(target, 1.0 / power)));
    n_min = std::max<long>(n_min, 1);
    while (n_min > 1 && std::pow(static_cast<double>(n_min - 1), power) >= target) --n_min;
    while (std::pow(static_cast<double>(n_min), power) < target) ++n_min;
  }
  out.n_min = n_min;
  return out;
}

ErrorReport build_report(const Manifold& model,
                         const std::function<TruthSample(const Vec&)>& truth,
                         const std::function<Vec(const Vec&)>& linear_eval,
                         const std::function<Mat(const Vec&)>& linear_deriv, const Mat& grid,
                         int r, double sobolev_norm) {
  ErrorReport report;
  report.model = model.name();
  report.domain_dim = grid.rows();
  report.tau = model.reach() ? *model.reach() : kNan;
  report.smoothness.r = r;
  report.smoothness.sobolev_norm = sobolev_norm;

  const long n_points = grid.cols();
  report.points.resize(static_cast<std::size_t>(n_points));
  std::vector<TruthSample> truths(static_cast<std::size_t>(n_points));
  std::vector<Vec> lin_values(static_cast<std::size_t>(n_points));
  std::vector<Mat> lin_derivs(static_cast<std::size_t>(n_points));

  // First pass: linear approximant vs truth, and the sups that feed the
  // differential-bound constant.
  for (long i = 0; i < n_points; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    const Vec x = grid.col(i);
    truths[u] = truth(x);
    lin_values[u] = linear_eval(x);
    lin_derivs[u] = linear_deriv(x);

    ReportPoint& point = report.points[u];
    point.domain_point = x;
    point.linear_value_error = (lin_values[u] - truths[u].value).norm();
    point.linear_diff_error = spectral_norm(lin_derivs[u] - truths[u].differential);
    point.df_norm = spectral_norm(truths[u].differential);

    report.smoothness.sup_value_error =
        std::max(report.smoothness.sup_value_error, point.linear_value_error);
    report.smoothness.sup_deriv_error =
        std::max(report.smoothness.sup_deriv_error, point.linear_diff_error);
    report.sup_df_norm = std::max(report.sup_df_norm, point.df_norm);
  }

  const double eps = report.smoothness.sup_value_error;
  const bool diff_bound_applies = model.reach() && eps < *model.reach();
  report.C = diff_bound_applies ? (2.0 / report.tau + 1.0 / (report.tau - eps)) *
                                      (report.smoothness.sup_deriv_error + report.sup_df_norm)
                                : kNan;

  // Second pass: project, differentiate through the projection, attach
  // bounds. A point is out of reach when its residual reaches the model's
  // stated reach, or -- for models without one -- when the projection or its
  // differential degenerates.
  for (long i = 0; i < n_points; ++i) {
    const std::size_t u = static_cast<std::size_t>(i);
    ReportPoint& point = report.points[u];
    point.residual = model.distance_to(lin_values[u]);
    point.within_reach = !model.reach() || point.residual < *model.reach();
    if (point.within_reach) {
      try {
        const Vec projected = model.project(lin_values[u]);
        const Mat dp = dprojection(model, lin_values[u]);
        point.value_error = (projected - truths[u].value).norm();
        point.diff_error = spectral_norm(dp * lin_derivs[u] - truths[u].differential);
      } catch (const OutsideTubularNeighborhood&) {
        point.within_reach = false;
      } catch (const SingularOperator&) {
        point.within_reach = false;
      }
    }
    if (point.within_reach) {
      point.bound_value = value_bound(point.linear_value_error);
      point.bound_diff = diff_bound_applies
                             ? diff_bound(report.tau, eps, report.smoothness.sup_deriv_error,
                                          report.sup_df_norm, point.linear_value_error)
                             : kNan;
      report.sup_value_error = std::max(report.sup_value_error, point.value_error);
      report.sup_diff_error = std::max(report.sup_diff_error, point.diff_error);
    } else {
      point.value_error = kNan;
      point.diff_error = kNan;
      point.bound_value = kNan;
      point.bound_diff = kNan;
      report.out_of_reach += 1;
    }
  }
  return report;
}

nlohmann::json ErrorReport::to_json() const {
  nlohmann::json j{{"model", model},
                   {"domain_dim", domain_dim},
                   {"tau", tau},
                   {"smoothness", smoothness.to_json()},
                   {"C", C},
                   {"sup_df_norm", sup_df_norm},
                   {"sup_value_error", sup_value_error},
                   {"sup_diff_error", sup_diff_error},
                   {"out_of_reach", out_of_reach},
                   {"points", nlohmann::json::array()}};
  for (const ReportPoint& p : points) {
    nlohmann::json coords = nlohmann::json::array();
    for (long k = 0; k < p.domain_point.size(); ++k) coords.push_back(p.domain_point[k]);
    j["points"].push_back(nlohmann::json{{"x", coords},
                                         {"linear_value_error", p.linear_value_error},
                                         {"linear_diff_error", p.linear_diff_error},
                                         {"df_norm", p.df_norm},
                                         {"residual", p.residual},
                                         {"within_reach", p.within_reach},
                                         {"value_error", p.value_error},
                                         {"diff_error", p.diff_error},
                                         {"bound_value", p.bound_value},
                                         {"bound_diff", p.bound_diff}});
  }
  return j;
}

std::string ErrorReport::to_csv() const {
  std::vector<std::string> header;
  for (long k = 0; k < domain_dim; ++k) header.push_back("x" + std::to_string(k));
  for (const char* name :
       {"linear_value_error", "linear_diff_error", "df_norm", "residual", "within_reach",
        "value_error", "diff_error", "bound_value", "bound_diff"})
    header.emplace_back(name);

  std::string out = csv_join(header) + "\n";
  for (const ReportPoint& p : points) {
    std::vector<std::string> row;
    for (long k = 0; k < p.domain_point.size(); ++k)
      row.push_back(format_double(p.domain_point[k]));
    row.push_back(format_double(p.linear_value_error));
    row.push_back(format_double(p.linear_diff_error));
    row.push_back(format_double(p.df_norm));
    row.push_back(format_double(p.residual));
    row.push_back(p.within_reach ? "1" : "0");
    row.push_back(format_double(p.value_error));
    row.push_back(format_double(p.diff_error));
    row.push_back(format_double(p.bound_value));
    row.push_back(format_double(p.bound_diff));
    out += csv_join(row) + "\n";
  }
  return out;
}

}  // namespace mva
