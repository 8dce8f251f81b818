#include "mva/experiments.hpp"

#include <cmath>
#include <limits>

#include "mva/fourier.hpp"
#include "mva/io.hpp"
#include "mva/linalg.hpp"
#include "mva/models.hpp"
#include "mva/spherical.hpp"

namespace mva {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |sin(pi t)|^p and its derivative; p > 1 keeps the derivative continuous
// through the zeros of the sine.
double kink(double t, double p) { return std::pow(std::abs(std::sin(kPi * t)), p); }

double dkink(double t, double p) {
  const double u = std::sin(kPi * t);
  return p * kPi * std::pow(std::abs(u), p - 1.0) * std::cos(kPi * t) * sgn(u);
}

// Sphere-valued curve from polar/azimuthal angle functions.
TorusTestFunction angle_curve(std::string name, int r, double p, double theta0, double a_theta,
                              double a_phi) {
  TorusTestFunction f;
  f.name = std::move(name);
  f.model = "sphere2";
  f.r = r;
  f.value = [=](double t) {
    const double th = theta0 + a_theta * kink(t, p);
    const double ph = 2.0 * kPi * t + a_phi * std::sin(2.0 * kPi * t);
    Vec v(3);
    v << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
    return v;
  };
  f.deriv = [=](double t) {
    const double th = theta0 + a_theta * kink(t, p);
    const double ph = 2.0 * kPi * t + a_phi * std::sin(2.0 * kPi * t);
    const double dth = a_theta * dkink(t, p);
    const double dph = 2.0 * kPi + 2.0 * kPi * a_phi * std::cos(2.0 * kPi * t);
    Vec e_th(3), e_ph(3);
    e_th << std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th);
    e_ph << -std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0;
    return Vec(dth * e_th + dph * e_ph);
  };
  return f;
}

Eigen::Matrix3d axis_rotation(int axis, double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
}

Eigen::Matrix3d axis_generator(int axis) {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  g(b, a) = 1.0;
  g(a, b) = -1.0;
  return g;
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

}  // namespace

// ---------------------------------------------------------------------------
// Shipped test functions

TorusTestFunction torus_function_c2() { return angle_curve("sphere-c2", 2, 2.5, 1.0, 0.8, 0.5); }

TorusTestFunction torus_function_c3() { return angle_curve("sphere-c3", 3, 3.5, 1.1, 0.9, 0.6); }

TorusTestFunction torus_function_so3() {
  TorusTestFunction f;
  f.name = "so3-curve";
  f.model = "so3";
  f.r = 3;
  const auto angles = [](double t) {
    Eigen::Vector3d a;
    a << 0.9 * std::sin(2.0 * kPi * t), 0.7 * std::sin(4.0 * kPi * t + 0.4), 2.0 * kPi * t;
    return a;
  };
  const auto dangles = [](double t) {
    Eigen::Vector3d d;
    d << 0.9 * 2.0 * kPi * std::cos(2.0 * kPi * t), 0.7 * 4.0 * kPi * std::cos(4.0 * kPi * t + 0.4),
        2.0 * kPi;
    return d;
  };
  f.value = [=](double t) {
    const Eigen::Vector3d a = angles(t);
    return flatten_rm(axis_rotation(0, a[0]) * axis_rotation(1, a[1]) * axis_rotation(2, a[2]));
  };
  f.deriv = [=](double t) {
    const Eigen::Vector3d a = angles(t);
    const Eigen::Vector3d da = dangles(t);
    const Eigen::Matrix3d rx = axis_rotation(0, a[0]);
    const Eigen::Matrix3d ry = axis_rotation(1, a[1]);
    const Eigen::Matrix3d rz = axis_rotation(2, a[2]);
    const Eigen::Matrix3d d = da[0] * axis_generator(0) * rx * ry * rz +
                              rx * (da[1] * axis_generator(1) * ry) * rz +
                              rx * ry * (da[2] * axis_generator(2) * rz);
    return flatten_rm(d);
  };
  return f;
}

TorusTestFunction torus_function_bandlimited() {
  TorusTestFunction f;
  f.name = "sphere-bandlimited";
  f.model = "sphere2";
  f.r = 3;
  f.value = [](double t) {
    Vec v(3);
    v << std::cos(2.0 * kPi * t), std::sin(2.0 * kPi * t), 0.0;
    return v;
  };
  f.deriv = [](double t) {
    Vec v(3);
    v << -2.0 * kPi * std::sin(2.0 * kPi * t), 2.0 * kPi * std::cos(2.0 * kPi * t), 0.0;
    return v;
  };
  return f;
}

const std::vector<TorusTestFunction>& shipped_torus_functions() {
  static const std::vector<TorusTestFunction> fns{torus_function_c2(), torus_function_c3(),
                                                  torus_function_so3(),
                                                  torus_function_bandlimited()};
  return fns;
}

SphereTestFunction sphere_function_rp2() {
  SphereTestFunction f;
  f.name = "rp2-field";
  f.model = "rp2";
  const Eigen::Matrix3d A =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1.0, 2.0, -1.0).normalized()).toRotationMatrix() *
      Eigen::Vector3d(1.0, 1.35, 0.75).asDiagonal();
  f.value = [A](const Eigen::Vector3d& x) { return rp2_embed((A * x).normalized()); };
  return f;
}

SphereTestFunction sphere_function_bandlimited() {
  SphereTestFunction f;
  f.name = "rp2-bandlimited";
  f.model = "rp2";
  const Eigen::Matrix3d Q =
      Eigen::AngleAxisd(0.9, Eigen::Vector3d(1.0, -1.0, 2.0).normalized()).toRotationMatrix();
  f.value = [Q](const Eigen::Vector3d& x) { return rp2_embed((Q * x).normalized()); };
  return f;
}

// ---------------------------------------------------------------------------
// Bandwidth sweep on the circle domain

TorusExperimentResult run_torus_experiment(const TorusTestFunction& f,
                                           const TorusExperimentConfig& cfg) {
  if (cfg.bandwidths.empty()) throw Error("run_torus_experiment: no bandwidths requested");
  if (cfg.eval_points < 1) throw Error("run_torus_experiment: eval_points must be positive");
  if (cfg.dense_bandwidth < 1 || cfg.dense_samples < 2L * cfg.dense_bandwidth + 1)
    throw Error("run_torus_experiment: dense sampling must resolve the dense bandwidth");
  for (int n : cfg.bandwidths)
    if (n < 1 || n > cfg.dense_bandwidth)
      throw Error("run_torus_experiment: bandwidths must lie in [1, dense_bandwidth]");

  const auto model = make_model(f.model);
  const long d = model->ambient_dim();

  Mat samples(d, cfg.dense_samples);
  for (long j = 0; j < cfg.dense_samples; ++j)
    samples.col(j) = f.value(static_cast<double>(j) / static_cast<double>(cfg.dense_samples));
  const TorusSeries dense = torus_coefficients(samples, cfg.dense_bandwidth);
  const double phi = sobolev_norm_torus(dense, f.r);

  TorusExperimentResult out;
  out.function_name = f.name;
  out.model = f.model;
  out.r = f.r;
  out.tau = model->reach() ? *model->reach() : kNan;
  out.sobolev_norm = phi;

  Mat grid(1, cfg.eval_points);
  for (long i = 0; i < cfg.eval_points; ++i)
    grid(0, i) = (static_cast<double>(i) + 0.5) / static_cast<double>(cfg.eval_points);

  const auto truth = [&f](const Vec& x) {
    TruthSample s;
    s.value = f.value(x[0]);
    s.differential = f.deriv(x[0]);
    return s;
  };
  const double C1 = std::sqrt(2.0 * static_cast<double>(d)) / std::pow(2.0 * kPi, f.r);

  for (int n : cfg.bandwidths) {
    const TorusSeries sn = dense.truncated(n);
    ErrorReport report = build_report(
        *model, truth, [&sn](const Vec& x) { return sn.eval(x[0]); },
        [&sn](const Vec& x) { return Mat(sn.eval_deriv(x[0])); }, grid, f.r, phi);

    TorusBandwidthRow row;
    row.n = n;
    row.sup_value_error = report.sup_value_error;
    row.sup_diff_error = report.sup_diff_error;
    row.out_of_reach = report.out_of_reach;
    row.C1 = C1;
    for (const ReportPoint& p : report.points) {
      row.sup_linear_value_error = std::max(row.sup_linear_value_error, p.linear_value_error);
      row.sup_linear_deriv_error = std::max(row.sup_linear_deriv_error, p.linear_diff_error);
    }

    const double rate_value = std::pow(static_cast<double>(n), 0.5 - f.r);
    row.value_bound_rhs = 2.0 * C1 * rate_value * phi;
    row.eps = std::isnan(out.tau) ? kNan : C1 * phi * rate_value;
    if (!std::isnan(out.tau) && row.eps < out.tau) {
      const FourierConstants fc =
          fourier_constants(static_cast<int>(d), f.r, n, out.tau, row.eps, phi);
      row.C2 = fc.C2;
      row.diff_bound_rhs = 2.0 * kPi * C1 * std::pow(static_cast<double>(n), 1.5 - f.r) * phi +
                           fc.C2 * rate_value * phi * phi;
      row.diff_applicable = true;
      row.diff_within_bound = report.sup_diff_error <= row.diff_bound_rhs;
    } else {
      row.C2 = kNan;
      row.diff_bound_rhs = kNan;
    }
    row.value_within_bound = report.sup_value_error <= row.value_bound_rhs;

    row.factor_two_ok = true;
    for (const ReportPoint& p : report.points)
      if (p.within_reach && !(p.value_error <= 2.0 * p.linear_value_error + 1e-10))
        row.factor_two_ok = false;

    out.rows.push_back(row);
    out.reports.push_back(std::move(report));
  }

  if (!std::isnan(out.tau)) {
    const double power = static_cast<double>(f.r) - 0.5;
    for (double eps : cfg.nmin_eps) {
      if (!(eps > 0.0) || eps >= out.tau) continue;
      const FourierConstants fc =
          fourier_constants(static_cast<int>(d), f.r, cfg.bandwidths.back(), out.tau, eps, phi);
      NminCheck check;
      check.eps = eps;
      check.n_min = fc.n_min;
      const double target = C1 * phi / eps;
      check.holds_at_n_min = std::pow(static_cast<double>(fc.n_min), power) >= target;
      check.fails_below =
          fc.n_min <= 1 || std::pow(static_cast<double>(fc.n_min - 1), power) < target;
      out.nmin_checks.push_back(check);
    }
  }
  return out;
}

std::string TorusExperimentResult::summary_csv() const {
  std::string out =
      "n,sup_linear_value_error,sup_linear_deriv_error,sup_value_error,sup_diff_error,"
      "out_of_reach,eps,C1,C2,value_bound_rhs,diff_bound_rhs,diff_applicable,"
      "value_within_bound,diff_within_bound,factor_two_ok\n";
  for (const TorusBandwidthRow& row : rows) {
    out += csv_join({std::to_string(row.n), format_double(row.sup_linear_value_error),
                     format_double(row.sup_linear_deriv_error), format_double(row.sup_value_error),
                     format_double(row.sup_diff_error), std::to_string(row.out_of_reach),
                     format_double(row.eps), format_double(row.C1), format_double(row.C2),
                     format_double(row.value_bound_rhs), format_double(row.diff_bound_rhs),
                     fmt_bool(row.diff_applicable), fmt_bool(row.value_within_bound),
                     fmt_bool(row.diff_within_bound), fmt_bool(row.factor_two_ok)}) +
           "\n";
  }
  return out;
}

nlohmann::json TorusExperimentResult::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const TorusBandwidthRow& row : rows) {
    rows_json.push_back({{"n", row.n},
                         {"sup_linear_value_error", row.sup_linear_value_error},
                         {"sup_linear_deriv_error", row.sup_linear_deriv_error},
                         {"sup_value_error", row.sup_value_error},
                         {"sup_diff_error", row.sup_diff_error},
                         {"out_of_reach", row.out_of_reach},
                         {"eps", row.eps},
                         {"C1", row.C1},
                         {"C2", row.C2},
                         {"value_bound_rhs", row.value_bound_rhs},
                         {"diff_bound_rhs", row.diff_bound_rhs},
                         {"diff_applicable", row.diff_applicable},
                         {"value_within_bound", row.value_within_bound},
                         {"diff_within_bound", row.diff_within_bound},
                         {"factor_two_ok", row.factor_two_ok}});
  }
  nlohmann::json nmin_json = nlohmann::json::array();
  for (const NminCheck& c : nmin_checks)
    nmin_json.push_back({{"eps", c.eps},
                         {"n_min", c.n_min},
                         {"holds_at_n_min", c.holds_at_n_min},
                         {"fails_below", c.fails_below}});
  return {{"function", function_name}, {"model", model},           {"r", r},
          {"tau", tau},                {"sobolev_norm", sobolev_norm},
          {"rows", rows_json},         {"nmin_checks", nmin_json}};
}

// ---------------------------------------------------------------------------
// Spherical-harmonic pipeline on the sphere domain

SphereExperimentResult run_sphere_experiment(const SphereTestFunction& f,
                                             const SphereExperimentConfig& cfg) {
  if (cfg.L < 0) throw Error("run_sphere_experiment: L must be nonnegative");
  if (cfg.eval_bands < 1) throw Error("run_sphere_experiment: eval_bands must be positive");

  const auto model = make_model(f.model);
  const QuadratureRule rule = sphere_quadrature(cfg.L);
  Mat fsamples(model->ambient_dim(), rule.size());
  for (long j = 0; j < rule.size(); ++j)
    fsamples.col(j) = f.value(Eigen::Vector3d(rule.nodes.col(j)));
  const SphereSeries series = sphere_coefficients(fsamples, rule, cfg.L);

  SphereExperimentResult out;
  out.function_name = f.name;
  out.model = f.model;
  out.L = cfg.L;
  out.tau = model->reach() ? *model->reach() : kNan;
  out.factor_two_ok = true;

  const int bands = cfg.eval_bands;
  out.map.reserve(static_cast<std::size_t>(bands) * 2 * bands);
  for (int i = 0; i < bands; ++i) {
    const double theta = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(bands);
    for (int j = 0; j < 2 * bands; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(2 * bands);
      Eigen::Vector3d x(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                        std::cos(theta));
      SphereMapPoint point;
      point.theta = theta;
      point.phi = phi;
      const Vec truth = f.value(x);
      const Vec lin = sphere_eval(series, x);
      point.linear_value_error = (lin - truth).norm();
      point.residual = model->distance_to(lin);
      point.within_reach = std::isnan(out.tau) || point.residual < out.tau;
      if (point.within_reach) {
        const Vec projected = project_within_reach(*model, lin);
        point.value_error = (projected - truth).norm();
        out.sup_value_error = std::max(out.sup_value_error, point.value_error);
        if (!(point.value_error <= 2.0 * point.linear_value_error + 1e-10))
          out.factor_two_ok = false;
      } else {
        point.value_error = kNan;
        ++out.out_of_reach;
      }
      out.sup_linear_value_error = std::max(out.sup_linear_value_error, point.linear_value_error);
      out.sup_residual = std::max(out.sup_residual, point.residual);
      out.map.push_back(point);
    }
  }
  return out;
}

std::string SphereExperimentResult::map_csv() const {
  std::string out = "theta,phi,linear_value_error,residual,within_reach,value_error\n";
  for (const SphereMapPoint& p : map) {
    out += csv_join({format_double(p.theta), format_double(p.phi),
                     format_double(p.linear_value_error), format_double(p.residual),
                     fmt_bool(p.within_reach), format_double(p.value_error)}) +
           "\n";
  }
  return out;
}

nlohmann::json SphereExperimentResult::to_json() const {
  return {{"function", function_name},
          {"model", model},
          {"L", L},
          {"tau", tau},
          {"sup_linear_value_error", sup_linear_value_error},
          {"sup_residual", sup_residual},
          {"sup_value_error", sup_value_error},
          {"out_of_reach", out_of_reach},
          {"factor_two_ok", factor_two_ok},
          {"map_points", static_cast<long>(map.size())}};
}

// ---------------------------------------------------------------------------
// Randomized bound verification across the model zoo

bool VerifyResult::all_passed() const {
  for (const BoundCheckSummary& s : summaries)
    if (s.violations != 0) return false;
  return true;
}

nlohmann::json VerifyResult::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const BoundCheckSummary& s : summaries) arr.push_back(s.to_json());
  return {{"summaries", arr}, {"all_passed", all_passed()}};
}

VerifyResult run_verify(const VerifyConfig& cfg) {
  const bool all = cfg.bound == "all";
  if (!all && cfg.bound != "tangent-lipschitz" && cfg.bound != "dp-deviation" &&
      cfg.bound != "commutator" && cfg.bound != "curvature")
    throw Error("run_verify: unknown bound '" + cfg.bound + "'");

  const std::vector<std::string> zoo{"circle:0.5", "circle", "circle:2", "sphere2", "rp2", "so3"};
  // Curvature needs an exact reach: a sampled one can overshoot and turn an
  // honest shape operator into a spurious violation.
  const std::vector<std::string> exact_reach{"circle:0.5", "circle", "circle:2", "sphere2", "rp2"};

  VerifyResult out;
  if (all || cfg.bound == "tangent-lipschitz") {
    for (const std::string& name : zoo) {
      const auto model = make_model(name);
      out.summaries.push_back(check_tangent_lipschitz(*model, cfg.tangent_pairs, cfg.seed,
                                                      cfg.slack, std::nullopt, std::nullopt,
                                                      cfg.threads));
    }
    // Sharpness probe: pairs at geodesic distance <= tau/100 on the unit
    // circle approach the bound from below.
    const auto circle = make_model("circle");
    BoundCheckSummary sharp = check_tangent_lipschitz(*circle, cfg.tangent_pairs, cfg.seed + 1,
                                                      cfg.slack, 0.01, std::nullopt, cfg.threads);
    sharp.bound += "-sharpness";
    out.summaries.push_back(std::move(sharp));
  }
  if (all || cfg.bound == "dp-deviation") {
    for (const std::string& name : zoo) {
      const auto model = make_model(name);
      for (BoundCheckSummary& s :
           check_dP_deviation(*model, cfg.deviation_trials, cfg.seed, 0.6, cfg.slack, std::nullopt,
                              cfg.threads))
        out.summaries.push_back(std::move(s));
    }
  }
  if (all || cfg.bound == "commutator") {
    const long per_dim = std::max<long>(1, cfg.commutator_trials / 8);
    for (int dim = 2; dim <= 9; ++dim)
      out.summaries.push_back(
          check_commutator(dim, per_dim, cfg.seed + static_cast<std::uint64_t>(dim),
                           cfg.commutator_slack, cfg.threads));
  }
  if (all || cfg.bound == "curvature") {
    for (const std::string& name : exact_reach) {
      const auto model = make_model(name);
      out.summaries.push_back(check_curvature_bound(*model, cfg.curvature_trials, cfg.seed,
                                                    cfg.slack, std::nullopt, cfg.threads));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reach estimation driver

nlohmann::json ReachExperimentResult::to_json() const {
  nlohmann::json j{{"model", model},
                   {"samples", samples},
                   {"seed", seed},
                   {"estimate", estimate.to_json()},
                   {"relative_error", relative_error}};
  if (expected)
    j["expected"] = *expected;
  else
    j["expected"] = nullptr;
  return j;
}

ReachExperimentResult run_reach_experiment(const std::string& model_name, long samples,
                                           std::uint64_t seed, int threads) {
  const auto model = make_model(model_name);
  ReachExperimentResult out;
  out.model = model_name;
  out.samples = samples;
  out.seed = seed;
  out.estimate = estimate_reach(*model, samples, seed, threads);
  out.expected = model->reach();
  out.relative_error =
      out.expected ? std::abs(out.estimate.value - *out.expected) / *out.expected : kNan;
  return out;
}

// ---------------------------------------------------------------------------
// Orientation denoising driver

DenoiseArtifacts run_denoise(const OrientationGrid& grid, std::optional<double> smoothing) {
  DenoiseArtifacts out;
  out.result = denoise_grid(grid, smoothing);
  out.smooth_curvature = curvature_field_from_smooth(out.result);
  out.fd_curvature = curvature_field_fd(grid);

  long inpainted = 0;
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j)
      if (out.result.grid.valid(i, j) && !grid.valid(i, j)) ++inpainted;
  long smooth_defined = 0, fd_defined = 0;
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) {
      if (out.smooth_curvature.defined(i, j)) ++smooth_defined;
      if (out.fd_curvature.defined(i, j)) ++fd_defined;
    }

  out.stats = {{"rows", grid.rows},
               {"cols", grid.cols},
               {"symmetry", grid.symmetry},
               {"spacing_x", grid.spacing_x},
               {"spacing_y", grid.spacing_y},
               {"cells", grid.cell_count()},
               {"valid_cells", grid.valid_count()},
               {"masked_cells", grid.cell_count() - grid.valid_count()},
               {"inpainted_cells", inpainted},
               {"smoothing", out.result.gcv.best_s},
               {"gcv_scores", out.result.gcv.scores},
               {"max_anchor_angle", out.result.max_anchor_angle},
               {"within_injectivity_ball", out.result.within_injectivity_ball},
               {"smooth_curvature_defined", smooth_defined},
               {"fd_curvature_defined", fd_defined}};
  return out;
}

}  // namespace mva
