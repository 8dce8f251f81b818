#pragma once

#include <cstdint>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mva/bounds.hpp"
#include "mva/orientation.hpp"
#include "mva/reach.hpp"

namespace mva {

// ---------------------------------------------------------------------------
// Shipped test functions

/// Periodic curve t in [0,1) -> M subset R^D with an analytic derivative,
/// plus the smoothness order its bandwidth-explicit bounds use.
struct TorusTestFunction {
  std::string name;
  std::string model;  // make_model name of the target manifold
  int r = 2;
  std::function<Vec(double)> value;
  std::function<Vec(double)> deriv;  // d/dt of the embedded curve
};

/// Sphere-valued curve whose polar angle carries an |sin(pi t)|^(5/2) kink:
/// twice continuously differentiable with an unbounded third derivative, so
/// its order-2 Sobolev seminorm is the largest finite one.
TorusTestFunction torus_function_c2();

/// Same construction with an |sin(pi t)|^(7/2) kink: three times
/// continuously differentiable with an unbounded fourth derivative.
TorusTestFunction torus_function_c3();

/// Smooth rotation-valued curve, a product of coordinate-axis rotations with
/// periodic angles. The rotation group publishes no reach, so only the value
/// bounds apply to it.
TorusTestFunction torus_function_so3();

/// Great-circle curve of bandwidth 1: every truncation with n >= 1
/// reproduces it to rounding error, end to end.
TorusTestFunction torus_function_bandlimited();

/// The four functions above, in the order c2, c3, so3, band-limited.
const std::vector<TorusTestFunction>& shipped_torus_functions();

/// Function on the unit sphere with values in an embedded model.
struct SphereTestFunction {
  std::string name;
  std::string model;
  std::function<Vec(const Eigen::Vector3d&)> value;
};

/// Projective-plane-valued field: the line through A x for a fixed
/// anisotropic A, embedded as a rank-one projector. Not band-limited.
SphereTestFunction sphere_function_rp2();

/// Projective-plane-valued field of spherical-harmonic degree 2 (a rotated
/// rank-one projector field): reproduced exactly at any L >= 2.
SphereTestFunction sphere_function_bandlimited();

// ---------------------------------------------------------------------------
// Bandwidth sweep on the circle domain

struct TorusExperimentConfig {
  std::vector<int> bandwidths{4, 8, 16, 32, 64};
  long dense_samples = 4096;  // equispaced samples feeding the dense analysis
  int dense_bandwidth = 320;  // modes kept for truncations and Sobolev norms
  long eval_points = 1024;    // offset evaluation grid (i + 1/2) / eval_points
  std::vector<double> nmin_eps{0.5, 0.1, 0.02};  // minimal-bandwidth probes
};

/// Observed errors and bound right-hand sides at one bandwidth. eps is the
/// tightest admissible tube radius C1 * Phi * n^(1/2 - r); it, C2, and
/// diff_bound_rhs are NaN when the model has no reach or eps reaches it.
struct TorusBandwidthRow {
  int n = 0;
  double sup_linear_value_error = 0.0;
  double sup_linear_deriv_error = 0.0;
  double sup_value_error = 0.0;  // projected approximant, within-reach points
  double sup_diff_error = 0.0;
  long out_of_reach = 0;
  double eps = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double value_bound_rhs = 0.0;  // 2 C1 n^(1/2-r) Phi
  double diff_bound_rhs = 0.0;   // 2 pi C1 n^(3/2-r) Phi + C2 n^(1/2-r) Phi^2
  bool diff_applicable = false;
  bool value_within_bound = false;
  bool diff_within_bound = false;  // false whenever not applicable
  /// Pointwise value_error <= 2 * linear error + 1e-10 at within-reach points.
  bool factor_two_ok = false;
};

/// Tightness record of the minimal bandwidth for one tube radius: n_min
/// satisfies n^(r-1/2) >= C1 Phi / eps and n_min - 1 does not (vacuous at 1).
struct NminCheck {
  double eps = 0.0;
  long n_min = 0;
  bool holds_at_n_min = false;
  bool fails_below = false;
};

struct TorusExperimentResult {
  std::string function_name;
  std::string model;
  int r = 0;
  double tau = 0.0;  // NaN when the model publishes no reach
  double sobolev_norm = 0.0;
  std::vector<TorusBandwidthRow> rows;
  std::vector<ErrorReport> reports;  // aligned with rows
  std::vector<NminCheck> nmin_checks;

  /// One CSV row per bandwidth, `rows` fields in declaration order.
  std::string summary_csv() const;
  /// Everything except the per-point reports.
  nlohmann::json to_json() const;
};

/// Dense Fourier analysis of the test curve, truncations at each requested
/// bandwidth, full error reports on the evaluation grid, and the
/// bandwidth-explicit bound comparisons.
TorusExperimentResult run_torus_experiment(const TorusTestFunction& f,
                                           const TorusExperimentConfig& cfg = {});

// ---------------------------------------------------------------------------
// Spherical-harmonic pipeline on the sphere domain

struct SphereExperimentConfig {
  int L = 8;           // analysis degree (quadrature exact through 2L)
  int eval_bands = 48; // evaluation grid: eval_bands colatitudes x twice as many longitudes
};

/// One evaluation-grid point of the sphere experiment map.
struct SphereMapPoint {
  double theta = 0.0;
  double phi = 0.0;
  double linear_value_error = 0.0;
  double residual = 0.0;  // distance from the linear value to the model
  bool within_reach = true;
  double value_error = 0.0;  // NaN out of reach
};

struct SphereExperimentResult {
  std::string function_name;
  std::string model;
  int L = 0;
  double tau = 0.0;
  double sup_linear_value_error = 0.0;
  double sup_residual = 0.0;
  double sup_value_error = 0.0;  // over within-reach points
  long out_of_reach = 0;
  bool factor_two_ok = false;
  std::vector<SphereMapPoint> map;

  /// theta,phi,linear_value_error,residual,within_reach,value_error rows.
  std::string map_csv() const;
  nlohmann::json to_json() const;
};

/// Quadrature analysis of the field at degree L followed by evaluation and
/// projection on an equiangular grid, with the per-point residual map.
SphereExperimentResult run_sphere_experiment(const SphereTestFunction& f,
                                             const SphereExperimentConfig& cfg = {});

// ---------------------------------------------------------------------------
// Randomized bound verification across the model zoo

struct VerifyConfig {
  /// all | tangent-lipschitz | dp-deviation | commutator | curvature
  std::string bound = "all";
  long tangent_pairs = 10000;       // per model
  long deviation_trials = 1000;     // per model
  long commutator_trials = 100000;  // total across dimensions 2..9
  long curvature_trials = 2000;     // per model with a published reach
  double slack = 1e-8;
  double commutator_slack = 1e-12;  // the commutator identity is exact algebra
  std::uint64_t seed = 1;
  int threads = 1;
};

struct VerifyResult {
  std::vector<BoundCheckSummary> summaries;

  bool all_passed() const;  // zero violations everywhere
  nlohmann::json to_json() const;
};

/// Run the selected randomized checks over the shipped models (circle at
/// radii 1/2, 1, 2; the 2-sphere; the projective plane; the rotation group
/// where a sampled reach suffices). Throws Error for an unknown bound name.
VerifyResult run_verify(const VerifyConfig& cfg = {});

// ---------------------------------------------------------------------------
// Reach estimation driver

struct ReachExperimentResult {
  std::string model;
  long samples = 0;
  std::uint64_t seed = 0;
  ReachEstimate estimate;
  std::optional<double> expected;  // the model's published reach
  double relative_error = 0.0;     // NaN when no reach is published

  nlohmann::json to_json() const;
};

ReachExperimentResult run_reach_experiment(const std::string& model, long samples,
                                           std::uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Orientation denoising driver

struct DenoiseArtifacts {
  DenoiseResult result;
  CurvatureField smooth_curvature;
  CurvatureField fd_curvature;
  nlohmann::json stats;  // sizes, mask/inpaint counts, smoothing, anchor data
};

/// Denoise the grid (GCV-selected smoothing when none is given), attach both
/// curvature fields, and collect summary statistics. The inpainted-cell
/// count in `stats` is counted from the output, not assumed.
DenoiseArtifacts run_denoise(const OrientationGrid& grid,
                             std::optional<double> smoothing = std::nullopt);

}  // namespace mva
