#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mva/manifold.hpp"

namespace mva {

/// Result of the pairwise reach estimate.
struct ReachEstimate {
  double value = 0.0;
  long sample_count = 0;
  /// Ordered pair (x index, y index) attaining the minimum; the tangent space
  /// of the second point enters the ratio.
  std::pair<long, long> argmin_pair{-1, -1};
  long skipped_pairs = 0;

  nlohmann::json to_json() const;
};

/// Estimate the reach of the embedded model as the minimum over ordered
/// sample pairs (x, y) of |x - y|^2 / (2 |(I - P_{T_y})(x - y)|). Pairs whose
/// normal component falls below 1e-12 carry no curvature information and are
/// skipped. The estimate can only decrease as samples are added.
///
/// Throws InsufficientSamples when fewer than two samples are given or every
/// pair is degenerate.
ReachEstimate estimate_reach(const Manifold& model, const Mat& samples, int threads = 1);

/// Convenience overload drawing `n_samples` model points from `seed`.
ReachEstimate estimate_reach(const Manifold& model, long n_samples, std::uint64_t seed,
                             int threads = 1);

/// One evaluated instance of a bound: left side, right side, and the inputs
/// that produced it (layout documented per check).
struct BoundCheckRecord {
  double lhs = 0.0;
  double rhs = 0.0;
  std::vector<double> inputs;

  double margin() const { return rhs - lhs; }
  double ratio() const { return rhs > 0 ? lhs / rhs : 0.0; }
};

/// Aggregate of a randomized bound check.
struct BoundCheckSummary {
  std::string bound;
  std::string model;
  long trials = 0;
  long violations = 0;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double slack = 0.0;
  BoundCheckRecord worst;  // record attaining max_ratio

  nlohmann::json to_json() const;
};

/// Tolerance used when a check needs a reach value: the model's exact reach
/// when known, otherwise an internal 1500-sample estimate derived from seed.
double reach_for_checks(const Manifold& model, std::uint64_t seed);

/// Verify |P_{T_m} - P_{T_z}|_2 <= |m - z|_2 / tau over random on-manifold
/// pairs. When `max_step` is finite the second point is drawn a small
/// retraction step from the first, which concentrates pairs at geodesic
/// distance <= max_step (sharpness regime). Record inputs: m then z.
BoundCheckSummary check_tangent_lipschitz(const Manifold& model, long pairs, std::uint64_t seed,
                                          double slack = 1e-8,
                                          std::optional<double> max_step = std::nullopt,
                                          std::optional<double> tau_override = std::nullopt,
                                          int threads = 1);

/// Verify both deviation bounds for the projection differential at tube
/// points x = m + v against the tangent projector at a second point z:
///   |dP(x) - dP(z)|  <=  |m - z|/tau + |v|/(tau - |v|)            (two-term)
///   |dP(x) - dP(z)|  <=  (2/tau + 1/(tau - |v|)) |x - z|          (combined)
/// Normal offsets are drawn with |v| <= max_normal_fraction * tau. Returns
/// one summary per inequality. Record inputs: m, v, z.
std::vector<BoundCheckSummary> check_dP_deviation(const Manifold& model, long trials,
                                                  std::uint64_t seed,
                                                  double max_normal_fraction = 0.6,
                                                  double slack = 1e-8,
                                                  std::optional<double> tau_override = std::nullopt,
                                                  int threads = 1);

/// Verify |TR - RT|_2 <= |I - R|_2 for random orthogonal projectors T of any
/// rank and random rotations R in the given dimension. Record inputs: T
/// row-major, then R row-major.
BoundCheckSummary check_commutator(int dim, long trials, std::uint64_t seed, double slack = 1e-12,
                                   int threads = 1);

/// Verify |B_n|_2 <= |n|/tau for random unit normals across random base
/// points. Record inputs: m then n.
BoundCheckSummary check_curvature_bound(const Manifold& model, long trials, std::uint64_t seed,
                                        double slack = 1e-8,
                                        std::optional<double> tau_override = std::nullopt,
                                        int threads = 1);

}  // namespace mva
