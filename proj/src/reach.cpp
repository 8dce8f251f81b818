#include "mva/reach.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mva {

namespace {

void append(std::vector<double>& out, const Vec& v) {
  out.insert(out.end(), v.data(), v.data() + v.size());
}

void append(std::vector<double>& out, const Mat& m) {
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
}

/// Fold per-trial records into a summary, counting violations against
/// lhs <= rhs + slack and tracking the worst ratio.
struct SummaryBuilder {
  BoundCheckSummary summary;

  explicit SummaryBuilder(std::string bound, std::string model, double slack) {
    summary.bound = std::move(bound);
    summary.model = std::move(model);
    summary.slack = slack;
  }

  void add(BoundCheckRecord record) {
    summary.trials += 1;
    if (record.lhs > record.rhs + summary.slack) summary.violations += 1;
    const double ratio = record.ratio();
    if (summary.trials == 1) summary.min_ratio = ratio;
    summary.min_ratio = std::min(summary.min_ratio, ratio);
    if (ratio > summary.max_ratio || summary.trials == 1) {
      summary.max_ratio = ratio;
      summary.worst = std::move(record);
    }
  }
};

}  // namespace

nlohmann::json ReachEstimate::to_json() const {
  return nlohmann::json{{"estimate", value},
                        {"samples", sample_count},
                        {"argmin_pair", {argmin_pair.first, argmin_pair.second}},
                        {"skipped_pairs", skipped_pairs}};
}

nlohmann::json BoundCheckSummary::to_json() const {
  return nlohmann::json{{"bound", bound},
                        {"model", model},
                        {"trials", trials},
                        {"violations", violations},
                        {"max_ratio", max_ratio},
                        {"min_ratio", min_ratio},
                        {"slack", slack},
                        {"argmax_inputs", worst.inputs},
                        {"argmax_lhs", worst.lhs},
                        {"argmax_rhs", worst.rhs}};
}

ReachEstimate estimate_reach(const Manifold& model, const Mat& samples, int threads) {
  const long n = samples.cols();
  if (n < 2) throw InsufficientSamples("estimate_reach: need at least two samples");
  if (samples.rows() != model.ambient_dim())
    throw DimensionMismatch("estimate_reach: sample dimension mismatch");

  // Tangent bases are reused across the ordered sweep, so compute them once.
  std::vector<Mat> bases(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](long j) {
    bases[static_cast<std::size_t>(j)] = model.tangent_basis(samples.col(j)).vectors;
  });

  struct Local {
    double best = std::numeric_limits<double>::infinity();
    long best_x = -1;
    long best_y = -1;
    long skipped = 0;
  };
  std::vector<Local> locals(static_cast<std::size_t>(n));

  parallel_for(n, threads, [&](long y) {
    Local& local = locals[static_cast<std::size_t>(y)];
    const Mat& ty = bases[static_cast<std::size_t>(y)];
    const Vec base = samples.col(y);
    const Mat diffs = samples.colwise() - base;
    const Vec sq = diffs.colwise().squaredNorm();
    // Form the normal residual explicitly instead of sqrt(sq - tansq): the
    // subtraction of squared norms cancels catastrophically for the
    // near-tangential close pairs that decide the minimum.
    const Mat residual = diffs - ty * (ty.transpose() * diffs);
    const Vec normalsq = residual.colwise().squaredNorm();
    for (long x = 0; x < diffs.cols(); ++x) {
      if (x == y) continue;
      const double normal_part = std::sqrt(normalsq[x]);
      if (normal_part < 1e-12) {
        local.skipped += 1;
        continue;
      }
      const double ratio = sq[x] / (2.0 * normal_part);
      if (ratio < local.best) {
        local.best = ratio;
        local.best_x = x;
        local.best_y = y;
      }
    }
  });

  ReachEstimate estimate;
  estimate.sample_count = n;
  estimate.value = std::numeric_limits<double>::infinity();
  for (const Local& local : locals) {
    estimate.skipped_pairs += local.skipped;
    if (local.best < estimate.value) {
      estimate.value = local.best;
      estimate.argmin_pair = {local.best_x, local.best_y};
    }
  }
  if (!std::isfinite(estimate.value))
    throw InsufficientSamples("estimate_reach: no pair with a usable normal component");
  return estimate;
}

ReachEstimate estimate_reach(const Manifold& model, long n_samples, std::uint64_t seed,
                             int threads) {
  Mat samples(model.ambient_dim(), n_samples);
  auto rng = seeded_engine(seed, 0x7ea1);
  for (long j = 0; j < n_samples; ++j) samples.col(j) = model.random_point(rng);
  return estimate_reach(model, samples, threads);
}

double reach_for_checks(const Manifold& model, std::uint64_t seed) {
  if (model.reach()) return *model.reach();
  return estimate_reach(model, 1500, splitmix64(seed ^ 0x5eed), 1).value;
}

BoundCheckSummary check_tangent_lipschitz(const Manifold& model, long pairs, std::uint64_t seed,
                                          double slack, std::optional<double> max_step,
                                          std::optional<double> tau_override, int threads) {
  const double tau = tau_override ? *tau_override : reach_for_checks(model, seed);
  std::vector<BoundCheckRecord> records(static_cast<std::size_t>(pairs));
  parallel_for(pairs, threads, [&](long i) {
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(i));
    const Vec m = model.random_point(rng);
    Vec z;
    if (max_step) {
      // Step along a random tangent direction and retract; for steps much
      // smaller than tau the geodesic distance matches the step closely.
      const TangentBasis frame = model.tangent_basis(m);
      const Vec dir = Vec(frame.vectors * random_unit(model.dim(), rng));
      std::uniform_real_distribution<double> unif(0.0, *max_step);
      z = model.project(m + unif(rng) * dir);
    } else {
      z = model.random_point(rng);
    }
    BoundCheckRecord record;
    record.lhs = spectral_norm_sym(tangent_projector(model, m) - tangent_projector(model, z));
    record.rhs = (m - z).norm() / tau;
    append(record.inputs, m);
    append(record.inputs, z);
    records[static_cast<std::size_t>(i)] = std::move(record);
  });
  SummaryBuilder builder("tangent-lipschitz", model.name(), slack);
  for (auto& r : records)
    if (r.rhs > 0) builder.add(std::move(r));
  return builder.summary;
}

std::vector<BoundCheckSummary> check_dP_deviation(const Manifold& model, long trials,
                                                  std::uint64_t seed, double max_normal_fraction,
                                                  double slack,
                                                  std::optional<double> tau_override, int threads) {
  const double tau = tau_override ? *tau_override : reach_for_checks(model, seed);
  std::vector<BoundCheckRecord> two_term(static_cast<std::size_t>(trials));
  std::vector<BoundCheckRecord> combined(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long i) {
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(i));
    const Vec m = model.random_point(rng);
    const Vec z = model.random_point(rng);
    const Vec n = random_normal_vector(model, m, rng);
    std::uniform_real_distribution<double> unif(0.0, max_normal_fraction * tau);
    const Vec v = unif(rng) * n;
    const Mat dp_tube = dprojection(model, m + v);
    const Mat dp_z = tangent_projector(model, z);
    const double lhs = spectral_norm_sym(dp_tube - dp_z);

    BoundCheckRecord a;
    a.lhs = lhs;
    a.rhs = (m - z).norm() / tau + v.norm() / (tau - v.norm());
    append(a.inputs, m);
    append(a.inputs, v);
    append(a.inputs, z);
    BoundCheckRecord b;
    b.lhs = lhs;
    b.rhs = (2.0 / tau + 1.0 / (tau - v.norm())) * (m + v - z).norm();
    b.inputs = a.inputs;
    two_term[static_cast<std::size_t>(i)] = std::move(a);
    combined[static_cast<std::size_t>(i)] = std::move(b);
  });
  SummaryBuilder two_builder("dp-deviation-two-term", model.name(), slack);
  SummaryBuilder comb_builder("dp-deviation-combined", model.name(), slack);
  for (auto& r : two_term) two_builder.add(std::move(r));
  for (auto& r : combined) comb_builder.add(std::move(r));
  return {two_builder.summary, comb_builder.summary};
}

BoundCheckSummary check_commutator(int dim, long trials, std::uint64_t seed, double slack,
                                   int threads) {
  if (dim < 2) throw DimensionMismatch("check_commutator: dimension must be at least 2");
  std::vector<BoundCheckRecord> records(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long i) {
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<int> rank(1, dim - 1);
    const Mat t = random_projector(dim, rank(rng), rng);
    const Mat r = random_rotation(dim, rng);
    BoundCheckRecord record;
    record.lhs = spectral_norm(t * r - r * t);
    record.rhs = spectral_norm(Mat::Identity(dim, dim) - r);
    append(record.inputs, t);
    append(record.inputs, r);
    records[static_cast<std::size_t>(i)] = std::move(record);
  });
  SummaryBuilder builder("commutator", "dim" + std::to_string(dim), slack);
  for (auto& r : records) builder.add(std::move(r));
  return builder.summary;
}

BoundCheckSummary check_curvature_bound(const Manifold& model, long trials, std::uint64_t seed,
                                        double slack, std::optional<double> tau_override,
                                        int threads) {
  const double tau = tau_override ? *tau_override : reach_for_checks(model, seed);
  std::vector<BoundCheckRecord> records(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](long i) {
    auto rng = seeded_engine(seed, static_cast<std::uint64_t>(i));
    const Vec m = model.random_point(rng);
    const Vec n = random_normal_vector(model, m, rng);
    BoundCheckRecord record;
    record.lhs = spectral_norm_sym(model.shape_operator(m, n).matrix);
    record.rhs = n.norm() / tau;
    append(record.inputs, m);
    append(record.inputs, n);
    records[static_cast<std::size_t>(i)] = std::move(record);
  });
  SummaryBuilder builder("curvature", model.name(), slack);
  for (auto& r : records) builder.add(std::move(r));
  return builder.summary;
}

}  // namespace mva
