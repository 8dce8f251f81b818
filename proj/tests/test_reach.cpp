#include <doctest.h>

#include <cmath>

#include "mva/models.hpp"
#include "mva/reach.hpp"

using namespace mva;

TEST_SUITE_BEGIN("reach");

TEST_CASE("sphere reach estimate is exact for any sample set") {
  const SphereModel sphere(3);
  const ReachEstimate est = estimate_reach(sphere, 500, 1);
  CHECK(est.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(est.sample_count == 500);
  CHECK(est.argmin_pair.first >= 0);
}

TEST_CASE("circle reach estimate recovers the radius") {
  // The pair ratio is identically r, but stored samples sit on the circle
  // only up to eps*r rounding; for the closest pair (gap ~1e-4 rad at 300
  // samples) that jitter enters the normal component as ~4*eps/gap^2 ~ 5e-8
  // relative.  1e-7 is the honest floor here, not a loose tolerance.
  for (double r : {0.5, 1.0, 2.0}) {
    CAPTURE(r);
    const CircleModel circle(r);
    CHECK(estimate_reach(circle, 300, 2).value == doctest::Approx(r).epsilon(1e-7));
  }
}

TEST_CASE("projective plane reach estimate") {
  const ProjectiveModel rp2;
  const ReachEstimate est = estimate_reach(rp2, 800, 3);
  CHECK(est.value == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("rotation group reach estimate lands at sqrt(2)") {
  // No ground truth ships with the model; this pins the estimator's sampled
  // value as a regression statistic.
  const RotationModel so3;
  const ReachEstimate est = estimate_reach(so3, 500, 4);
  CHECK(est.value > 1.40);
  CHECK(est.value < 1.42);
}

TEST_CASE("estimate never increases when samples are added") {
  const ProjectiveModel rp2;
  auto rng = seeded_engine(50, 0);
  Mat samples(9, 200);
  for (int j = 0; j < 200; ++j) samples.col(j) = rp2.random_point(rng);
  const double on_subset = estimate_reach(rp2, Mat(samples.leftCols(100))).value;
  const double on_all = estimate_reach(rp2, samples).value;
  CHECK(on_all <= on_subset + 1e-15);
}

TEST_CASE("degenerate inputs are rejected") {
  const SphereModel sphere(3);
  auto rng = seeded_engine(51, 0);
  CHECK_THROWS_AS(estimate_reach(sphere, Mat(sphere.random_point(rng))), InsufficientSamples);
  Mat twice(3, 2);
  twice.col(0) = sphere.random_point(rng);
  twice.col(1) = twice.col(0);
  CHECK_THROWS_AS(estimate_reach(sphere, twice), InsufficientSamples);
}

TEST_CASE("threaded sweep matches the serial sweep") {
  const SphereModel sphere(4);
  auto rng = seeded_engine(52, 0);
  Mat samples(4, 120);
  for (int j = 0; j < 120; ++j) samples.col(j) = sphere.random_point(rng);
  const ReachEstimate serial = estimate_reach(sphere, samples, 1);
  const ReachEstimate threaded = estimate_reach(sphere, samples, 4);
  CHECK(serial.value == threaded.value);
  CHECK(serial.argmin_pair == threaded.argmin_pair);
}

TEST_CASE("tangent projector difference obeys the Lipschitz bound") {
  for (const auto& model : {make_model("sphere2"), make_model("rp2"), make_model("circle")}) {
    CAPTURE(model->name());
    const BoundCheckSummary summary = check_tangent_lipschitz(*model, 2000, 7);
    CHECK(summary.violations == 0);
    CHECK(summary.trials == 2000);
    CHECK(summary.max_ratio <= 1.0 + 1e-10);
  }
}

TEST_CASE("the Lipschitz bound is sharp on the circle at short distances") {
  const CircleModel circle(1.0);
  const BoundCheckSummary summary =
      check_tangent_lipschitz(circle, 2000, 8, 1e-8, /*max_step=*/0.01);
  CHECK(summary.violations == 0);
  CHECK(summary.min_ratio >= 0.999);
}

TEST_CASE("projection differential deviation bounds hold across the zoo") {
  for (const auto& model : {make_model("sphere2"), make_model("rp2"), make_model("circle"),
                            make_model("so3")}) {
    CAPTURE(model->name());
    const auto summaries = check_dP_deviation(*model, 200, 9);
    REQUIRE(summaries.size() == 2);
    for (const auto& s : summaries) {
      CAPTURE(s.bound);
      CHECK(s.violations == 0);
      CHECK(s.trials == 200);
    }
  }
}

TEST_CASE("deviation bound worked example on the sphere") {
  const SphereModel sphere(3);
  Vec x(3), z(3);
  x << 1.5, 0, 0;  // m + v with m = e1, v = 0.5 e1
  z << 0, 1, 0;
  const Mat lhs_mat = dprojection(sphere, x) - tangent_projector(sphere, z);
  const double lhs = spectral_norm_sym(lhs_mat);
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-12));
  const double rhs_two_term = std::sqrt(2.0) / 1.0 + 0.5 / (1.0 - 0.5);
  CHECK(lhs <= rhs_two_term);
  CHECK(rhs_two_term == doctest::Approx(std::sqrt(2.0) + 1.0).epsilon(1e-15));
}

TEST_CASE("commutator bound holds in all tested dimensions") {
  for (int dim = 2; dim <= 9; ++dim) {
    CAPTURE(dim);
    const BoundCheckSummary summary = check_commutator(dim, 2000, 10);
    CHECK(summary.violations == 0);
    CHECK(summary.max_ratio <= 1.0 + 1e-12);
  }
}

TEST_CASE("commutator worked example in dimension 2") {
  Mat t(2, 2), r(2, 2);
  t << 1, 0, 0, 0;
  r << 0, -1, 1, 0;  // quarter turn
  CHECK(spectral_norm(t * r - r * t) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(spectral_norm(Mat::Identity(2, 2) - r) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("curvature bound holds and is attained on the sphere") {
  const SphereModel sphere(3);
  const BoundCheckSummary summary = check_curvature_bound(sphere, 200, 11);
  CHECK(summary.violations == 0);
  CHECK(summary.max_ratio == doctest::Approx(1.0).epsilon(1e-10));

  const ProjectiveModel rp2;
  const BoundCheckSummary rp2_summary = check_curvature_bound(rp2, 200, 12);
  CHECK(rp2_summary.violations == 0);
  CHECK(rp2_summary.max_ratio <= 1.0 + 1e-8);
}

TEST_CASE("summaries serialize the fields downstream tooling reads") {
  const SphereModel sphere(3);
  const auto json = check_curvature_bound(sphere, 10, 13).to_json();
  for (const char* key : {"bound", "model", "trials", "violations", "max_ratio", "argmax_inputs"})
    CHECK(json.contains(key));
  const auto reach_json = estimate_reach(sphere, 50, 14).to_json();
  for (const char* key : {"estimate", "samples", "argmin_pair"}) CHECK(reach_json.contains(key));
}

TEST_SUITE_END();
