#include <doctest.h>

#include <cmath>

#include "mva/orientation.hpp"

using namespace mva;

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

OrientationGrid identity_grid(long rows, long cols, const std::string& symmetry) {
  return OrientationGrid(rows, cols, 1.0, 1.0, symmetry);
}

std::string identity_csv_2x2() {
  return "i,j,qw,qx,qy,qz,mask\n"
         "0,0,1,0,0,0,0\n"
         "0,1,1,0,0,0,0\n"
         "1,0,1,0,0,0,0\n"
         "1,1,1,0,0,0,0\n";
}

}  // namespace

TEST_SUITE_BEGIN("orientation");

TEST_CASE("orientation grid stores rotations as unit quaternions") {
  OrientationGrid grid = identity_grid(2, 3, "C1");
  CHECK(grid.cell_count() == 6);
  CHECK(grid.valid_count() == 6);
  CHECK((grid.rotation(1, 2) - Eigen::Matrix3d::Identity()).norm() == 0.0);

  std::mt19937_64 rng = seeded_engine(42, 0);
  const Eigen::Matrix3d r = random_rotation(3, rng);
  grid.set_rotation(1, 2, r);
  CHECK((grid.rotation(1, 2) - r).norm() < 1e-14);
  CHECK(grid.quaternions.col(grid.index(1, 2)).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(grid.quaternions(0, grid.index(1, 2)) >= 0.0);

  CHECK_THROWS_AS(OrientationGrid(0, 3, 1.0, 1.0, "C1"), DimensionMismatch);
  CHECK_THROWS_AS(OrientationGrid(2, 2, -1.0, 1.0, "C1"), DimensionMismatch);
}

TEST_CASE("grid CSV parses a two-by-two identity file") {
  const OrientationGrid grid = parse_grid_csv(identity_csv_2x2());
  CHECK(grid.rows == 2);
  CHECK(grid.cols == 2);
  CHECK(grid.valid_count() == 4);
  for (long i = 0; i < 2; ++i)
    for (long j = 0; j < 2; ++j)
      CHECK((grid.rotation(i, j) - Eigen::Matrix3d::Identity()).norm() == 0.0);
}

TEST_CASE("grid CSV honors the mask column regardless of quaternion values") {
  const OrientationGrid grid = parse_grid_csv(
      "i,j,qw,qx,qy,qz,mask\n"
      "0,0,1,0,0,0,0\n"
      "0,1,0.5,0.5,0.5,0.5,1\n");
  CHECK(grid.rows == 1);
  CHECK(grid.cols == 2);
  CHECK(grid.valid(0, 0));
  CHECK(!grid.valid(0, 1));
  // Masked cells carry the identity placeholder, not the junk payload.
  CHECK(grid.quaternions.col(1) == Eigen::Vector4d(1, 0, 0, 0));
}

TEST_CASE("grid CSV normalizes non-unit quaternions") {
  const OrientationGrid grid = parse_grid_csv(
      "i,j,qw,qx,qy,qz,mask\n"
      "0,0,2,0,0,0,0\n");
  CHECK(grid.quaternions.col(0) == Eigen::Vector4d(1, 0, 0, 0));
}

TEST_CASE("grid CSV rejects malformed input") {
  CHECK_THROWS_AS(parse_grid_csv("x,y,qw,qx,qy,qz,mask\n0,0,1,0,0,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n0,0,1,0,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n0,0,abc,0,0,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n-1,0,1,0,0,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n0.5,0,1,0,0,0,0\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n0,0,1,0,0,0,2\n"), MalformedRow);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n0,0,0,0,0,0,0\n"), MalformedRow);
}

TEST_CASE("grid CSV rejects incomplete or duplicated rectangles") {
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n"
                                 "0,0,1,0,0,0,0\n"
                                 "0,1,1,0,0,0,0\n"
                                 "1,0,1,0,0,0,0\n"),
                  NonRectangular);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n"
                                 "0,0,1,0,0,0,0\n"
                                 "0,0,1,0,0,0,0\n"
                                 "1,0,1,0,0,0,0\n"
                                 "1,1,1,0,0,0,0\n"),
                  NonRectangular);
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n"), NonRectangular);
}

TEST_CASE("grid CSV requires at least one valid cell") {
  CHECK_THROWS_AS(parse_grid_csv("i,j,qw,qx,qy,qz,mask\n"
                                 "0,0,1,0,0,0,1\n"
                                 "0,1,1,0,0,0,1\n"),
                  AllMasked);
}

TEST_CASE("synthetic grids round-trip through CSV bit for bit") {
  const FieldSpec spec{4, 0.3, 21};
  const SyntheticGrid synth = synthesize_grid(6, 5, 1.0, 1.0, "O", spec, 2.0, 0.2, 7);
  CHECK(synth.noisy.valid_count() < synth.noisy.cell_count());

  const std::string csv = grid_to_csv(synth.noisy);
  const OrientationGrid parsed = parse_grid_csv(csv);
  CHECK(parsed.rows == synth.noisy.rows);
  CHECK(parsed.cols == synth.noisy.cols);
  CHECK((parsed.quaternions - synth.noisy.quaternions).cwiseAbs().maxCoeff() == 0.0);
  CHECK((parsed.valid == synth.noisy.valid).all());
  CHECK(grid_to_csv(parsed) == csv);
}

TEST_CASE("zero noise and zero mask reproduce the ground truth grid") {
  const FieldSpec spec{3, 0.25, 4};
  const SyntheticGrid synth = synthesize_grid(8, 7, 0.5, 0.5, "O", spec, 0.0, 0.0, 1);
  CHECK(synth.noisy.valid_count() == synth.noisy.cell_count());
  CHECK((synth.noisy.quaternions - synth.clean.quaternions).cwiseAbs().maxCoeff() == 0.0);
  CHECK(synth.kappa_true.defined.all());
}

TEST_CASE("a constant field specification has zero curvature truth") {
  const FieldSpec spec{1, 0.3, 9};
  const SyntheticGrid synth = synthesize_grid(5, 6, 1.0, 1.0, "O", spec, 0.0, 0.0, 2);
  for (long i = 0; i < 5; ++i)
    for (long j = 0; j < 6; ++j) {
      CHECK(synth.kappa_true.at(i, j).norm() == 0.0);
      CHECK((synth.clean.quaternions.col(synth.clean.index(i, j)) -
             synth.clean.quaternions.col(0))
                .norm() == 0.0);
    }
}

TEST_CASE("synthesize_grid validates its arguments") {
  const FieldSpec spec{4, 0.3, 1};
  CHECK_THROWS_AS(synthesize_grid(4, 4, 1.0, 1.0, "O", spec, -1.0, 0.0, 1), Error);
  CHECK_THROWS_AS(synthesize_grid(4, 4, 1.0, 1.0, "O", spec, 1.0, 1.0, 1), Error);
  CHECK_THROWS_AS(synthesize_grid(4, 4, 1.0, 1.0, "O", FieldSpec{0, 0.3, 1}, 0.0, 0.0, 1), Error);
  // Fields this wide would leave the anchored embedding's injectivity ball.
  CHECK_THROWS_AS(synthesize_grid(4, 4, 1.0, 1.0, "O", FieldSpec{4, 1.0, 1}, 0.0, 0.0, 1), Error);
}

TEST_CASE("mean misorientation of the noisy grid matches the requested noise level") {
  const double noise_deg = 2.0;
  const FieldSpec spec{4, 0.3, 5};
  const SyntheticGrid synth = synthesize_grid(40, 40, 1.0, 1.0, "O", spec, noise_deg, 0.0, 3);
  const double mean = mean_misorientation(synth.noisy, synth.clean);
  // The generator draws per-cell rotations whose mean angle is noise_deg by
  // construction; over 1600 cells the sample mean sits within a few percent.
  CHECK(mean == doctest::Approx(noise_deg * kPi / 180.0).epsilon(0.05));
  // Equal grids sit at the acos conditioning floor, far below any signal.
  CHECK(mean_misorientation(synth.clean, synth.clean) < 1e-6);
}

TEST_CASE("embedding maps identity cells to the flattened identity") {
  const OrientationGrid grid = identity_grid(3, 3, "O");
  const EmbeddedImage image = embed_grid(grid);
  CHECK(image.channels.size() == 9);
  for (int c = 0; c < 9; ++c) {
    const double expected = (c == 0 || c == 4 || c == 8) ? 1.0 : 0.0;
    CHECK((image.channels[static_cast<std::size_t>(c)].array() - expected).abs().maxCoeff() <
          1e-12);
  }
  CHECK((image.anchor - Eigen::Matrix3d::Identity()).norm() < 1e-12);
  CHECK(image.max_anchor_angle < 1e-7);
  CHECK(image.within_injectivity_ball);
}

TEST_CASE("cells equal to a symmetry element embed like the identity") {
  OrientationGrid grid = identity_grid(2, 2, "O");
  const Eigen::Matrix3d rz90 = symmetry_group("O").elements[1];
  REQUIRE(rotation_angle(rz90) > 0.1);  // a genuine non-identity element
  grid.set_rotation(1, 1, rz90);

  const EmbeddedImage image = embed_grid(grid);
  for (int c = 0; c < 9; ++c) {
    const Mat& channel = image.channels[static_cast<std::size_t>(c)];
    CHECK(std::abs(channel(1, 1) - channel(0, 0)) < 1e-12);
  }
}

TEST_CASE("embedding warns when orientations leave the injectivity ball") {
  // The Klein four-group {I, Rx(pi), Ry(pi), Rz(pi)} spreads its unit
  // quaternions over all four axes, so every candidate anchor leaves some
  // cell at least 2 acos(1/2) = 2pi/3 away -- beyond C1's pi/2 ball radius no
  // matter how the mean iteration re-centers.
  OrientationGrid grid = identity_grid(2, 2, "C1");
  grid.set_rotation(0, 1, exp_skew(skew(Eigen::Vector3d(kPi, 0, 0))));
  grid.set_rotation(1, 0, exp_skew(skew(Eigen::Vector3d(0, kPi, 0))));
  grid.set_rotation(1, 1, exp_skew(skew(Eigen::Vector3d(0, 0, kPi))));
  const EmbeddedImage image = embed_grid(grid);
  CHECK(image.max_anchor_angle > 0.5 * kPi);
  CHECK(!image.within_injectivity_ball);
}

TEST_CASE("embedding and finite differences ignore symmetry-equivalent relabeling") {
  const FieldSpec spec{3, 0.25, 5};
  const SyntheticGrid synth = synthesize_grid(8, 8, 1.0, 1.0, "O", spec, 0.0, 0.0, 1);
  const SymmetryGroup group = symmetry_group("O");

  OrientationGrid relabeled = synth.clean;
  for (long i = 0; i < relabeled.rows; ++i)
    for (long j = 0; j < relabeled.cols; ++j) {
      const std::size_t pick = static_cast<std::size_t>((i * 7 + j) % 24);
      relabeled.set_rotation(i, j, synth.clean.rotation(i, j) * group.elements[pick]);
    }

  const EmbeddedImage a = embed_grid(synth.clean);
  const EmbeddedImage b = embed_grid(relabeled);
  CHECK((a.anchor - b.anchor).norm() < 1e-10);
  for (int c = 0; c < 9; ++c)
    CHECK((a.channels[static_cast<std::size_t>(c)] - b.channels[static_cast<std::size_t>(c)])
              .cwiseAbs()
              .maxCoeff() < 1e-10);

  const CurvatureField fa = curvature_field_fd(synth.clean);
  const CurvatureField fb = curvature_field_fd(relabeled);
  REQUIRE(fa.defined.all());
  REQUIRE(fb.defined.all());
  double max_diff = 0.0;
  for (long i = 0; i < fa.rows; ++i)
    for (long j = 0; j < fa.cols; ++j)
      max_diff = std::max(max_diff, (fa.at(i, j) - fb.at(i, j)).norm());
  CHECK(max_diff < 1e-10);
}

TEST_CASE("smoothing with s=0 and no mask returns the input grid") {
  const FieldSpec spec{3, 0.25, 8};
  const SyntheticGrid synth = synthesize_grid(10, 8, 1.0, 1.0, "O", spec, 0.0, 0.0, 1);
  const DenoiseResult out = denoise_grid(synth.clean, 0.0);
  CHECK(out.grid.valid_count() == out.grid.cell_count());
  double max_diff = 0.0;
  for (long i = 0; i < out.grid.rows; ++i)
    for (long j = 0; j < out.grid.cols; ++j)
      max_diff = std::max(max_diff, (out.grid.rotation(i, j) - synth.clean.rotation(i, j)).norm());
  CHECK(max_diff < 1e-10);
  CHECK(out.gcv.scores.empty());
  CHECK(out.gcv.best_s == 0.0);
}

TEST_CASE("the pipeline is the identity on constant grids for any smoothing") {
  std::mt19937_64 rng = seeded_engine(17, 0);
  const Eigen::Matrix3d r = random_rotation(3, rng);
  OrientationGrid grid = identity_grid(6, 7, "C1");
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) grid.set_rotation(i, j, r);

  for (const double s : {0.0, 1.0, 1e4}) {
    const DenoiseResult out = denoise_grid(grid, s);
    double max_diff = 0.0;
    for (long i = 0; i < grid.rows; ++i)
      for (long j = 0; j < grid.cols; ++j)
        max_diff = std::max(max_diff, (out.grid.rotation(i, j) - grid.rotation(i, j)).norm());
    CHECK(max_diff < 1e-10);
  }
}

TEST_CASE("generalized cross-validation denoises a noisy masked grid") {
  const FieldSpec spec{4, 0.3, 6};
  const SyntheticGrid synth = synthesize_grid(32, 32, 1.0, 1.0, "O", spec, 2.0, 0.05, 11);
  REQUIRE(synth.noisy.valid_count() < synth.noisy.cell_count());

  const DenoiseResult out = denoise_grid(synth.noisy, std::nullopt);
  CHECK(out.gcv.scores.size() == 20);
  CHECK(out.grid.valid_count() == out.grid.cell_count());  // masked cells inpainted

  const double raw = mean_misorientation(synth.noisy, synth.clean);
  const double denoised = mean_misorientation(out.grid, synth.clean);
  CHECK(denoised < raw);
  // The smoothed field should recover most of the 2-degree noise, not just
  // edge past the raw error.
  CHECK(denoised < 0.5 * raw);
}

TEST_CASE("projection failure surfaces as ProjectionFailed") {
  EmbeddedImage image;
  image.rows = 4;
  image.cols = 4;
  image.symmetry = "C1";
  image.channels.assign(9, Mat::Zero(4, 4));
  image.valid = BoolGrid::Constant(4, 4, true);
  CHECK_THROWS_AS(smooth_and_project(image, 0.0), ProjectionFailed);
}

TEST_CASE("curvature of a constant field vanishes") {
  std::mt19937_64 rng = seeded_engine(23, 1);
  const Eigen::Matrix3d r = random_rotation(3, rng);
  OrientationGrid grid = identity_grid(8, 8, "C1");
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) grid.set_rotation(i, j, r);

  const DenoiseResult out = denoise_grid(grid, 1.0);
  CHECK(curvature_from_smooth(out.series, out.grid, 3, 4).norm() < 1e-10);

  const CurvatureField field = curvature_field_from_smooth(out);
  REQUIRE(field.defined.all());
  for (long i = 0; i < field.rows; ++i)
    for (long j = 0; j < field.cols; ++j) CHECK(field.at(i, j).norm() < 1e-10);
}

TEST_CASE("the twist field recovers its curvature from the smoothed series") {
  const double alpha = 0.01;
  const OrientationGrid grid = twist_grid(64, 64, 1.0, 1.0, alpha, "O");
  const DenoiseResult out = denoise_grid(grid, std::nullopt);
  const CurvatureField field = curvature_field_from_smooth(out);
  REQUIRE(field.defined.all());

  // The cosine-series derivative has even-extension artifacts at the grid
  // boundary (up to ~30% there), so the twist-rate check applies an 8-cell
  // margin along the varying axis; see the finite-difference cases for the
  // boundary behavior. The other tensor entries stay at machine noise
  // because the artifact lies in the twist plane.
  double max_rel = 0.0, max_other = 0.0;
  for (long i = 0; i < field.rows; ++i)
    for (long j = 0; j < field.cols; ++j) {
      const Eigen::Matrix<double, 3, 2>& k = field.at(i, j);
      if (i >= 8 && i < field.rows - 8)
        max_rel = std::max(max_rel, std::abs(k(2, 0) - alpha) / alpha);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 2; ++b)
          if (!(a == 2 && b == 0)) max_other = std::max(max_other, std::abs(k(a, b)));
    }
  CHECK(max_rel < 0.02);
  CHECK(max_other < 1e-8);
}

TEST_CASE("finite differences recover the twist rate exactly") {
  const double alpha = 0.01;
  const OrientationGrid grid = twist_grid(16, 5, 1.0, 1.0, alpha, "O");

  const Eigen::Matrix<double, 3, 2> interior = curvature_fd(grid, 5, 2);
  CHECK(interior(2, 0) == doctest::Approx(alpha).epsilon(1e-9));

  // One-sided stencils at the boundary are exact too, because steps along a
  // fixed axis commute.
  const Eigen::Matrix<double, 3, 2> top = curvature_fd(grid, 0, 0);
  const Eigen::Matrix<double, 3, 2> bottom = curvature_fd(grid, 15, 4);
  CHECK(top(2, 0) == doctest::Approx(alpha).epsilon(1e-9));
  CHECK(bottom(2, 0) == doctest::Approx(alpha).epsilon(1e-9));

  Eigen::Matrix<double, 3, 2> others = interior;
  others(2, 0) = 0.0;
  CHECK(others.norm() < 1e-12);
}

TEST_CASE("finite differences degrade to one-sided stencils next to masks") {
  const double alpha = 0.01;
  OrientationGrid grid = twist_grid(5, 4, 1.0, 1.0, alpha, "O");
  grid.valid(3, 1) = false;
  const Eigen::Matrix<double, 3, 2> k = curvature_fd(grid, 2, 1);
  CHECK(k(2, 0) == doctest::Approx(alpha).epsilon(1e-9));
}

TEST_CASE("finite differences report unusable stencils as MaskedNeighbor") {
  OrientationGrid masked_center = identity_grid(3, 3, "C1");
  masked_center.valid(1, 1) = false;
  CHECK_THROWS_AS(curvature_fd(masked_center, 1, 1), MaskedNeighbor);

  const OrientationGrid thin = identity_grid(1, 3, "C1");
  CHECK_THROWS_AS(curvature_fd(thin, 0, 1), MaskedNeighbor);

  OrientationGrid blocked = identity_grid(3, 3, "C1");
  blocked.valid(0, 1) = false;
  blocked.valid(2, 1) = false;
  CHECK_THROWS_AS(curvature_fd(blocked, 1, 1), MaskedNeighbor);

  CHECK_THROWS_AS(curvature_fd(blocked, -1, 0), DimensionMismatch);
}

TEST_CASE("the finite-difference field marks exactly the usable cells") {
  const FieldSpec spec{3, 0.2, 12};
  const SyntheticGrid synth = synthesize_grid(12, 10, 1.0, 1.0, "O", spec, 1.0, 0.3, 19);
  const OrientationGrid& g = synth.noisy;
  const CurvatureField field = curvature_field_fd(g);

  for (long i = 0; i < g.rows; ++i)
    for (long j = 0; j < g.cols; ++j) {
      const bool axis0 = (i + 1 < g.rows && g.valid(i + 1, j)) || (i > 0 && g.valid(i - 1, j));
      const bool axis1 = (j + 1 < g.cols && g.valid(i, j + 1)) || (j > 0 && g.valid(i, j - 1));
      CHECK(field.defined(i, j) == (g.valid(i, j) && axis0 && axis1));
    }
}

TEST_CASE("a half-turn relative rotation is rejected as ambiguous") {
  OrientationGrid grid = identity_grid(2, 1, "C1");
  grid.set_rotation(1, 0, exp_skew(skew(Eigen::Vector3d(0, 0, kPi))));
  CHECK_THROWS_AS(curvature_fd(grid, 0, 0), AmbiguousLog);
}

TEST_CASE("finite-difference curvature converges at second order") {
  const FieldSpec spec{3, 0.25, 9};
  // Same continuous field sampled at two resolutions over the same physical
  // extent; the interior stencil is central, so halving the spacing should
  // cut the worst-cell error by about four.
  const SyntheticGrid coarse = synthesize_grid(48, 48, 1.0, 1.0, "O", spec, 0.0, 0.0, 1);
  const SyntheticGrid fine = synthesize_grid(96, 96, 0.5, 0.5, "O", spec, 0.0, 0.0, 1);

  const auto interior_max_err = [](const SyntheticGrid& synth) {
    const CurvatureField fd = curvature_field_fd(synth.noisy);
    double worst = 0.0;
    for (long i = 1; i + 1 < fd.rows; ++i)
      for (long j = 1; j + 1 < fd.cols; ++j)
        worst = std::max(worst, (fd.at(i, j) - synth.kappa_true.at(i, j)).norm());
    return worst;
  };

  const double coarse_err = interior_max_err(coarse);
  const double fine_err = interior_max_err(fine);
  CHECK(coarse_err > 0.0);
  CHECK(coarse_err / fine_err >= 3.5);
}

TEST_CASE("smoothing beats raw finite differences on noisy masked data") {
  const FieldSpec spec{4, 0.3, 10};
  const SyntheticGrid synth = synthesize_grid(48, 48, 1.0, 1.0, "O", spec, 2.0, 0.05, 13);

  const CurvatureField fd = curvature_field_fd(synth.noisy);
  const DenoiseResult out = denoise_grid(synth.noisy, std::nullopt);
  CurvatureField smooth = curvature_field_from_smooth(out);
  // Compare both estimates over the same cells (those where the raw stencil
  // exists).
  smooth.defined = smooth.defined && fd.defined;

  const double rms_fd = kappa_rms_error(fd, synth.kappa_true);
  const double rms_smooth = kappa_rms_error(smooth, synth.kappa_true);
  CHECK(rms_fd > 0.0);
  CHECK(rms_smooth > 0.0);
  CHECK(rms_smooth <= 0.5 * rms_fd);
}

TEST_CASE("per-cell curvature operations agree with the field drivers") {
  const FieldSpec spec{3, 0.25, 14};
  const SyntheticGrid synth = synthesize_grid(10, 9, 1.0, 1.0, "O", spec, 1.0, 0.0, 5);

  const DenoiseResult out = denoise_grid(synth.noisy, 1e-3);
  const CurvatureField smooth = curvature_field_from_smooth(out);
  CHECK((curvature_from_smooth(out.series, out.grid, 4, 5) - smooth.at(4, 5)).norm() < 1e-12);

  const CurvatureField fd = curvature_field_fd(synth.noisy);
  CHECK((curvature_fd(synth.noisy, 4, 5) - fd.at(4, 5)).norm() < 1e-14);
}

TEST_CASE("curvature CSV lists only defined cells") {
  const OrientationGrid grid = twist_grid(4, 3, 1.0, 1.0, 0.01, "C1");
  CurvatureField field = curvature_field_fd(grid);
  field.defined(2, 1) = false;

  const std::string csv = field.to_csv();
  std::size_t lines = 0;
  for (const char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + static_cast<std::size_t>(field.defined.count()));
  CHECK(csv.rfind("i,j,k11,k12,k21,k22,k31,k32\n", 0) == 0);
  CHECK(csv.find("\n0,0,") != std::string::npos);
  CHECK(csv.find("\n2,1,") == std::string::npos);
}

TEST_CASE("kappa_rms_error guards its inputs") {
  CurvatureField a(2, 2), b(3, 2);
  CHECK_THROWS_AS(kappa_rms_error(a, b), DimensionMismatch);
  CurvatureField c(2, 2);
  CHECK_THROWS_AS(kappa_rms_error(a, c), AllMasked);  // nothing defined yet
}

TEST_CASE("denoising runs are deterministic") {
  const FieldSpec spec{4, 0.3, 2};
  const SyntheticGrid first = synthesize_grid(16, 16, 1.0, 1.0, "O", spec, 2.0, 0.1, 29);
  const SyntheticGrid second = synthesize_grid(16, 16, 1.0, 1.0, "O", spec, 2.0, 0.1, 29);
  CHECK(grid_to_csv(first.noisy) == grid_to_csv(second.noisy));

  const DenoiseResult out1 = denoise_grid(first.noisy, std::nullopt);
  const DenoiseResult out2 = denoise_grid(second.noisy, std::nullopt);
  CHECK(out1.gcv.best_s == out2.gcv.best_s);
  CHECK(grid_to_csv(out1.grid) == grid_to_csv(out2.grid));
}

TEST_SUITE_END();
