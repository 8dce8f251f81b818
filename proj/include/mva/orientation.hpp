#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mva/smoothing.hpp"
#include "mva/symmetry.hpp"

namespace mva {

/// A rectangular map of lattice orientations. Each cell holds either a unit
/// quaternion (w, x, y, z) or a no-data flag; `symmetry` names the crystal
/// point group so a cell reads as a coset R * S rather than a single rotation.
/// Cells are stored row-major: cell (i, j) lives at column i * cols + j.
struct OrientationGrid {
  long rows = 0;
  long cols = 0;
  double spacing_x = 1.0;  ///< length per step of the first index
  double spacing_y = 1.0;  ///< length per step of the second index
  std::string symmetry = "C1";
  Mat quaternions;  ///< 4 x (rows * cols), columns (w, x, y, z)
  BoolGrid valid;   ///< true where data is present

  OrientationGrid() = default;
  OrientationGrid(long rows, long cols, double spacing_x, double spacing_y,
                  std::string symmetry);

  long index(long i, long j) const { return i * cols + j; }
  long cell_count() const { return rows * cols; }
  long valid_count() const { return valid.count(); }

  Eigen::Matrix3d rotation(long i, long j) const;

  /// Stores r as a unit quaternion with nonnegative scalar part.
  void set_rotation(long i, long j, const Eigen::Matrix3d& r);
};

/// Parses the grid CSV format: header "i,j,qw,qx,qy,qz,mask", one row per
/// cell, mask 1 flagging a no-data cell. Rows may arrive in any order but
/// must tile a complete rectangle exactly once. Quaternions are normalized;
/// already-unit values (within 1e-12 of unit square norm) are kept bit for
/// bit so that write -> parse round-trips exactly. Spacing and symmetry are
/// not part of the file; callers set them afterwards. Throws MalformedRow,
/// NonRectangular, or AllMasked.
OrientationGrid parse_grid_csv(const std::string& text);

/// parse_grid_csv applied to the contents of a file.
OrientationGrid ingest_grid(const std::string& path);

/// Inverse of parse_grid_csv; masked cells are written as the identity
/// quaternion with mask=1. Row-major cell order, %.17g values.
std::string grid_to_csv(const OrientationGrid& grid);
void write_grid_csv(const std::string& path, const OrientationGrid& grid);

/// Per-cell curvature of an orientation map: column a of kappa(i, j) holds
/// the skew-basis coordinates of R^T dR along grid axis a, in radians per
/// length unit. `defined` marks cells where the estimate exists.
struct CurvatureField {
  long rows = 0;
  long cols = 0;
  std::vector<Eigen::Matrix<double, 3, 2>> kappa;  ///< row-major, rows*cols
  BoolGrid defined;

  CurvatureField() = default;
  CurvatureField(long rows, long cols);

  const Eigen::Matrix<double, 3, 2>& at(long i, long j) const;
  Eigen::Matrix<double, 3, 2>& at(long i, long j);

  /// CSV with header "i,j,k11,k12,k21,k22,k31,k32", defined cells only,
  /// row-major order. kab is the skew-coordinate a along grid axis b.
  std::string to_csv() const;
};

/// Root-mean-square Frobenius difference between two curvature fields over
/// the cells where both are defined. Throws DimensionMismatch on shape
/// mismatch and AllMasked when no cell is common.
double kappa_rms_error(const CurvatureField& a, const CurvatureField& b);

/// Mean misorientation angle (modulo a's symmetry group) over cells valid in
/// both grids. Throws DimensionMismatch on shape mismatch and AllMasked when
/// no common valid cell exists.
double mean_misorientation(const OrientationGrid& a, const OrientationGrid& b);

/// A band-limited rotation-valued test field on the unit square:
///   R(xi) = exp(sum_c omega_c(xi) s^(c)),
/// where each omega_c is a cosine polynomial with `modes` modes per axis and
/// coefficients drawn from field_seed, scaled so that max_xi |omega(xi)| =
/// max_angle (sampled on a fixed 128 x 128 probe, so the continuous field
/// does not depend on the grid resolution it is later sampled on).
/// modes = 1 gives a spatially constant field.
struct FieldSpec {
  int modes = 4;
  double max_angle = 0.3;  ///< radians; keep below half the minimal symmetry angle
  std::uint64_t field_seed = 1;
};

/// A synthetic orientation map with known ground truth: the clean grid
/// samples the FieldSpec rotation field at cell centers, the noisy grid
/// composes each cell with an i.i.d. small random rotation whose mean angle
/// is noise_deg (in degrees), and kappa_true holds the analytic curvature of
/// the continuous field at the cell centers. Cells are masked i.i.d. with
/// probability mask_fraction (masked cells store the identity placeholder).
struct SyntheticGrid {
  OrientationGrid noisy;
  OrientationGrid clean;
  CurvatureField kappa_true;
};

SyntheticGrid synthesize_grid(long rows, long cols, double spacing_x, double spacing_y,
                              const std::string& symmetry, const FieldSpec& field,
                              double noise_deg, double mask_fraction, std::uint64_t seed);

/// The single-axis twist field R(x) = exp(alpha * x1 * s^(3)) sampled at cell
/// centers x1 = (i + 1/2) * spacing_x. Its curvature is constant: entry (3,1)
/// equals alpha, all others vanish.
OrientationGrid twist_grid(long rows, long cols, double spacing_x, double spacing_y,
                           double alpha, const std::string& symmetry);

/// An orientation grid flattened channel-wise into R^9: channel k of cell
/// (i, j) is entry k of the row-major flattening of the coset representative
/// of the cell rotation closest to the anchor. The anchor is the quaternion
/// mean of the representatives (largest eigenvector of the outer-product
/// sum), iterated with representative re-selection to a fixed point (at most
/// 10 rounds). Masked cells carry zeros and valid=false.
struct EmbeddedImage {
  long rows = 0;
  long cols = 0;
  double spacing_x = 1.0;
  double spacing_y = 1.0;
  std::string symmetry = "C1";
  Eigen::Matrix3d anchor = Eigen::Matrix3d::Identity();
  std::vector<Mat> channels;  ///< 9 grids of rows x cols
  BoolGrid valid;

  /// Largest misorientation between the anchor and a valid cell. The
  /// flattened-representative embedding is injective only while this stays
  /// below half the minimal symmetry rotation angle; callers should warn the
  /// user when within_injectivity_ball is false.
  double max_anchor_angle = 0.0;
  bool within_injectivity_ball = true;
};

/// Throws AllMasked when the grid has no valid cell.
EmbeddedImage embed_grid(const OrientationGrid& grid);

/// Output of the denoising pipeline: the smoothed cosine series of the nine
/// embedded channels, and the grid obtained by projecting each smoothed cell
/// matrix back to the nearest rotation (coset representative near the
/// anchor). Every output cell is valid; masked input cells are inpainted by
/// the smoother. `gcv.scores` is empty when the smoothing parameter was fixed
/// by the caller.
struct DenoiseResult {
  OrientationGrid grid;
  CosineGridSeries series;
  Eigen::Matrix3d anchor = Eigen::Matrix3d::Identity();
  GcvScan gcv;
  double max_anchor_angle = 0.0;
  bool within_injectivity_ball = true;
};

/// Smooths the embedded channels with cosine_smooth (choosing s by
/// generalized cross-validation when absent) and projects every cell back to
/// the rotation group. Throws ProjectionFailed when a smoothed cell matrix is
/// numerically rank-deficient.
DenoiseResult smooth_and_project(const EmbeddedImage& image, std::optional<double> s);

/// embed_grid followed by smooth_and_project.
DenoiseResult denoise_grid(const OrientationGrid& grid, std::optional<double> s);

/// Curvature of the smoothed field at one cell: the ambient derivative of the
/// nine-channel series (analytic in the cosine basis, divided by the grid
/// spacing) pulled back through the embedding differential at the projected
/// rotation R. The differential has columns flatten(R s^(c)), so the pullback
/// solves the 3x3 Gram system; IllConditionedPullback is thrown if its
/// condition number exceeds 1e8.
Eigen::Matrix<double, 3, 2> curvature_from_smooth(const CosineGridSeries& series,
                                                  const OrientationGrid& grid, long i, long j);

/// curvature_from_smooth at every cell of the denoised grid (defined
/// everywhere; the series is smooth across inpainted cells).
CurvatureField curvature_field_from_smooth(const DenoiseResult& denoised);

/// Finite-difference curvature at one cell: the rotation vector of the
/// symmetry-reduced relative rotation to each neighbor, central differences
/// in the interior and one-sided at the boundary, divided by the spacing.
/// Cells are first replaced by their anchored coset representatives (the same
/// selection embed_grid uses), which makes the result invariant under
/// symmetry-equivalent relabeling of the input. Throws MaskedNeighbor when
/// the cell or every needed neighbor on an axis is masked, and AmbiguousLog
/// when a relative angle reaches pi.
Eigen::Matrix<double, 3, 2> curvature_fd(const OrientationGrid& grid, long i, long j);

/// curvature_fd at every cell; cells whose stencil is unavailable are left
/// undefined instead of throwing.
CurvatureField curvature_field_fd(const OrientationGrid& grid);

}  // namespace mva
