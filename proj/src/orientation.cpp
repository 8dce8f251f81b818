#include "mva/orientation.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "mva/io.hpp"
#include "mva/models.hpp"

namespace mva {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;

/// Swap between skew-basis coordinates and the rotation vector: the second
/// basis element is minus the cross-product matrix of e2, so
/// skew_basis_combine(c) == skew((c0, -c1, c2)). The map is an involution.
Eigen::Vector3d flip(const Eigen::Vector3d& c) { return {c[0], -c[1], c[2]}; }

double parse_field_double(const std::string& field, long line) {
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || field.empty() || errno == ERANGE ||
      !std::isfinite(value))
    throw MalformedRow("grid CSV line " + std::to_string(line) + ": bad number '" + field + "'");
  return value;
}

long parse_field_index(const std::string& field, long line) {
  const double value = parse_field_double(field, line);
  const long index = static_cast<long>(value);
  if (value != static_cast<double>(index) || index < 0)
    throw MalformedRow("grid CSV line " + std::to_string(line) + ": bad cell index '" + field +
                       "'");
  return index;
}

/// Quaternion mean anchor: largest eigenvector of the outer-product sum of
/// the representative quaternions, iterated with representative re-selection
/// until the anchor stops moving (at most 10 rounds).
Eigen::Matrix3d grid_anchor(const OrientationGrid& grid, const SymmetryGroup& group) {
  Eigen::Matrix3d anchor = Eigen::Matrix3d::Identity();
  for (int round = 0; round < 10; ++round) {
    Eigen::Matrix4d outer = Eigen::Matrix4d::Zero();
    for (long i = 0; i < grid.rows; ++i)
      for (long j = 0; j < grid.cols; ++j) {
        if (!grid.valid(i, j)) continue;
        const Eigen::Matrix3d rep = quotient_representative(grid.rotation(i, j), group, anchor);
        const Eigen::Quaterniond q(rep);
        const Eigen::Vector4d v(q.w(), q.x(), q.y(), q.z());
        outer += v * v.transpose();
      }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(outer);
    const Eigen::Vector4d top = eig.eigenvectors().col(3);
    const Eigen::Quaterniond mean(top[0], top[1], top[2], top[3]);
    const Eigen::Matrix3d next = mean.normalized().toRotationMatrix();
    const bool fixed = rotation_angle(anchor.transpose() * next) < 1e-12;
    anchor = next;
    if (fixed) break;
  }
  return anchor;
}

/// The band-limited skew-coordinate field of a FieldSpec on the unit square,
/// with its analytic partial derivatives in the unit-square coordinates.
struct CosineField {
  int modes = 1;
  std::array<Mat, 3> amp;
  double scale = 0.0;

  explicit CosineField(const FieldSpec& spec) : modes(spec.modes) {
    std::mt19937_64 rng = seeded_engine(spec.field_seed, 0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int c = 0; c < 3; ++c) {
      amp[static_cast<std::size_t>(c)] = Mat(modes, modes);
      for (int p = 0; p < modes; ++p)
        for (int q = 0; q < modes; ++q)
          amp[static_cast<std::size_t>(c)](p, q) = gauss(rng) / (1.0 + p * p + q * q);
    }
    // Normalize against a fixed probe so the continuous field is the same no
    // matter what resolution it is later sampled on.
    const int probe = 128;
    double max_norm = 0.0;
    for (int i = 0; i < probe; ++i)
      for (int j = 0; j < probe; ++j)
        max_norm = std::max(max_norm, raw_omega((i + 0.5) / probe, (j + 0.5) / probe).norm());
    scale = (max_norm > 0.0) ? spec.max_angle / max_norm : 0.0;
  }

  Vec basis(double xi) const {
    Vec b(modes);
    for (int p = 0; p < modes; ++p) b[p] = std::cos(kPi * p * xi);
    return b;
  }

  Vec basis_deriv(double xi) const {
    Vec b(modes);
    for (int p = 0; p < modes; ++p) b[p] = -kPi * p * std::sin(kPi * p * xi);
    return b;
  }

  Eigen::Vector3d raw_omega(double xi1, double xi2) const {
    const Vec b1 = basis(xi1), b2 = basis(xi2);
    Eigen::Vector3d w;
    for (int c = 0; c < 3; ++c) w[c] = b1.dot(amp[static_cast<std::size_t>(c)] * b2);
    return w;
  }

  Eigen::Vector3d omega(double xi1, double xi2) const { return scale * raw_omega(xi1, xi2); }

  /// d(omega)/d(xi_axis).
  Eigen::Vector3d domega(double xi1, double xi2, int axis) const {
    const Vec b1 = (axis == 0) ? basis_deriv(xi1) : basis(xi1);
    const Vec b2 = (axis == 1) ? basis_deriv(xi2) : basis(xi2);
    Eigen::Vector3d w;
    for (int c = 0; c < 3; ++c) w[c] = b1.dot(amp[static_cast<std::size_t>(c)] * b2);
    return scale * w;
  }
};

/// Anchored coset representative of every valid cell (identity for masked
/// cells, never read). Working on representatives rather than raw cell values
/// makes the finite-difference field invariant under per-cell replacement of
/// a rotation by a symmetry-equivalent one.
std::vector<Eigen::Matrix3d> representative_cache(const OrientationGrid& grid,
                                                  const SymmetryGroup& group,
                                                  const Eigen::Matrix3d& anchor) {
  std::vector<Eigen::Matrix3d> reps(static_cast<std::size_t>(grid.cell_count()),
                                    Eigen::Matrix3d::Identity());
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j)
      if (grid.valid(i, j))
        reps[static_cast<std::size_t>(grid.index(i, j))] =
            quotient_representative(grid.rotation(i, j), group, anchor);
  return reps;
}

/// Skew-basis coordinates of the symmetry-reduced relative rotation between
/// two representatives. Within the anchor ball the reduction is the identity,
/// but near a fundamental-zone boundary it keeps the step short.
Eigen::Vector3d pair_log(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                         const SymmetryGroup& group) {
  const Eigen::Matrix3d rep =
      quotient_representative(a.transpose() * b, group, Eigen::Matrix3d::Identity());
  return skew_basis_coords(log_rotation(rep));
}

Eigen::Matrix<double, 3, 2> curvature_fd_impl(const OrientationGrid& grid,
                                              const SymmetryGroup& group,
                                              const std::vector<Eigen::Matrix3d>& reps, long i,
                                              long j) {
  if (i < 0 || i >= grid.rows || j < 0 || j >= grid.cols)
    throw DimensionMismatch("curvature_fd: cell out of range");
  if (!grid.valid(i, j)) throw MaskedNeighbor("curvature_fd: cell is masked");
  const Eigen::Matrix3d& center = reps[static_cast<std::size_t>(grid.index(i, j))];

  Eigen::Matrix<double, 3, 2> kappa;
  for (int axis = 0; axis < 2; ++axis) {
    const long di = (axis == 0) ? 1 : 0;
    const long dj = (axis == 0) ? 0 : 1;
    const double h = (axis == 0) ? grid.spacing_x : grid.spacing_y;
    const bool fwd = (i + di < grid.rows) && (j + dj < grid.cols) && grid.valid(i + di, j + dj);
    const bool bwd = (i - di >= 0) && (j - dj >= 0) && grid.valid(i - di, j - dj);
    const auto rep_at = [&](long a, long b) -> const Eigen::Matrix3d& {
      return reps[static_cast<std::size_t>(grid.index(a, b))];
    };
    if (fwd && bwd) {
      kappa.col(axis) = (pair_log(center, rep_at(i + di, j + dj), group) -
                         pair_log(center, rep_at(i - di, j - dj), group)) /
                        (2.0 * h);
    } else if (fwd) {
      kappa.col(axis) = pair_log(center, rep_at(i + di, j + dj), group) / h;
    } else if (bwd) {
      kappa.col(axis) = -pair_log(center, rep_at(i - di, j - dj), group) / h;
    } else {
      throw MaskedNeighbor("curvature_fd: no valid neighbor along axis " + std::to_string(axis));
    }
  }
  return kappa;
}

Eigen::Matrix<double, 3, 2> pullback_curvature(const Eigen::Matrix3d& projected,
                                               const Eigen::Matrix<double, 9, 2>& ambient_deriv) {
  Eigen::Matrix<double, 9, 3> de;
  const auto& basis = skew_basis();
  for (int c = 0; c < 3; ++c) de.col(c) = flatten_rm(projected * basis[static_cast<std::size_t>(c)]);
  const Eigen::Matrix3d gram = de.transpose() * de;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(gram);
  const double lo = eig.eigenvalues()[0];
  const double hi = eig.eigenvalues()[2];
  if (lo <= 0.0 || hi / lo > 1e8)
    throw IllConditionedPullback("curvature_from_smooth: embedding differential Gram matrix has "
                                 "condition number beyond 1e8");
  return gram.ldlt().solve(de.transpose() * ambient_deriv);
}

}  // namespace

OrientationGrid::OrientationGrid(long rows_in, long cols_in, double sx, double sy,
                                 std::string symmetry_in)
    : rows(rows_in), cols(cols_in), spacing_x(sx), spacing_y(sy),
      symmetry(std::move(symmetry_in)) {
  if (rows <= 0 || cols <= 0) throw DimensionMismatch("OrientationGrid: dims must be positive");
  if (spacing_x <= 0.0 || spacing_y <= 0.0)
    throw DimensionMismatch("OrientationGrid: spacing must be positive");
  quaternions = Mat::Zero(4, rows * cols);
  quaternions.row(0).setOnes();
  valid = BoolGrid::Constant(rows, cols, true);
}

Eigen::Matrix3d OrientationGrid::rotation(long i, long j) const {
  const long k = index(i, j);
  const Eigen::Quaterniond q(quaternions(0, k), quaternions(1, k), quaternions(2, k),
                             quaternions(3, k));
  return q.normalized().toRotationMatrix();
}

void OrientationGrid::set_rotation(long i, long j, const Eigen::Matrix3d& r) {
  Eigen::Quaterniond q(r);
  Eigen::Vector4d v(q.w(), q.x(), q.y(), q.z());
  for (int c = 0; c < 4; ++c) {
    if (v[c] > 0.0) break;
    if (v[c] < 0.0) {
      v = -v;
      break;
    }
  }
  quaternions.col(index(i, j)) = v;
}

OrientationGrid parse_grid_csv(const std::string& text) {
  const std::vector<std::vector<std::string>> rows = parse_csv(text);
  const std::vector<std::string> header = {"i", "j", "qw", "qx", "qy", "qz", "mask"};
  if (rows.empty() || rows.front() != header)
    throw MalformedRow("grid CSV: expected header i,j,qw,qx,qy,qz,mask");

  struct Cell {
    Eigen::Vector4d q;
    bool masked = false;
  };
  std::vector<Cell> cells;
  std::vector<std::pair<long, long>> coords;
  long max_i = -1, max_j = -1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const std::vector<std::string>& fields = rows[r];
    const long line = static_cast<long>(r) + 1;
    if (fields.size() != 7)
      throw MalformedRow("grid CSV line " + std::to_string(line) + ": expected 7 fields, got " +
                         std::to_string(fields.size()));
    Cell cell;
    const long ci = parse_field_index(fields[0], line);
    const long cj = parse_field_index(fields[1], line);
    for (int c = 0; c < 4; ++c)
      cell.q[c] = parse_field_double(fields[static_cast<std::size_t>(c) + 2], line);
    const std::string& mask = fields[6];
    if (mask == "0")
      cell.masked = false;
    else if (mask == "1")
      cell.masked = true;
    else
      throw MalformedRow("grid CSV line " + std::to_string(line) + ": mask must be 0 or 1");
    if (!cell.masked) {
      const double sq = cell.q.squaredNorm();
      if (sq < 1e-24)
        throw MalformedRow("grid CSV line " + std::to_string(line) + ": zero quaternion");
      // Keep already-unit values untouched so write -> parse round-trips bit
      // for bit; only genuinely non-unit input is rescaled.
      if (std::abs(sq - 1.0) > 1e-12) cell.q /= std::sqrt(sq);
    } else {
      cell.q = Eigen::Vector4d(1, 0, 0, 0);
    }
    coords.emplace_back(ci, cj);
    cells.push_back(cell);
    max_i = std::max(max_i, ci);
    max_j = std::max(max_j, cj);
  }
  if (cells.empty()) throw NonRectangular("grid CSV: no data rows");

  const long n_rows = max_i + 1;
  const long n_cols = max_j + 1;
  if (static_cast<long>(cells.size()) != n_rows * n_cols)
    throw NonRectangular("grid CSV: " + std::to_string(cells.size()) + " rows do not tile a " +
                         std::to_string(n_rows) + " x " + std::to_string(n_cols) + " rectangle");

  OrientationGrid grid(n_rows, n_cols, 1.0, 1.0, "C1");
  BoolGrid seen = BoolGrid::Constant(n_rows, n_cols, false);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const long i = coords[k].first;
    const long j = coords[k].second;
    if (seen(i, j))
      throw NonRectangular("grid CSV: duplicate cell (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    seen(i, j) = true;
    grid.quaternions.col(grid.index(i, j)) = cells[k].q;
    grid.valid(i, j) = !cells[k].masked;
  }
  if (!grid.valid.any()) throw AllMasked("grid CSV: every cell is masked");
  return grid;
}

OrientationGrid ingest_grid(const std::string& path) {
  return parse_grid_csv(read_text_file(path));
}

std::string grid_to_csv(const OrientationGrid& grid) {
  std::string out = "i,j,qw,qx,qy,qz,mask\n";
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) {
      const long k = grid.index(i, j);
      std::vector<std::string> fields = {std::to_string(i), std::to_string(j)};
      if (grid.valid(i, j)) {
        for (int c = 0; c < 4; ++c) fields.push_back(format_double(grid.quaternions(c, k)));
        fields.push_back("0");
      } else {
        fields.insert(fields.end(), {"1", "0", "0", "0", "1"});
      }
      out += csv_join(fields);
      out += '\n';
    }
  return out;
}

void write_grid_csv(const std::string& path, const OrientationGrid& grid) {
  write_text_file(path, grid_to_csv(grid));
}

CurvatureField::CurvatureField(long rows_in, long cols_in) : rows(rows_in), cols(cols_in) {
  if (rows <= 0 || cols <= 0) throw DimensionMismatch("CurvatureField: dims must be positive");
  kappa.assign(static_cast<std::size_t>(rows * cols), Eigen::Matrix<double, 3, 2>::Zero());
  defined = BoolGrid::Constant(rows, cols, false);
}

const Eigen::Matrix<double, 3, 2>& CurvatureField::at(long i, long j) const {
  return kappa.at(static_cast<std::size_t>(i * cols + j));
}

Eigen::Matrix<double, 3, 2>& CurvatureField::at(long i, long j) {
  return kappa.at(static_cast<std::size_t>(i * cols + j));
}

std::string CurvatureField::to_csv() const {
  std::string out = "i,j,k11,k12,k21,k22,k31,k32\n";
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      if (!defined(i, j)) continue;
      const Eigen::Matrix<double, 3, 2>& k = at(i, j);
      std::vector<std::string> fields = {std::to_string(i), std::to_string(j)};
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 2; ++b) fields.push_back(format_double(k(a, b)));
      out += csv_join(fields);
      out += '\n';
    }
  return out;
}

double kappa_rms_error(const CurvatureField& a, const CurvatureField& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionMismatch("kappa_rms_error: field shapes differ");
  double sum = 0.0;
  long count = 0;
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < a.cols; ++j) {
      if (!a.defined(i, j) || !b.defined(i, j)) continue;
      sum += (a.at(i, j) - b.at(i, j)).squaredNorm();
      ++count;
    }
  if (count == 0) throw AllMasked("kappa_rms_error: no cell is defined in both fields");
  return std::sqrt(sum / static_cast<double>(count));
}

double mean_misorientation(const OrientationGrid& a, const OrientationGrid& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw DimensionMismatch("mean_misorientation: grid shapes differ");
  const SymmetryGroup group = symmetry_group(a.symmetry);
  double sum = 0.0;
  long count = 0;
  for (long i = 0; i < a.rows; ++i)
    for (long j = 0; j < a.cols; ++j) {
      if (!a.valid(i, j) || !b.valid(i, j)) continue;
      sum += misorientation_angle(a.rotation(i, j), b.rotation(i, j), group);
      ++count;
    }
  if (count == 0) throw AllMasked("mean_misorientation: no cell is valid in both grids");
  return sum / static_cast<double>(count);
}

SyntheticGrid synthesize_grid(long rows, long cols, double spacing_x, double spacing_y,
                              const std::string& symmetry, const FieldSpec& field,
                              double noise_deg, double mask_fraction, std::uint64_t seed) {
  if (field.modes < 1) throw Error("synthesize_grid: FieldSpec.modes must be at least 1");
  if (field.max_angle < 0.0) throw Error("synthesize_grid: FieldSpec.max_angle must be >= 0");
  if (noise_deg < 0.0) throw Error("synthesize_grid: noise_deg must be >= 0");
  if (mask_fraction < 0.0 || mask_fraction >= 1.0)
    throw Error("synthesize_grid: mask_fraction must lie in [0, 1)");
  const SymmetryGroup group = symmetry_group(symmetry);
  if (field.max_angle >= 0.5 * group.min_rotation_angle())
    throw Error("synthesize_grid: max_angle reaches half the minimal symmetry angle, so the "
                "anchored embedding would not be injective");

  const CosineField cosfield(field);
  SyntheticGrid out{OrientationGrid(rows, cols, spacing_x, spacing_y, symmetry),
                    OrientationGrid(rows, cols, spacing_x, spacing_y, symmetry),
                    CurvatureField(rows, cols)};

  // Mean rotation angle of exp(skew(sigma * chi)) with chi standard normal in
  // R^3 is sigma * 2 sqrt(2/pi); invert that so the mean matches noise_deg.
  const double noise_rad = noise_deg * kPi / 180.0;
  const double sigma = noise_rad / (2.0 * std::sqrt(2.0 / kPi));
  const double len_x = rows * spacing_x;
  const double len_y = cols * spacing_y;

  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      const double xi1 = (i + 0.5) / rows;
      const double xi2 = (j + 0.5) / cols;
      const Eigen::Vector3d omega = cosfield.omega(xi1, xi2);
      const Eigen::Matrix3d clean = exp_skew(skew_basis_combine(omega));
      out.clean.set_rotation(i, j, clean);

      // Body rate along axis a is J_r(w) dw/dx_a for the rotation vector
      // w = flip(omega); converting back to skew coordinates flips again.
      const Eigen::Vector3d w = flip(omega);
      const Eigen::Matrix3d jr = so3_right_jacobian(w);
      out.kappa_true.at(i, j).col(0) = flip(jr * flip(cosfield.domega(xi1, xi2, 0) / len_x));
      out.kappa_true.at(i, j).col(1) = flip(jr * flip(cosfield.domega(xi1, xi2, 1) / len_y));
      out.kappa_true.defined(i, j) = true;

      const long idx = out.noisy.index(i, j);
      std::mt19937_64 noise_rng = seeded_engine(seed, 2 * static_cast<std::uint64_t>(idx));
      const Vec chi = random_gaussian(3, noise_rng);
      Eigen::Matrix3d noisy = clean;
      if (sigma > 0.0)
        noisy = clean * exp_skew(skew(sigma * Eigen::Vector3d(chi[0], chi[1], chi[2])));
      std::mt19937_64 mask_rng = seeded_engine(seed, 2 * static_cast<std::uint64_t>(idx) + 1);
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      if (uniform(mask_rng) < mask_fraction) {
        out.noisy.valid(i, j) = false;
        out.noisy.quaternions.col(idx) = Eigen::Vector4d(1, 0, 0, 0);
      } else {
        out.noisy.set_rotation(i, j, noisy);
      }
    }
  return out;
}

OrientationGrid twist_grid(long rows, long cols, double spacing_x, double spacing_y, double alpha,
                           const std::string& symmetry) {
  OrientationGrid grid(rows, cols, spacing_x, spacing_y, symmetry);
  const Eigen::Matrix3d s3 = skew_basis()[2];
  for (long i = 0; i < rows; ++i) {
    const Eigen::Matrix3d r = exp_skew(alpha * (i + 0.5) * spacing_x * s3);
    for (long j = 0; j < cols; ++j) grid.set_rotation(i, j, r);
  }
  return grid;
}

EmbeddedImage embed_grid(const OrientationGrid& grid) {
  if (grid.valid_count() == 0) throw AllMasked("embed_grid: every cell is masked");
  const SymmetryGroup group = symmetry_group(grid.symmetry);

  EmbeddedImage image;
  image.rows = grid.rows;
  image.cols = grid.cols;
  image.spacing_x = grid.spacing_x;
  image.spacing_y = grid.spacing_y;
  image.symmetry = grid.symmetry;
  image.anchor = grid_anchor(grid, group);
  image.channels.assign(9, Mat::Zero(grid.rows, grid.cols));
  image.valid = grid.valid;

  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) {
      if (!grid.valid(i, j)) continue;
      const Eigen::Matrix3d rep = quotient_representative(grid.rotation(i, j), group, image.anchor);
      const Vec flat = flatten_rm(rep);
      for (int c = 0; c < 9; ++c) image.channels[static_cast<std::size_t>(c)](i, j) = flat[c];
      image.max_anchor_angle =
          std::max(image.max_anchor_angle, rotation_angle(image.anchor.transpose() * rep));
    }
  image.within_injectivity_ball = image.max_anchor_angle < 0.5 * group.min_rotation_angle();
  return image;
}

DenoiseResult smooth_and_project(const EmbeddedImage& image, std::optional<double> s) {
  if (image.channels.size() != 9)
    throw DimensionMismatch("smooth_and_project: expected a 9-channel embedded image");
  const SymmetryGroup group = symmetry_group(image.symmetry);

  DenoiseResult result;
  result.anchor = image.anchor;
  result.max_anchor_angle = image.max_anchor_angle;
  result.within_injectivity_ball = image.within_injectivity_ball;
  if (s) {
    result.gcv.best_s = *s;
  } else {
    result.gcv = choose_smoothing_gcv(image.channels, image.valid);
  }
  result.series = cosine_smooth(image.channels, image.valid, result.gcv.best_s);

  std::vector<Mat> values(9);
  for (int c = 0; c < 9; ++c) values[static_cast<std::size_t>(c)] = result.series.grid_values(c);

  result.grid =
      OrientationGrid(image.rows, image.cols, image.spacing_x, image.spacing_y, image.symmetry);
  for (long i = 0; i < image.rows; ++i)
    for (long j = 0; j < image.cols; ++j) {
      Vec flat(9);
      for (int c = 0; c < 9; ++c) flat[c] = values[static_cast<std::size_t>(c)](i, j);
      Eigen::Matrix3d projected;
      try {
        projected = so3_project(unflatten_rm(flat));
      } catch (const RankDeficient& e) {
        throw ProjectionFailed("smooth_and_project: cell (" + std::to_string(i) + ", " +
                               std::to_string(j) + "): " + e.what());
      }
      result.grid.set_rotation(i, j, quotient_representative(projected, group, image.anchor));
    }
  return result;
}

DenoiseResult denoise_grid(const OrientationGrid& grid, std::optional<double> s) {
  return smooth_and_project(embed_grid(grid), s);
}

Eigen::Matrix<double, 3, 2> curvature_from_smooth(const CosineGridSeries& series,
                                                  const OrientationGrid& grid, long i, long j) {
  if (series.channels() != 9)
    throw DimensionMismatch("curvature_from_smooth: expected a 9-channel series");
  if (series.rows() != grid.rows || series.cols() != grid.cols)
    throw DimensionMismatch("curvature_from_smooth: series and grid shapes differ");
  if (i < 0 || i >= grid.rows || j < 0 || j >= grid.cols)
    throw DimensionMismatch("curvature_from_smooth: cell out of range");

  const Eigen::Matrix3d projected = so3_project(unflatten_rm(series.value_at(i, j)));
  Eigen::Matrix<double, 9, 2> ambient;
  ambient.col(0) = series.derivative_at(i, j, 0) / grid.spacing_x;
  ambient.col(1) = series.derivative_at(i, j, 1) / grid.spacing_y;
  return pullback_curvature(projected, ambient);
}

CurvatureField curvature_field_from_smooth(const DenoiseResult& denoised) {
  const CosineGridSeries& series = denoised.series;
  if (series.channels() != 9)
    throw DimensionMismatch("curvature_field_from_smooth: expected a 9-channel series");
  const long rows = series.rows();
  const long cols = series.cols();

  std::vector<Mat> values(9), d0(9), d1(9);
  for (int c = 0; c < 9; ++c) {
    values[static_cast<std::size_t>(c)] = series.grid_values(c);
    d0[static_cast<std::size_t>(c)] = series.grid_derivative(c, 0);
    d1[static_cast<std::size_t>(c)] = series.grid_derivative(c, 1);
  }

  CurvatureField field(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) {
      Vec flat(9);
      Eigen::Matrix<double, 9, 2> ambient;
      for (int c = 0; c < 9; ++c) {
        flat[c] = values[static_cast<std::size_t>(c)](i, j);
        ambient(c, 0) = d0[static_cast<std::size_t>(c)](i, j) / denoised.grid.spacing_x;
        ambient(c, 1) = d1[static_cast<std::size_t>(c)](i, j) / denoised.grid.spacing_y;
      }
      try {
        field.at(i, j) = pullback_curvature(so3_project(unflatten_rm(flat)), ambient);
        field.defined(i, j) = true;
      } catch (const Error&) {
        field.defined(i, j) = false;
      }
    }
  return field;
}

Eigen::Matrix<double, 3, 2> curvature_fd(const OrientationGrid& grid, long i, long j) {
  const SymmetryGroup group = symmetry_group(grid.symmetry);
  const std::vector<Eigen::Matrix3d> reps =
      representative_cache(grid, group, grid_anchor(grid, group));
  return curvature_fd_impl(grid, group, reps, i, j);
}

CurvatureField curvature_field_fd(const OrientationGrid& grid) {
  const SymmetryGroup group = symmetry_group(grid.symmetry);
  const std::vector<Eigen::Matrix3d> reps =
      representative_cache(grid, group, grid_anchor(grid, group));
  CurvatureField field(grid.rows, grid.cols);
  for (long i = 0; i < grid.rows; ++i)
    for (long j = 0; j < grid.cols; ++j) {
      try {
        field.at(i, j) = curvature_fd_impl(grid, group, reps, i, j);
        field.defined(i, j) = true;
      } catch (const Error&) {
        field.defined(i, j) = false;
      }
    }
  return field;
}

}  // namespace mva
