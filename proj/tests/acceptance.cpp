// Acceptance gate: every release criterion at its stated tolerance, one
// pass/fail line per criterion. Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mva/experiments.hpp"
#include "mva/io.hpp"
#include "mva/linalg.hpp"
#include "mva/manifold.hpp"
#include "mva/models.hpp"
#include "mva/orientation.hpp"
#include "mva/reach.hpp"

namespace {

using namespace mva;
namespace fs = std::filesystem;

std::string fail(const std::string& msg) { return msg; }

template <typename T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

Vec random_tube_point(const Manifold& model, double max_dist, std::mt19937_64& rng) {
  const Vec m = model.random_point(rng);
  const Vec n = random_normal_vector(model, m, rng);
  std::uniform_real_distribution<double> unif(0.0, max_dist);
  return m + unif(rng) * n;
}

// --------------------------------------------------------------------------
// 1. Projective-plane reach at scale

std::string criterion_rp2_reach() {
  const auto rp2 = make_model("rp2");
  const ReachEstimate est = estimate_reach(*rp2, 5000, 101);
  const double want = 1.0 / std::sqrt(2.0);
  const double rel = std::abs(est.value - want) / want;
  if (rel > 0.02)
    return fail("rp2 estimate " + str(est.value) + " deviates " + str(rel) + " > 2%");
  return {};
}

// --------------------------------------------------------------------------
// 2. Sphere and circle reach accuracy

std::string criterion_reach_accuracy() {
  const ReachEstimate sphere = estimate_reach(*make_model("sphere2"), 2000, 102);
  if (std::abs(sphere.value - 1.0) > 0.01)
    return fail("sphere estimate " + str(sphere.value) + " off by > 1%");
  for (double radius : {0.5, 1.0, 2.0}) {
    const CircleModel circle(radius);
    const ReachEstimate est = estimate_reach(circle, 2000, 103);
    if (std::abs(est.value - radius) / radius > 0.01)
      return fail("circle radius " + str(radius) + " estimate " + str(est.value) +
                  " off by > 1%");
  }
  return {};
}

// --------------------------------------------------------------------------
// 3. Tangent-projector Lipschitz bound and its sharpness

std::string criterion_tangent_lipschitz() {
  for (const char* name : {"sphere2", "rp2", "circle"}) {
    const auto model = make_model(name);
    const BoundCheckSummary s = check_tangent_lipschitz(*model, 10000, 104, 1e-8);
    if (s.violations != 0)
      return fail(std::string(name) + ": " + str(s.violations) + " violations");
  }
  const auto circle = make_model("circle");
  const BoundCheckSummary sharp =
      check_tangent_lipschitz(*circle, 10000, 105, 1e-8, /*max_step=*/0.01);
  if (sharp.violations != 0) return fail("sharpness run produced violations");
  if (sharp.min_ratio < 0.999)
    return fail("circle sharpness ratio " + str(sharp.min_ratio) + " < 0.999");
  return {};
}

// --------------------------------------------------------------------------
// 4. Projection-differential deviation bounds

std::string criterion_dp_deviation() {
  for (const char* name : {"sphere2", "rp2", "circle", "so3"}) {
    const auto model = make_model(name);
    const auto summaries = check_dP_deviation(*model, 1000, 106, 0.6, 1e-8);
    for (const BoundCheckSummary& s : summaries)
      if (s.violations != 0)
        return fail(std::string(name) + " " + s.bound + ": " + str(s.violations) +
                    " violations");
  }
  return {};
}

// --------------------------------------------------------------------------
// 5. Projection differential vs finite differences, plus the sphere closed form

std::string criterion_dprojection_oracle() {
  const std::vector<std::pair<std::shared_ptr<const Manifold>, double>> cases = {
      {make_model("sphere2"), 0.5},
      {make_model("rp2"), 0.35},
      {make_model("so3"), 0.6},
      {std::make_shared<CircleModel>(2.0), 1.0}};
  auto rng = seeded_engine(107, 0);
  for (const auto& [model, max_dist] : cases) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = random_tube_point(*model, max_dist, rng);
      const double gap = spectral_norm(dprojection(*model, x) - dprojection_fd(*model, x));
      if (gap > 1e-5)
        return fail(model->name() + " trial " + str(trial) + ": |analytic - fd| = " + str(gap));
    }
  }
  const auto sphere = make_model("sphere2");
  for (int trial = 0; trial < 25; ++trial) {
    const Vec x = random_tube_point(*sphere, 0.5, rng);
    const double gap =
        (dprojection(*sphere, x) - sphere_dprojection(x)).cwiseAbs().maxCoeff();
    if (gap > 1e-12) return fail("sphere closed form gap " + str(gap) + " > 1e-12");
  }
  return {};
}

// --------------------------------------------------------------------------
// 6. Projector/rotation commutator inequality across dimensions

std::string criterion_commutator() {
  for (int dim = 2; dim <= 9; ++dim) {
    const BoundCheckSummary s =
        check_commutator(dim, 12500, 108 + static_cast<std::uint64_t>(dim), 1e-12);
    if (s.violations != 0)
      return fail("dim " + str(dim) + ": " + str(s.violations) + " violations");
  }
  return {};
}

// --------------------------------------------------------------------------
// 7. Shape-operator norms: sphere attains 1/tau, projective plane stays
//    below sqrt(2)

std::string criterion_shape_operator() {
  auto rng = seeded_engine(109, 0);
  const SphereModel sphere(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec m = sphere.random_point(rng);
    const double norm = spectral_norm_sym(sphere.shape_operator(m, m).matrix);
    if (std::abs(norm - 1.0) > 1e-8)
      return fail("sphere operator norm " + str(norm) + " not 1 +- 1e-8");
  }
  const ProjectiveModel rp2;
  const double cap = std::sqrt(2.0) + 1e-8;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec m = rp2.random_point(rng);
    const Vec n = random_normal_vector(rp2, m, rng);
    const double norm = spectral_norm_sym(rp2.shape_operator(m, n).matrix);
    if (norm > cap) return fail("rp2 operator norm " + str(norm) + " exceeds sqrt(2) + 1e-8");
  }
  return {};
}

// --------------------------------------------------------------------------
// 8. Bandwidth-explicit Fourier bounds for the shipped kink curves

std::string criterion_fourier_bounds() {
  for (const TorusTestFunction& f : {torus_function_c2(), torus_function_c3()}) {
    const TorusExperimentResult res = run_torus_experiment(f);
    if (res.rows.size() != 5) return fail(f.name + ": expected 5 bandwidths");
    for (const TorusBandwidthRow& row : res.rows) {
      if (!row.value_within_bound)
        return fail(f.name + " n=" + str(row.n) + ": value error " +
                    str(row.sup_value_error) + " exceeds rhs " + str(row.value_bound_rhs));
      if (!row.diff_applicable)
        return fail(f.name + " n=" + str(row.n) + ": differential bound not applicable");
      if (!row.diff_within_bound)
        return fail(f.name + " n=" + str(row.n) + ": differential error " +
                    str(row.sup_diff_error) + " exceeds rhs " + str(row.diff_bound_rhs));
    }
    if (res.nmin_checks.empty()) return fail(f.name + ": no minimal-bandwidth records");
    for (const NminCheck& c : res.nmin_checks)
      if (!c.holds_at_n_min || !c.fails_below)
        return fail(f.name + " eps=" + str(c.eps) + ": n_min=" + str(c.n_min) + " not tight");
  }
  return {};
}

// --------------------------------------------------------------------------
// 9. Projection inflates the sup error by at most a factor of two

std::string criterion_factor_two() {
  for (const TorusTestFunction& f : shipped_torus_functions()) {
    const TorusExperimentResult res = run_torus_experiment(f);
    for (const TorusBandwidthRow& row : res.rows)
      if (!row.factor_two_ok)
        return fail(f.name + " n=" + str(row.n) + ": factor-2 bound violated");
  }
  for (const SphereTestFunction& f : {sphere_function_rp2(), sphere_function_bandlimited()}) {
    const SphereExperimentResult res = run_sphere_experiment(f);
    if (!res.factor_two_ok) return fail(f.name + ": factor-2 bound violated");
  }
  return {};
}

// --------------------------------------------------------------------------
// 10. Band-limited functions pass through both pipelines unchanged

std::string criterion_bandlimited_exactness() {
  const TorusExperimentResult torus = run_torus_experiment(torus_function_bandlimited());
  for (const TorusBandwidthRow& row : torus.rows)
    if (row.sup_value_error > 1e-9)
      return fail("torus n=" + str(row.n) + ": error " + str(row.sup_value_error) + " > 1e-9");
  const SphereExperimentResult sphere = run_sphere_experiment(sphere_function_bandlimited());
  if (sphere.sup_value_error > 1e-9)
    return fail("sphere: error " + str(sphere.sup_value_error) + " > 1e-9");
  return {};
}

// --------------------------------------------------------------------------
// 11. Orientation pipeline: denoising accuracy, twist recovery, and
//     finite-difference convergence order

std::string criterion_orientation_pipeline() {
  // Smoothed curvature beats raw finite differences on a noisy masked grid.
  const FieldSpec field{4, 0.3, 1};
  const SyntheticGrid synth = synthesize_grid(64, 64, 1.0, 1.0, "O", field, 2.0, 0.05, 201);
  const DenoiseResult den = denoise_grid(synth.noisy, std::nullopt);
  CurvatureField smooth = curvature_field_from_smooth(den);
  const CurvatureField fd = curvature_field_fd(synth.noisy);
  smooth.defined = smooth.defined && fd.defined;  // compare on the same cells
  const double rms_smooth = kappa_rms_error(smooth, synth.kappa_true);
  const double rms_fd = kappa_rms_error(fd, synth.kappa_true);
  if (!(rms_smooth <= 0.5 * rms_fd))
    return fail("smoothed RMS " + str(rms_smooth) + " not <= 0.5 x fd RMS " + str(rms_fd));

  // Constant-twist field: the smoothed pipeline recovers the twist rate.
  const double alpha = 0.01;
  const OrientationGrid twist = twist_grid(64, 64, 1.0, 1.0, alpha, "O");
  const DenoiseResult tden = denoise_grid(twist, std::nullopt);
  const CurvatureField tfield = curvature_field_from_smooth(tden);
  double worst = 0.0;
  for (long i = 8; i < 56; ++i)
    for (long j = 8; j < 56; ++j)
      worst = std::max(worst, std::abs(tfield.at(i, j)(2, 0) - alpha) / alpha);
  if (worst > 0.02)
    return fail("twist rate error " + str(worst) + " > 2% on the interior");

  // Halving the spacing shrinks the finite-difference error by >= 3.5x.
  const FieldSpec conv{3, 0.25, 9};
  const SyntheticGrid coarse = synthesize_grid(48, 48, 1.0, 1.0, "O", conv, 0.0, 0.0, 7);
  const SyntheticGrid fine = synthesize_grid(96, 96, 0.5, 0.5, "O", conv, 0.0, 0.0, 7);
  const CurvatureField fd_coarse = curvature_field_fd(coarse.clean);
  const CurvatureField fd_fine = curvature_field_fd(fine.clean);
  const auto interior_max_error = [](const CurvatureField& got, const CurvatureField& want) {
    double worst_err = 0.0;
    for (long i = 1; i < got.rows - 1; ++i)
      for (long j = 1; j < got.cols - 1; ++j)
        worst_err = std::max(worst_err, (got.at(i, j) - want.at(i, j)).norm());
    return worst_err;
  };
  const double err_coarse = interior_max_error(fd_coarse, coarse.kappa_true);
  const double err_fine = interior_max_error(fd_fine, fine.kappa_true);
  if (!(err_coarse >= 3.5 * err_fine))
    return fail("fd convergence ratio " + str(err_coarse / err_fine) + " < 3.5");
  return {};
}

// --------------------------------------------------------------------------
// 12. CLI reruns are byte-identical

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + MVA_CLI_PATH + "\" " + args + " > " +
                          log.string() + " 2>&1";
  return std::system(cmd.c_str());
}

std::string compare_dirs(const fs::path& a, const fs::path& b) {
  for (const auto& entry : fs::directory_iterator(a)) {
    const std::string ext = entry.path().extension().string();
    if (ext != ".csv" && ext != ".json") continue;
    const fs::path other = b / entry.path().filename();
    if (!fs::exists(other)) return "missing " + other.string();
    if (read_text_file(entry.path().string()) != read_text_file(other.string()))
      return entry.path().filename().string() + " differs between reruns";
  }
  return {};
}

std::string criterion_cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "mva_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);

  const SyntheticGrid synth =
      synthesize_grid(12, 10, 1.0, 1.0, "O", FieldSpec{3, 0.25, 5}, 2.0, 0.1, 31);
  const fs::path grid_csv = root / "grid.csv";
  write_grid_csv(grid_csv.string(), synth.noisy);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"verify", "verify --bound commutator --trials 400 --seed 9"},
      {"torus", "torus-exp --bandwidths 4 8 --eval-points 128 --seed 9"},
      {"sphere", "sphere-exp -L 4 --eval-bands 12 --seed 9"},
      {"denoise", "denoise --input " + grid_csv.string() + " --symmetry O --spacing 0.5"},
      {"reach", "reach-est --model circle:0.5 --samples 400 --seed 9"}};
  for (const auto& [name, args] : commands) {
    const fs::path first = root / (name + "_1");
    const fs::path second = root / (name + "_2");
    if (run_cli(args + " --out " + first.string(), root / (name + "_1.log")) != 0)
      return fail(name + ": first run exited nonzero");
    if (run_cli(args + " --out " + second.string(), root / (name + "_2.log")) != 0)
      return fail(name + ": second run exited nonzero");
    const std::string diff = compare_dirs(first, second);
    if (!diff.empty()) return fail(name + ": " + diff);
  }
  fs::remove_all(root);
  return {};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* text;
    double budget_seconds;  // 0 = no stated budget
    std::function<std::string()> fn;
  };
  const std::vector<Entry> entries = {
      {1, "projective-plane reach from 5000 samples within 2% of 1/sqrt(2)", 30.0,
       criterion_rp2_reach},
      {2, "sphere and circle reach estimates within 1%", 0.0, criterion_reach_accuracy},
      {3, "tangent-projector Lipschitz bound: 10^4 pairs per model, sharp on the circle", 60.0,
       criterion_tangent_lipschitz},
      {4, "projection-differential deviation bounds: 10^3 tube trials per model", 0.0,
       criterion_dp_deviation},
      {5, "analytic projection differential matches finite differences and the sphere "
          "closed form",
       0.0, criterion_dprojection_oracle},
      {6, "commutator inequality: 10^5 projector/rotation pairs, dimensions 2-9", 60.0,
       criterion_commutator},
      {7, "shape-operator norms: sphere attains 1, projective plane below sqrt(2)", 0.0,
       criterion_shape_operator},
      {8, "bandwidth-explicit value/differential bounds for the shipped kink curves", 120.0,
       criterion_fourier_bounds},
      {9, "projection at most doubles the sup error in every shipped experiment", 0.0,
       criterion_factor_two},
      {10, "band-limited functions reproduce within 1e-9 through both pipelines", 0.0,
       criterion_bandlimited_exactness},
      {11, "orientation pipeline: denoising accuracy, twist recovery, fd convergence", 120.0,
       criterion_orientation_pipeline},
      {12, "every CLI command rerun with identical config and seed is byte-identical", 0.0,
       criterion_cli_determinism},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      error = entry.fn();
    } catch (const std::exception& ex) {
      error = std::string("exception: ") + ex.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && entry.budget_seconds > 0.0 && elapsed > entry.budget_seconds)
      error = "runtime " + str(elapsed) + "s exceeds budget " + str(entry.budget_seconds) + "s";
    std::printf("[%2d/12] %s (%6.1fs) %s%s%s\n", entry.id, error.empty() ? "PASS" : "FAIL",
                elapsed, entry.text, error.empty() ? "" : " -- ", error.c_str());
    std::fflush(stdout);
    if (!error.empty()) ++failures;
  }
  std::printf("acceptance: %d of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
