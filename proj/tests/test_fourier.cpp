#include <doctest.h>

#include <cmath>
#include <complex>

#include "mva/fourier.hpp"
#include "mva/models.hpp"

using namespace mva;

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

Mat sample_curve(int N, const std::function<Vec(double)>& f) {
  Mat samples(f(0.0).size(), N);
  for (int j = 0; j < N; ++j) samples.col(j) = f(static_cast<double>(j) / N);
  return samples;
}

/// Random series with conjugate-symmetric coefficients (hence real values).
TorusSeries random_real_series(int d, int n, std::uint64_t seed) {
  auto rng = seeded_engine(seed, 0);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd coeffs(d, 2 * n + 1);
  for (int i = 0; i < d; ++i) {
    coeffs(i, n) = gauss(rng);
    for (int k = 1; k <= n; ++k) {
      const std::complex<double> c(gauss(rng), gauss(rng));
      coeffs(i, n + k) = c / (1.0 + k * k);
      coeffs(i, n - k) = std::conj(coeffs(i, n + k));
    }
  }
  return TorusSeries(n, std::move(coeffs));
}

}  // namespace

TEST_SUITE_BEGIN("fourier");

TEST_CASE("analysis of a single circular mode") {
  const Mat samples = sample_curve(8, [](double t) {
    Vec v(2);
    v << std::cos(kTau * t), std::sin(kTau * t);
    return v;
  });
  const TorusSeries series = torus_coefficients(samples, 1);
  const Eigen::VectorXcd c1 = series.coeff(1);
  CHECK(std::abs(c1[0] - std::complex<double>(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(c1[1] - std::complex<double>(0.0, -0.5)) < 1e-14);
  CHECK((series.coeff(-1) - series.coeff(1).conjugate()).norm() < 1e-14);
  CHECK(series.coeff(0).norm() < 1e-14);
}

TEST_CASE("analysis of a constant leaves only the zero mode") {
  Vec value(3);
  value << 2.0, -1.0, 0.25;
  const Mat samples = value.replicate(1, 9);
  const TorusSeries series = torus_coefficients(samples, 2);
  CHECK((series.coeff(0) - value.cast<std::complex<double>>()).norm() < 1e-14);
  for (int k : {-2, -1, 1, 2}) CHECK(series.coeff(k).norm() < 1e-14);
}

TEST_CASE("coefficients agree with a dense discrete transform") {
  // f(t) = cos(2 pi t) cos(4 pi t) = (cos 2 pi t + cos 6 pi t) / 2 has modes
  // +-1 and +-3 with weight 1/4 each.
  const auto f = [](double t) {
    Vec v(1);
    v << std::cos(kTau * t) * std::cos(2.0 * kTau * t);
    return v;
  };
  const TorusSeries series = torus_coefficients(sample_curve(16, f), 4);

  // Independent oracle: plain O(N^2) discrete transform at N = 4096.
  const int N = 4096;
  const Mat dense = sample_curve(N, f);
  for (int k = -4; k <= 4; ++k) {
    std::complex<double> oracle(0.0, 0.0);
    for (int j = 0; j < N; ++j)
      oracle += dense(0, j) * std::polar(1.0 / N, -kTau * k * j / static_cast<double>(N));
    CHECK(std::abs(series.coeff(k)[0] - oracle) < 1e-13);
    const double expected = (std::abs(k) == 1 || std::abs(k) == 3) ? 0.25 : 0.0;
    CHECK(std::abs(oracle - expected) < 1e-13);
  }
}

TEST_CASE("band-limited signals round-trip through analysis") {
  const TorusSeries truth = random_real_series(3, 5, 101);
  const Mat samples = sample_curve(11, [&](double t) { return truth.eval(t); });
  const TorusSeries recovered = torus_coefficients(samples, 5);
  CHECK((recovered.coeffs() - truth.coeffs()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("too few samples for the requested bandwidth") {
  CHECK_THROWS_AS(torus_coefficients(Mat::Zero(2, 8), 4), InsufficientSamples);
  CHECK_NOTHROW(torus_coefficients(Mat::Zero(2, 9), 4));
}

TEST_CASE("evaluation at zero sums the coefficients") {
  const TorusSeries series = random_real_series(2, 3, 102);
  const Vec at_zero = series.eval(0.0);
  Vec sum = Vec::Zero(2);
  for (int k = -3; k <= 3; ++k) sum += series.coeff(k).real();
  CHECK((at_zero - sum).norm() < 1e-14);
}

TEST_CASE("derivative of a constant series vanishes") {
  Eigen::MatrixXcd coeffs(2, 1);
  coeffs << std::complex<double>(1.0, 0.0), std::complex<double>(-2.0, 0.0);
  const TorusSeries series(0, coeffs);
  CHECK(series.eval_deriv(0.37).norm() == 0.0);
}

TEST_CASE("series derivative matches central differences") {
  const TorusSeries series = random_real_series(3, 5, 103);
  const double h = 1e-6;
  for (double t : {0.0, 0.123, 0.5, 0.987}) {
    const Vec fd = (series.eval(t + h) - series.eval(t - h)) / (2.0 * h);
    CHECK((series.eval_deriv(t) - fd).norm() < 1e-6);
  }
}

TEST_CASE("truncation keeps exactly the low modes") {
  const TorusSeries series = random_real_series(2, 4, 104);
  const TorusSeries low = series.truncated(2);
  CHECK(low.bandwidth() == 2);
  for (int k = -2; k <= 2; ++k) CHECK((low.coeff(k) - series.coeff(k)).norm() == 0.0);
  // Evaluation differs by exactly the dropped tail.
  Vec tail = Vec::Zero(2);
  for (int k : {-4, -3, 3, 4})
    tail += (series.coeff(k) * std::polar(1.0, kTau * k * 0.3)).real();
  CHECK((series.eval(0.3) - low.eval(0.3) - tail).norm() < 1e-14);
  CHECK_THROWS_AS(series.truncated(5), DimensionMismatch);
}

TEST_CASE("JSON round-trip preserves the series") {
  const TorusSeries series = random_real_series(3, 4, 105);
  const TorusSeries back = TorusSeries::from_json(series.to_json());
  CHECK(back.bandwidth() == series.bandwidth());
  CHECK((back.coeffs() - series.coeffs()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("manifold approximant reproduces a band-limited circle curve") {
  const CircleModel circle(1.0);
  const Mat samples = sample_curve(8, [](double t) {
    Vec v(2);
    v << std::cos(kTau * t), std::sin(kTau * t);
    return v;
  });
  const TorusSeries series = torus_coefficients(samples, 1);
  for (double t : {0.0, 0.2, 0.55, 0.9}) {
    Vec expected(2);
    expected << std::cos(kTau * t), std::sin(kTau * t);
    CHECK((manifold_approximant(circle, series, t) - expected).norm() < 1e-14);
  }
}

TEST_CASE("manifold approximant rejects values outside the tube") {
  const CircleModel circle(1.0);
  Eigen::MatrixXcd coeffs = Eigen::MatrixXcd::Zero(2, 1);
  coeffs(0, 0) = 3.0;  // constant series at (3, 0): distance 2 >= reach 1
  CHECK_THROWS_AS(manifold_approximant(circle, TorusSeries(0, coeffs), 0.0),
                  OutsideTubularNeighborhood);
  CHECK_THROWS_AS(manifold_approximant(circle, TorusSeries(0, Eigen::MatrixXcd::Zero(2, 1)), 0.0),
                  OutsideTubularNeighborhood);  // center: distance == reach
}

TEST_CASE("projection at most doubles the linear approximation error") {
  // Smooth sphere-valued curve, moderately truncated so the linear error is
  // visible but stays well inside the tube.
  const SphereModel sphere(3);
  const auto f = [](double t) {
    Vec v(3);
    v << std::cos(kTau * t), std::sin(kTau * t), 0.6 * std::sin(2.0 * kTau * t);
    return Vec(v.normalized());
  };
  const TorusSeries series = torus_coefficients(sample_curve(256, f), 8);
  double sup_linear = 0.0;
  double sup_manifold = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double t = j / 400.0;
    sup_linear = std::max(sup_linear, (series.eval(t) - f(t)).norm());
    sup_manifold = std::max(sup_manifold, (manifold_approximant(sphere, series, t) - f(t)).norm());
  }
  CHECK(sup_linear > 1e-8);  // the test is vacuous if the series is exact
  CHECK(sup_manifold <= 2.0 * sup_linear + 1e-15);
}

TEST_SUITE_END();
