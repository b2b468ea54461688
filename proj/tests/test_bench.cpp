#include <doctest.h>

#include <cmath>
#include <vector>

#include "lgt/bench.hpp"
#include "oracles.hpp"

using namespace lgt;

TEST_CASE("iid series has tau_int = 1/2") {
  const auto series = oracles::ar1_series(0.0, 200000, 7);
  const auto res = integrated_autocorrelation(series);
  CHECK(res.tau_int == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("AR(1) tau_int matches the closed form") {
  for (double rho : {0.5, 0.9}) {
    const auto series = oracles::ar1_series(rho, 400000, 11);
    const double expected = (1.0 + rho) / (2.0 * (1.0 - rho));
    const auto res = integrated_autocorrelation(series);
    CHECK(res.tau_int == doctest::Approx(expected).epsilon(0.15));
    CHECK(res.window >= 1);
  }
  // strongly correlated case on a longer series
  const double rho = 0.99;
  const auto series = oracles::ar1_series(rho, 4000000, 13);
  const double expected = (1.0 + rho) / (2.0 * (1.0 - rho));
  const auto res = integrated_autocorrelation(series);
  CHECK(res.tau_int == doctest::Approx(expected).epsilon(0.15));
}

TEST_CASE("autocorrelation failure modes") {
  CHECK_THROWS(integrated_autocorrelation(std::vector<double>(50, 0.0)));
  CHECK_THROWS(integrated_autocorrelation(std::vector<double>(500, 3.14)));

  // a pure random walk never satisfies the window condition before n/4
  std::vector<double> walk(2000);
  double x = 0.0;
  std::uint64_t state = 99;
  for (auto& v : walk) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    x += (state >> 63) ? 1.0 : -1.0;
    v = x;
  }
  CHECK_THROWS(integrated_autocorrelation(walk));
}

TEST_CASE("scaling fit recovers an exact power law") {
  std::vector<double> x{4, 8, 16, 32, 64};
  std::vector<double> y;
  for (double v : x) y.push_back(2.5 * v * v * v);
  const auto fit = fit_scaling_exponent(x, y);
  CHECK(fit.exponent == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(fit.std_error < 1e-10);
}

TEST_CASE("scaling fit with multiplicative noise") {
  std::vector<double> x, y;
  std::uint64_t state = 5;
  auto uniform = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (int i = 0; i < 12; ++i) {
    const double v = std::pow(2.0, 1.0 + 0.5 * i);
    x.push_back(v);
    y.push_back(std::pow(v, 2.0) * std::exp(0.05 * (uniform() - 0.5)));
  }
  const auto fit = fit_scaling_exponent(x, y);
  CHECK(std::abs(fit.exponent - 2.0) < 3.0 * std::max(fit.std_error, 1e-3));
}

TEST_CASE("scaling fit input validation") {
  CHECK_THROWS(fit_scaling_exponent({1.0, 2.0}, {1.0, 4.0}));
  CHECK_THROWS(fit_scaling_exponent({1.0, 2.0, -3.0}, {1.0, 4.0, 9.0}));
  CHECK_THROWS(fit_scaling_exponent({1.0, 2.0, 3.0}, {1.0, 4.0}));
}

TEST_CASE("sweep timing is positive and roughly repeatable") {
  const std::vector<std::vector<int>> geoms{{4, 4}};
  const auto a = time_sweeps(Group::U1, 1.0, geoms, 11);
  const auto b = time_sweeps(Group::U1, 1.0, geoms, 11);
  REQUIRE(a.size() == 1);
  CHECK(a[0].seconds_per_sweep > 0.0);
  CHECK(a[0].links == 32);
  CHECK(a[0].sweeps_timed >= 10);
  // repeated timings agree within a factor ~2
  CHECK(a[0].seconds_per_sweep < 2.0 * b[0].seconds_per_sweep + 1e-6);
  CHECK(b[0].seconds_per_sweep < 2.0 * a[0].seconds_per_sweep + 1e-6);
}

TEST_CASE("sweep time grows with the volume") {
  const auto recs =
      time_sweeps(Group::U1, 1.0, {{4, 4, 4, 4}, {8, 8, 8, 8}}, 11);
  REQUIRE(recs.size() == 2);
  const double ratio = recs[1].seconds_per_sweep / recs[0].seconds_per_sweep;
  // 16x the links; allow generous slop for timer noise
  CHECK(ratio > 4.0);
  CHECK(ratio < 64.0);
}

TEST_CASE("timing csv") {
  const auto recs = time_sweeps(Group::U1, 1.0, {{4, 4}}, 11);
  const std::string path = "/tmp/lgt_timing_test.csv";
  write_timing_csv(path, recs);
  std::FILE* f = std::fopen(path.c_str(), "r");
  REQUIRE(f != nullptr);
  char line[256];
  REQUIRE(std::fgets(line, sizeof line, f) != nullptr);
  CHECK(std::string(line).find("seconds_per_sweep") != std::string::npos);
  std::fclose(f);
  std::remove(path.c_str());
}
