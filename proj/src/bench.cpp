#include "lgt/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lgt {

std::vector<TimingRecord> time_sweeps(
    Group group, double beta, const std::vector<std::vector<int>>& geometries,
    int n_timed, UpdateAlgorithm algorithm, std::uint64_t seed, int workers) {
  if (n_timed < 10)
    throw std::invalid_argument("need >= 10 timed sweeps for stable timing");
  std::vector<TimingRecord> records;
  for (const auto& extents : geometries) {
    LatticeGeometry geom(extents);
    McParams params;
    params.beta = beta;
    params.n_workers = workers;
    std::vector<RngStream> streams;
    for (int w = 0; w < workers; ++w) streams.emplace_back(seed, w);
    RngStream init(seed, 0x1000);
    GaugeConfiguration config = GaugeConfiguration::hot(geom, group, init);

    auto sweep = [&] {
      if (algorithm == UpdateAlgorithm::Heatbath)
        heatbath_sweep(config, params, streams);
      else
        metropolis_sweep(config, params, streams);
    };
    for (int i = 0; i < 3; ++i) sweep();  // warm-up

    std::vector<double> times;
    times.reserve(n_timed);
    for (int i = 0; i < n_timed; ++i) {
      const auto t0 = std::chrono::steady_clock::now();
      sweep();
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    // The fastest sweep estimates the intrinsic cost; slower repeats are
    // inflated by scheduler preemption, which hits long sweeps far more
    // often than short ones and would bias the scaling fit.
    const double best = *std::min_element(times.begin(), times.end());
    records.push_back({extents, group, beta, best, n_timed, workers,
                       geom.link_count()});
  }
  return records;
}

AutocorrResult integrated_autocorrelation(const std::vector<double>& series) {
  const std::size_t n = series.size();
  if (n < 100)
    throw std::invalid_argument("series too short for autocorrelation (< 100)");
  double mean = 0.0;
  for (double x : series) mean += x;
  mean /= static_cast<double>(n);
  double c0 = 0.0;
  for (double x : series) c0 += (x - mean) * (x - mean);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0)
    throw std::invalid_argument("constant series has no autocorrelation time");

  const std::size_t w_max = n / 4;
  double tau = 0.5;
  for (std::size_t w = 1; w <= w_max; ++w) {
    double ck = 0.0;
    for (std::size_t i = 0; i + w < n; ++i)
      ck += (series[i] - mean) * (series[i + w] - mean);
    ck /= static_cast<double>(n - w);
    tau += ck / c0;
    if (static_cast<double>(w) >= 5.0 * tau) {
      return {std::max(0.5, tau), static_cast<int>(w), n};
    }
  }
  throw std::runtime_error(
      "no autocorrelation window found before length/4: chain undersampled");
}

ScalingFit fit_scaling_exponent(const std::vector<double>& x,
                                const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3)
    throw std::invalid_argument("scaling fit needs >= 3 points");
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("scaling fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate abscissa in fit");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (intercept + slope * lx[i]);
    ss_res += r * r;
  }
  const double se = std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return {slope, se};
}

ScalingFit fit_scaling_exponent(const std::vector<TimingRecord>& records) {
  std::vector<double> vol, sec;
  for (const auto& r : records) {
    double v = 1.0;
    for (int e : r.extents) v *= e;
    vol.push_back(v);
    sec.push_back(r.seconds_per_sweep);
  }
  return fit_scaling_exponent(vol, sec);
}

void write_timing_csv(const std::string& path,
                      const std::vector<TimingRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "ns,volume,links,seconds_per_sweep\n";
  char buf[128];
  for (const auto& r : records) {
    double v = 1.0;
    for (int e : r.extents) v *= e;
    const int ns = *std::max_element(r.extents.begin(), r.extents.end());
    std::snprintf(buf, sizeof buf, "%d,%.0f,%lld,%.17g\n", ns, v,
                  static_cast<long long>(r.links), r.seconds_per_sweep);
    out << buf;
  }
}

}  // namespace lgt
