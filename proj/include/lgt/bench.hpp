#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgt/wilson.hpp"

namespace lgt {

struct TimingRecord {
  std::vector<int> extents;
  Group group;
  double beta;
  double seconds_per_sweep;  // fastest-of-n_timed wall time
  int sweeps_timed;
  int workers;
  std::int64_t links;
};

// Per geometry: warm up, then the fastest wall time among n_timed sweeps
// (robust against scheduler interference on long sweeps).
std::vector<TimingRecord> time_sweeps(
    Group group, double beta, const std::vector<std::vector<int>>& geometries,
    int n_timed, UpdateAlgorithm algorithm = UpdateAlgorithm::Metropolis,
    std::uint64_t seed = 1, int workers = 1);

struct AutocorrResult {
  double tau_int;      // >= 0.5; 0.5 for i.i.d. data
  int window;          // automatic window W, smallest W >= 5 tau_int(W)
  std::size_t series_len;
};

// tau_int = 1/2 + sum_{k=1..W} rho(k). Throws for series shorter than 100,
// zero variance, or no admissible window before length/4.
AutocorrResult integrated_autocorrelation(const std::vector<double>& series);

struct ScalingFit {
  double exponent;
  double std_error;
};

// Least-squares slope of log(y) vs log(x).
ScalingFit fit_scaling_exponent(const std::vector<double>& x,
                                const std::vector<double>& y);
ScalingFit fit_scaling_exponent(const std::vector<TimingRecord>& records);

void write_timing_csv(const std::string& path,
                      const std::vector<TimingRecord>& records);

}  // namespace lgt
