#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "lgt/fermion.hpp"
#include "lgt/wilson.hpp"

namespace lgt {

inline constexpr char kConfigMagic[4] = {'L', 'G', 'C', '1'};
inline constexpr std::uint32_t kConfigFormatVersion = 1;

struct ConfigMetadata {
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t sweep_index = 0;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadMagicError : FormatError {
  using FormatError::FormatError;
};
struct BadVersionError : FormatError {
  using FormatError::FormatError;
};
struct ChecksumError : FormatError {
  using FormatError::FormatError;
};
struct UnitarityError : FormatError {
  using FormatError::FormatError;
};

// Bit-exact gauge configuration interchange: magic "LGC1", little-endian
// header (version u32, group N u32, ndim u32, extents u32 each, beta f64,
// seed u64, sweep u64), link payload in lexicographic site order,
// direction-major within site, each matrix row-major as N^2 (re, im) f64
// pairs, trailing CRC-32 of the payload.
void export_config(const GaugeConfiguration& config,
                   const ConfigMetadata& meta, const std::string& path);

struct ImportedConfig {
  GaugeConfiguration config;
  ConfigMetadata meta;
};
ImportedConfig import_config(const std::string& path);

// Header/validation pass that never materializes a GaugeConfiguration.
struct InspectReport {
  std::uint32_t version;
  int group_n;
  std::vector<int> extents;
  ConfigMetadata meta;
  std::int64_t link_count;
};
InspectReport inspect_config(const std::string& path);

// Append-only archive: a directory of one-configuration files plus a
// manifest listing files and metadata.
class ArchiveWriter {
 public:
  ArchiveWriter(std::string directory, Group group,
                const LatticeGeometry& geom, double beta, std::uint64_t seed);
  ~ArchiveWriter();

  // returns the file written
  std::string append(const GaugeConfiguration& config,
                     std::uint64_t sweep_index);
  void finalize();

 private:
  std::string dir_;
  Group group_;
  std::vector<int> extents_;
  double beta_;
  std::uint64_t seed_;
  std::vector<std::pair<std::string, std::uint64_t>> entries_;
  bool finalized_ = false;
};

std::vector<std::string> archive_files(const std::string& directory);

struct Strategy2Params {
  McParams mc;
  FermionParams fermion;
  int n_configs = 5;
  StartMode start = StartMode::Hot;
};

struct Strategy2Record {
  std::uint64_t sweep_index;
  double plaquette;
  double correlator;      // nearest-neighbor propagator contraction
  double log_det;
  double det_sign;        // +1 / -1 (hopping operator is Hermitian)
};

struct Strategy2Result {
  std::vector<Strategy2Record> records;
  double quenched_plaquette, quenched_plaquette_err;
  double quenched_correlator, quenched_correlator_err;
  double reweighted_plaquette, reweighted_plaquette_err;
  double reweighted_correlator, reweighted_correlator_err;
  std::int64_t decorrelation_sweeps;
};

// Quenched MC snapshots streamed through the file interchange into the
// fermion side; observables reweighted by det of the hopping operator,
// jackknife errors. archive_dir receives every handed-off configuration.
Strategy2Result strategy2_run(const Strategy2Params& params,
                              const LatticeGeometry& geom, Group group,
                              const std::string& archive_dir);

// Recompute the same estimates from an existing archive; bitwise equal to
// the strategy2_run that produced it.
Strategy2Result strategy2_replay(const std::string& archive_dir,
                                 const FermionParams& fermion);

// Rank-1 condensate link U^{ab} = conj(phi_x^a) phi_y^b. Not generally
// unitary.
Eigen::MatrixXcd condensate_link(const Eigen::VectorXcd& phi_x,
                                 const Eigen::VectorXcd& phi_y);

// Polar projection of an arbitrary matrix onto the unitary group.
Eigen::MatrixXcd polar_project(const Eigen::MatrixXcd& m);

// CPU-time factor (size ratio)^5 (spacing ratio)^-7.
double cost_estimate(double size_ratio, double spacing_ratio);

}  // namespace lgt
