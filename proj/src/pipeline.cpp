#include "lgt/pipeline.hpp"

#include <Eigen/SVD>
#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "lgt/bench.hpp"
#include "json.hpp"

namespace lgt {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
  out.write(reinterpret_cast<char*>(b), 8);
}

void put_f64(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw ChecksumError("unexpected end of file in header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  if (!in) throw ChecksumError("unexpected end of file in header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  const std::uint64_t bits = get_u64(in);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

constexpr double kUnitarityImportTol = 1e-6;

struct Header {
  std::uint32_t version;
  int n;
  std::vector<int> extents;
  ConfigMetadata meta;
};

Header read_header(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kConfigMagic, 4) != 0)
    throw BadMagicError("not a gauge configuration file (bad magic)");
  Header h;
  h.version = get_u32(in);
  if (h.version != kConfigFormatVersion)
    throw BadVersionError("unsupported format version " +
                          std::to_string(h.version));
  h.n = static_cast<int>(get_u32(in));
  if (h.n < 1 || h.n > 3)
    throw FormatError("unsupported group dimension " + std::to_string(h.n));
  const int ndim = static_cast<int>(get_u32(in));
  if (ndim < 2 || ndim > 4)
    throw FormatError("unsupported lattice dimension " + std::to_string(ndim));
  for (int d = 0; d < ndim; ++d)
    h.extents.push_back(static_cast<int>(get_u32(in)));
  h.meta.beta = get_f64(in);
  h.meta.seed = get_u64(in);
  h.meta.sweep_index = get_u64(in);
  return h;
}

// payload of one link matrix, row-major (re, im) pairs
void link_bytes(const GroupMatrix& u, int n, std::vector<unsigned char>& buf) {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double re = u(r, c).real();
      const double im = u(r, c).imag();
      std::uint64_t bits;
      std::memcpy(&bits, &re, 8);
      for (int i = 0; i < 8; ++i) buf.push_back((bits >> (8 * i)) & 0xff);
      std::memcpy(&bits, &im, 8);
      for (int i = 0; i < 8; ++i) buf.push_back((bits >> (8 * i)) & 0xff);
    }
}

double weighted_mean(const std::vector<double>& obs,
                     const std::vector<double>& w) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    num += obs[i] * w[i];
    den += w[i];
  }
  return num / den;
}

// jackknife standard error of a ratio estimator
double jackknife_err(const std::vector<double>& obs,
                     const std::vector<double>& w) {
  const std::size_t n = obs.size();
  if (n < 2) return 0.0;
  const double full = weighted_mean(obs, w);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> o, ww;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) {
        o.push_back(obs[j]);
        ww.push_back(w[j]);
      }
    const double d = weighted_mean(o, ww) - full;
    var += d * d;
  }
  var *= static_cast<double>(n - 1) / static_cast<double>(n);
  return std::sqrt(var);
}

Strategy2Result analyze(const std::vector<Strategy2Record>& records,
                        std::int64_t decorrelation) {
  Strategy2Result r;
  r.records = records;
  r.decorrelation_sweeps = decorrelation;
  std::vector<double> plq, cor, ones, w;
  double lm_max = -1e300;
  for (const auto& rec : records) lm_max = std::max(lm_max, rec.log_det);
  for (const auto& rec : records) {
    plq.push_back(rec.plaquette);
    cor.push_back(rec.correlator);
    ones.push_back(1.0);
    w.push_back(rec.det_sign * std::exp(rec.log_det - lm_max));
  }
  double wsum = 0.0, wabs = 0.0;
  for (double x : w) {
    wsum += x;
    wabs += std::abs(x);
  }
  if (std::abs(wsum) < 1e-12 * wabs)
    throw std::runtime_error(
        "reweighting overlap failure: determinant weights sum to ~0");
  r.quenched_plaquette = weighted_mean(plq, ones);
  r.quenched_plaquette_err = jackknife_err(plq, ones);
  r.quenched_correlator = weighted_mean(cor, ones);
  r.quenched_correlator_err = jackknife_err(cor, ones);
  r.reweighted_plaquette = weighted_mean(plq, w);
  r.reweighted_plaquette_err = jackknife_err(plq, w);
  r.reweighted_correlator = weighted_mean(cor, w);
  r.reweighted_correlator_err = jackknife_err(cor, w);
  return r;
}

Strategy2Record measure_config(const ImportedConfig& ic,
                               const FermionParams& fermion) {
  const auto m = hopping_operator(ic.config, fermion);
  const LogDet det = determinant(m);
  // nearest-neighbor propagator contraction from a (site 0, color 0) source
  const int n = matrix_dim(ic.config.group);
  const std::int64_t neighbor0 = ic.config.geometry.neighbor(0, 0, +1);
  const Eigen::VectorXcd prop = propagator(m, 0);
  Strategy2Record rec;
  rec.sweep_index = ic.meta.sweep_index;
  rec.plaquette = average_plaquette(ic.config);
  rec.correlator = prop[neighbor0 * n].real();
  rec.log_det = det.log_magnitude;
  rec.det_sign = std::cos(det.phase) >= 0.0 ? 1.0 : -1.0;
  return rec;
}

}  // namespace

void export_config(const GaugeConfiguration& config,
                   const ConfigMetadata& meta, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kConfigMagic, 4);
  put_u32(out, kConfigFormatVersion);
  const int n = matrix_dim(config.group);
  put_u32(out, static_cast<std::uint32_t>(n));
  put_u32(out, static_cast<std::uint32_t>(config.geometry.ndim()));
  for (int e : config.geometry.extents())
    put_u32(out, static_cast<std::uint32_t>(e));
  put_f64(out, meta.beta);
  put_u64(out, meta.seed);
  put_u64(out, meta.sweep_index);

  std::vector<unsigned char> payload;
  payload.reserve(config.links.size() * n * n * 16);
  const auto& geom = config.geometry;
  for (std::int64_t site = 0; site < geom.volume(); ++site)
    for (int mu = 0; mu < geom.ndim(); ++mu)
      link_bytes(config.links[geom.link_index(site, mu)], n, payload);
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
  const auto crc =
      crc32(0L, payload.data(), static_cast<uInt>(payload.size()));
  put_u32(out, static_cast<std::uint32_t>(crc));
  if (!out) throw std::runtime_error("write failure on " + path);
}

ImportedConfig import_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const Header h = read_header(in);
  const Group group = group_from_dim(h.n);
  LatticeGeometry geom(h.extents);
  const std::size_t payload_size =
      static_cast<std::size_t>(geom.link_count()) * h.n * h.n * 16;
  std::vector<unsigned char> payload(payload_size);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload_size));
  if (static_cast<std::size_t>(in.gcount()) != payload_size)
    throw ChecksumError("truncated payload in " + path);
  std::uint32_t stored;
  try {
    stored = get_u32(in);
  } catch (const FormatError&) {
    throw ChecksumError("missing checksum in " + path);
  }
  const auto crc =
      crc32(0L, payload.data(), static_cast<uInt>(payload.size()));
  if (static_cast<std::uint32_t>(crc) != stored)
    throw ChecksumError("checksum mismatch in " + path);

  GaugeConfiguration config{geom, group, {}};
  config.links.resize(geom.link_count(), GroupMatrix::Zero(h.n, h.n));
  std::size_t off = 0;
  auto next_f64 = [&]() {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
      bits |= std::uint64_t(payload[off + i]) << (8 * i);
    off += 8;
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  };
  for (std::int64_t site = 0; site < geom.volume(); ++site)
    for (int mu = 0; mu < geom.ndim(); ++mu) {
      GroupMatrix u(h.n, h.n);
      for (int r = 0; r < h.n; ++r)
        for (int c = 0; c < h.n; ++c) {
          const double re = next_f64();
          const double im = next_f64();
          u(r, c) = Complex(re, im);
        }
      const std::int64_t l = geom.link_index(site, mu);
      config.links[l] = u;
      if (unitarity_error({group, u}) > kUnitarityImportTol)
        throw UnitarityError("non-unitary link at index " + std::to_string(l) +
                             " in " + path);
    }
  return {std::move(config), h.meta};
}

InspectReport inspect_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const Header h = read_header(in);
  LatticeGeometry geom(h.extents);
  InspectReport report{h.version, h.n, h.extents, h.meta, geom.link_count()};
  // stream the payload: CRC + per-link unitarity, no configuration built
  const std::size_t matrix_bytes = static_cast<std::size_t>(h.n) * h.n * 16;
  std::vector<unsigned char> buf(matrix_bytes);
  uLong crc = crc32(0L, Z_NULL, 0);
  for (std::int64_t l = 0; l < geom.link_count(); ++l) {
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(matrix_bytes));
    if (static_cast<std::size_t>(in.gcount()) != matrix_bytes)
      throw ChecksumError("truncated payload in " + path);
    crc = crc32(crc, buf.data(), static_cast<uInt>(matrix_bytes));
    GroupMatrix u(h.n, h.n);
    std::size_t off = 0;
    for (int r = 0; r < h.n; ++r)
      for (int c = 0; c < h.n; ++c) {
        std::uint64_t bre = 0, bim = 0;
        for (int i = 0; i < 8; ++i) bre |= std::uint64_t(buf[off + i]) << (8 * i);
        off += 8;
        for (int i = 0; i < 8; ++i) bim |= std::uint64_t(buf[off + i]) << (8 * i);
        off += 8;
        double re, im;
        std::memcpy(&re, &bre, 8);
        std::memcpy(&im, &bim, 8);
        u(r, c) = Complex(re, im);
      }
    if (unitarity_error({group_from_dim(h.n), u}) > kUnitarityImportTol)
      throw UnitarityError("non-unitary link at index " + std::to_string(l) +
                           " in " + path);
  }
  std::uint32_t stored;
  try {
    stored = get_u32(in);
  } catch (const FormatError&) {
    throw ChecksumError("missing checksum in " + path);
  }
  if (static_cast<std::uint32_t>(crc) != stored)
    throw ChecksumError("checksum mismatch in " + path);
  return report;
}

ArchiveWriter::ArchiveWriter(std::string directory, Group group,
                             const LatticeGeometry& geom, double beta,
                             std::uint64_t seed)
    : dir_(std::move(directory)),
      group_(group),
      extents_(geom.extents()),
      beta_(beta),
      seed_(seed) {
  fs::create_directories(dir_);
}

ArchiveWriter::~ArchiveWriter() {
  if (!finalized_) {
    try {
      finalize();
    } catch (...) {
    }
  }
}

std::string ArchiveWriter::append(const GaugeConfiguration& config,
                                  std::uint64_t sweep_index) {
  if (!entries_.empty() && sweep_index <= entries_.back().second)
    throw std::invalid_argument("sweep indices must be strictly increasing");
  char name[64];
  std::snprintf(name, sizeof name, "cfg_%06zu.lgc", entries_.size());
  const std::string path = (fs::path(dir_) / name).string();
  export_config(config, {beta_, seed_, sweep_index}, path);
  entries_.emplace_back(name, sweep_index);
  return path;
}

void ArchiveWriter::finalize() {
  json manifest;
  manifest["format_version"] = kConfigFormatVersion;
  manifest["group"] = group_name(group_);
  manifest["extents"] = extents_;
  manifest["beta"] = beta_;
  manifest["seed"] = seed_;
  json files = json::array();
  for (const auto& [name, sweep] : entries_)
    files.push_back({{"file", name}, {"sweep_index", sweep}});
  manifest["configurations"] = files;
  std::ofstream out(fs::path(dir_) / "manifest.json");
  out << manifest.dump(2) << "\n";
  finalized_ = true;
}

std::vector<std::string> archive_files(const std::string& directory) {
  std::ifstream in(fs::path(directory) / "manifest.json");
  if (!in) throw std::runtime_error("no manifest.json in " + directory);
  json manifest = json::parse(in);
  std::vector<std::string> files;
  for (const auto& entry : manifest.at("configurations"))
    files.push_back(
        (fs::path(directory) / entry.at("file").get<std::string>()).string());
  return files;
}

Strategy2Result strategy2_run(const Strategy2Params& params,
                              const LatticeGeometry& geom, Group group,
                              const std::string& archive_dir) {
  params.mc.validate();
  params.fermion.validate();
  if (params.n_configs < 1)
    throw std::invalid_argument("need at least one configuration");

  // calibration segment: thermalize and measure tau_int of the plaquette
  McParams calib = params.mc;
  calib.n_sweeps = std::max<std::int64_t>(200, calib.n_sweeps);
  calib.measure_every = 1;
  GaugeConfiguration config = GaugeConfiguration::cold(geom, group);
  const ObservableSeries series =
      run_chain(calib, geom, group, params.start, &config);
  std::int64_t decorrelation = 10;
  try {
    const auto ac = integrated_autocorrelation(series.plaquette);
    decorrelation = std::max<std::int64_t>(
        10, static_cast<std::int64_t>(std::ceil(2.0 * ac.tau_int)));
  } catch (const std::exception&) {
    // short or frozen calibration series: keep the floor of 10
  }

  ArchiveWriter archive(archive_dir, group, geom, params.mc.beta,
                        params.mc.seed);
  std::vector<RngStream> streams;
  for (int w = 0; w < params.mc.n_workers; ++w)
    streams.emplace_back(params.mc.seed, 0x57A7 + w);

  std::vector<Strategy2Record> records;
  std::uint64_t sweep = series.sweep.empty() ? 0 : series.sweep.back();
  for (int c = 0; c < params.n_configs; ++c) {
    for (std::int64_t s = 0; s < decorrelation; ++s) {
      if (params.mc.algorithm == UpdateAlgorithm::Heatbath)
        heatbath_sweep(config, params.mc, streams);
      else
        metropolis_sweep(config, params.mc, streams);
      ++sweep;
    }
    reunitarize_links(config);
    // every hand-off crosses the file interchange boundary
    const std::string path = archive.append(config, sweep);
    const ImportedConfig imported = import_config(path);
    records.push_back(measure_config(imported, params.fermion));
  }
  archive.finalize();
  return analyze(records, decorrelation);
}

Strategy2Result strategy2_replay(const std::string& archive_dir,
                                 const FermionParams& fermion) {
  fermion.validate();
  std::vector<Strategy2Record> records;
  std::int64_t decorrelation = 0;
  std::uint64_t prev_sweep = 0;
  for (const auto& path : archive_files(archive_dir)) {
    const ImportedConfig imported = import_config(path);
    if (!records.empty())
      decorrelation =
          static_cast<std::int64_t>(imported.meta.sweep_index - prev_sweep);
    prev_sweep = imported.meta.sweep_index;
    records.push_back(measure_config(imported, fermion));
  }
  if (records.empty())
    throw std::runtime_error("archive " + archive_dir + " is empty");
  return analyze(records, decorrelation);
}

Eigen::MatrixXcd condensate_link(const Eigen::VectorXcd& phi_x,
                                 const Eigen::VectorXcd& phi_y) {
  if (phi_x.size() != phi_y.size())
    throw std::invalid_argument("site vector dimensions differ");
  return phi_x.conjugate() * phi_y.transpose();
}

Eigen::MatrixXcd polar_project(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double cost_estimate(double size_ratio, double spacing_ratio) {
  if (size_ratio <= 0.0 || spacing_ratio <= 0.0)
    throw std::invalid_argument("cost ratios must be positive");
  return std::pow(size_ratio, 5.0) * std::pow(spacing_ratio, -7.0);
}

}  // namespace lgt
