// Batch front end: Monte Carlo chains, Hamiltonian spectra, the Strategy II
// pipeline, benchmarks, and configuration-file utilities.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lgt/bench.hpp"
#include "lgt/fermion.hpp"
#include "lgt/hamiltonian.hpp"
#include "lgt/pipeline.hpp"
#include "lgt/wilson.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<int> parse_dims(const std::string& dims) {
  std::vector<int> extents;
  std::stringstream ss(dims);
  std::string tok;
  while (std::getline(ss, tok, 'x')) extents.push_back(std::stoi(tok));
  return extents;
}

std::string default_out_dir() {
  const char* env = std::getenv("LGT_OUT_DIR");
  return env ? env : ".";
}

// --beta and --g2 are redundant via beta = 2N/g^2; giving both is an error
double resolve_beta(const std::optional<double>& beta,
                    const std::optional<double>& g2, lgt::Group group) {
  if (beta.has_value() == g2.has_value())
    throw CLI::ValidationError("give exactly one of --beta or --g2");
  if (beta) return *beta;
  return lgt::beta_from_coupling(*g2, group);
}

void write_manifest(const std::string& dir, const std::string& command,
                    const json& params) {
  json m;
  m["command"] = command;
  m["parameters"] = params;
  std::ofstream out(fs::path(dir) / "manifest.json");
  out << m.dump(2) << "\n";
}

struct McFlags {
  std::string group = "su2";
  std::optional<double> beta, g2;
  std::string dims = "4x4x4x4";
  std::int64_t sweeps = 1000;
  std::int64_t therm = 200;
  std::uint64_t seed = 1;
  std::int64_t measure_every = 1;
  std::string algorithm = "metropolis";
  int workers = 1;
  std::string start = "hot";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--group", group, "gauge group: u1, su2, su3");
    cmd->add_option("--beta", beta, "lattice coupling beta");
    cmd->add_option("--g2", g2,
                    "bare coupling g^2; beta = 2N/g^2 (N = 1 for u1)");
    cmd->add_option("--dims", dims, "lattice extents, e.g. 8x8 or 4x4x4x4");
    cmd->add_option("--sweeps", sweeps, "measurement sweeps");
    cmd->add_option("--therm", therm, "thermalization sweeps");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--measure-every", measure_every, "sweeps per measurement");
    cmd->add_option("--algorithm", algorithm, "metropolis or heatbath");
    cmd->add_option("--workers", workers,
                    "parallel sweep workers (reproducible per worker count)");
    cmd->add_option("--start", start, "hot or cold start");
  }

  lgt::McParams params(lgt::Group g) const {
    lgt::McParams p;
    p.beta = resolve_beta(beta, g2, g);
    p.n_sweeps = sweeps;
    p.n_therm = therm;
    p.seed = seed;
    p.measure_every = measure_every;
    p.n_workers = workers;
    if (algorithm == "heatbath")
      p.algorithm = lgt::UpdateAlgorithm::Heatbath;
    else if (algorithm != "metropolis")
      throw CLI::ValidationError("unknown algorithm '" + algorithm + "'");
    return p;
  }

  json to_json(double resolved_beta) const {
    return {{"group", group},       {"beta", resolved_beta},
            {"dims", dims},         {"sweeps", sweeps},
            {"therm", therm},       {"seed", seed},
            {"measure_every", measure_every},
            {"algorithm", algorithm}, {"workers", workers},
            {"start", start}};
  }
};

int cmd_run_mc(const McFlags& flags, const std::string& out_dir) {
  const lgt::Group group = lgt::group_from_name(flags.group);
  const lgt::LatticeGeometry geom(parse_dims(flags.dims));
  const lgt::McParams params = flags.params(group);
  const lgt::StartMode start =
      flags.start == "cold" ? lgt::StartMode::Cold : lgt::StartMode::Hot;
  fs::create_directories(out_dir);

  lgt::GaugeConfiguration final_config = lgt::GaugeConfiguration::cold(geom, group);
  const auto series = lgt::run_chain(params, geom, group, start, &final_config);
  series.write_csv((fs::path(out_dir) / "observables.csv").string());
  lgt::export_config(final_config,
                     {params.beta, params.seed,
                      static_cast<std::uint64_t>(params.n_therm + params.n_sweeps)},
                     (fs::path(out_dir) / "final.lgc").string());
  write_manifest(out_dir, "run-mc", flags.to_json(params.beta));
  std::printf("wrote %zu measurements to %s\n", series.size(), out_dir.c_str());
  return 0;
}

int cmd_hamiltonian(const std::string& dims, int cutoff, double g2,
                    const std::string& sector, int k, std::int64_t budget,
                    const std::string& out_dir) {
  const auto extents = parse_dims(dims);
  if (extents.size() != 2)
    throw CLI::ValidationError("hamiltonian requires a 2D lattice, e.g. 2x2");
  lgt::HamiltonianLattice lat{extents[0], extents[1], true};
  std::optional<std::vector<int>> charges;
  if (sector == "projected")
    charges = std::vector<int>(lat.n_sites(), 0);
  else if (sector != "full")
    throw CLI::ValidationError("sector must be 'full' or 'projected'");
  const lgt::GaugeBasis basis(lat, cutoff, charges, budget);
  const auto h = lgt::build_hamiltonian(basis, g2);

  // Gauss-law report: max |[H, G_x]| entry over all sites
  double worst = 0.0;
  for (int s = 0; s < lat.n_sites(); ++s) {
    const auto g = lgt::gauss_generator(basis, s);
    const lgt::SparseCMat comm = (h.matrix * g - g * h.matrix).pruned();
    double site_max = 0.0;
    for (int col = 0; col < comm.outerSize(); ++col)
      for (lgt::SparseCMat::InnerIterator it(comm, col); it; ++it)
        site_max = std::max(site_max, std::abs(it.value()));
    worst = std::max(worst, site_max);
  }

  const auto pairs = lgt::ground_state(h, k);
  fs::create_directories(out_dir);
  lgt::write_spectrum_csv((fs::path(out_dir) / "spectrum.csv").string(),
                          pairs.values);
  basis.write_states((fs::path(out_dir) / "basis.txt").string());
  write_manifest(out_dir, "hamiltonian",
                 {{"dims", dims},
                  {"cutoff", cutoff},
                  {"g2", g2},
                  {"sector", sector},
                  {"k", k},
                  {"basis_dim", basis.dim()}});
  std::printf("basis dimension %lld\n", static_cast<long long>(basis.dim()));
  std::printf("gauss law: max |[H,G_x]| = %.3g (%s)\n", worst,
              worst <= 1e-12 ? "all commutators 0" : "VIOLATION");
  if (pairs.values.size() >= 2)
    std::printf("E0 = %.12g  E1 = %.12g  gap = %.12g\n", pairs.values[0],
                pairs.values[1], pairs.values[1] - pairs.values[0]);
  return worst <= 1e-12 ? 0 : 1;
}

int cmd_strategy2(const McFlags& flags, double mass, double hopping,
                  bool antiperiodic, int n_configs,
                  const std::string& out_dir) {
  const lgt::Group group = lgt::group_from_name(flags.group);
  const lgt::LatticeGeometry geom(parse_dims(flags.dims));
  lgt::Strategy2Params params;
  params.mc = flags.params(group);
  params.fermion = {mass, hopping, antiperiodic};
  params.n_configs = n_configs;
  params.start =
      flags.start == "cold" ? lgt::StartMode::Cold : lgt::StartMode::Hot;

  const std::string archive = (fs::path(out_dir) / "archive").string();
  const auto result = lgt::strategy2_run(params, geom, group, archive);
  fs::create_directories(out_dir);
  json params_json = flags.to_json(params.mc.beta);
  params_json["mass"] = mass;
  params_json["hopping"] = hopping;
  params_json["antiperiodic"] = antiperiodic;
  params_json["n_configs"] = n_configs;
  write_manifest(out_dir, "strategy2", params_json);

  std::printf("decorrelation: %lld sweeps\n",
              static_cast<long long>(result.decorrelation_sweeps));
  std::printf("quenched   plaquette = %.12g +- %.2g\n",
              result.quenched_plaquette, result.quenched_plaquette_err);
  std::printf("reweighted plaquette = %.12g +- %.2g\n",
              result.reweighted_plaquette, result.reweighted_plaquette_err);
  std::printf("quenched   correlator = %.12g +- %.2g\n",
              result.quenched_correlator, result.quenched_correlator_err);
  std::printf("reweighted correlator = %.12g +- %.2g\n",
              result.reweighted_correlator, result.reweighted_correlator_err);
  if (hopping == 0.0)
    std::printf("t = 0 static limit: reweighted == quenched (%s)\n",
                result.reweighted_plaquette == result.quenched_plaquette
                    ? "exact"
                    : "MISMATCH");
  return 0;
}

int cmd_bench(const std::string& group_name, double beta,
              const std::vector<int>& ns_list, int nt, int sweeps,
              const std::string& mode, std::uint64_t seed,
              const std::string& out_dir) {
  const lgt::Group group = lgt::group_from_name(group_name);
  fs::create_directories(out_dir);
  json params = {{"group", group_name}, {"beta", beta}, {"nt", nt},
                 {"ns", ns_list},       {"sweeps", sweeps}, {"mode", mode}};
  if (mode == "time") {
    std::vector<std::vector<int>> geometries;
    for (int ns : ns_list) geometries.push_back({ns, ns, ns, nt});
    const auto records = lgt::time_sweeps(group, beta, geometries,
                                          std::max(10, sweeps),
                                          lgt::UpdateAlgorithm::Metropolis,
                                          seed);
    lgt::write_timing_csv((fs::path(out_dir) / "timing.csv").string(),
                          records);
    for (const auto& r : records)
      std::printf("links %lld: %.6g s/sweep\n",
                  static_cast<long long>(r.links), r.seconds_per_sweep);
    if (records.size() >= 3) {
      const auto fit = lgt::fit_scaling_exponent(records);
      std::printf("time ~ volume^%.3f +- %.3f\n", fit.exponent,
                  fit.std_error);
    }
  } else if (mode == "autocorr") {
    std::ofstream out(fs::path(out_dir) / "autocorr.csv");
    out << "ns,tau_int,window,series_len\n";
    for (int ns : ns_list) {
      lgt::McParams mc;
      mc.beta = beta;
      mc.seed = seed;
      mc.n_therm = 200;
      mc.n_sweeps = sweeps;
      mc.algorithm = group == lgt::Group::SU3
                         ? lgt::UpdateAlgorithm::Metropolis
                         : lgt::UpdateAlgorithm::Heatbath;
      mc.measure_polyakov = false;
      lgt::LatticeGeometry geom({ns, ns, ns, nt});
      const auto series =
          lgt::run_chain(mc, geom, group, lgt::StartMode::Hot);
      const auto ac = lgt::integrated_autocorrelation(series.plaquette);
      char buf[128];
      std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%zu\n", ns, ac.tau_int,
                    ac.window, ac.series_len);
      out << buf;
      std::printf("ns=%d tau_int=%.3f window=%d\n", ns, ac.tau_int, ac.window);
    }
  } else {
    throw CLI::ValidationError("mode must be 'time' or 'autocorr'");
  }
  write_manifest(out_dir, "bench", params);
  return 0;
}

int cmd_config_inspect(const std::string& file) {
  try {
    const auto report = lgt::inspect_config(file);
    std::printf("format version: %u\n", report.version);
    std::printf("group: %s\n",
                lgt::group_name(lgt::group_from_dim(report.group_n)));
    std::string dims;
    for (std::size_t i = 0; i < report.extents.size(); ++i)
      dims += (i ? "x" : "") + std::to_string(report.extents[i]);
    std::printf("lattice: %s (%lld links)\n", dims.c_str(),
                static_cast<long long>(report.link_count));
    std::printf("beta: %.17g\nseed: %llu\nsweep index: %llu\n",
                report.meta.beta,
                static_cast<unsigned long long>(report.meta.seed),
                static_cast<unsigned long long>(report.meta.sweep_index));
    std::printf("OK\n");
    return 0;
  } catch (const lgt::ChecksumError& e) {
    std::printf("CHECKSUM MISMATCH: %s\n", e.what());
    return 1;
  } catch (const lgt::UnitarityError& e) {
    std::printf("UNITARITY VIOLATION: %s\n", e.what());
    return 1;
  } catch (const lgt::FormatError& e) {
    std::printf("INVALID FILE: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lattice gauge theory toolkit"};
  app.require_subcommand(1);

  // run-mc
  auto* run_mc = app.add_subcommand("run-mc", "sample the Wilson action");
  McFlags mc_flags;
  mc_flags.add_to(run_mc);
  std::string out_dir = default_out_dir();
  run_mc->add_option("--out", out_dir, "output directory");

  // hamiltonian
  auto* ham = app.add_subcommand(
      "hamiltonian", "diagonalize the 2D U(1) electric-basis Hamiltonian");
  std::string ham_dims = "2x2";
  int cutoff = 1;
  double ham_g2 = 1.0;
  std::string sector = "projected";
  int n_eigs = 4;
  std::int64_t budget = 8'000'000;
  std::string ham_out = default_out_dir();
  ham->add_option("--dims", ham_dims, "2D spatial lattice, e.g. 2x2");
  ham->add_option("--cutoff", cutoff, "electric-field cutoff (>= 1)")
      ->check(CLI::Range(1, 16));
  ham->add_option("--g2", ham_g2, "coupling g^2");
  ham->add_option("--sector", sector, "full or projected (zero charge)");
  ham->add_option("-k,--eigenpairs", n_eigs, "number of eigenpairs");
  ham->add_option("--budget", budget, "basis dimension budget");
  ham->add_option("--out", ham_out, "output directory");

  // strategy2
  auto* s2 = app.add_subcommand(
      "strategy2", "quenched backgrounds + determinant-reweighted fermions");
  McFlags s2_flags;
  s2_flags.add_to(s2);
  double mass = 0.5, hopping = 1.0;
  bool antiperiodic = true;
  int n_configs = 5;
  std::string s2_out = default_out_dir();
  s2->add_option("--mass", mass, "fermion mass m");
  s2->add_option("--t", hopping, "hopping amplitude t (0 = static limit)");
  s2->add_flag("--antiperiodic,!--periodic-time", antiperiodic,
               "antiperiodic temporal phase for fermions");
  s2->add_option("--n-configs", n_configs, "number of decorrelated snapshots");
  s2->add_option("--out", s2_out, "output directory");

  // bench
  auto* bench = app.add_subcommand("bench", "sweep timing / autocorrelation");
  std::string bench_group = "su2";
  double bench_beta = 2.2;
  std::vector<int> ns_list = {4, 6, 8};
  int nt = 4;
  int bench_sweeps = 200;
  std::string bench_mode = "time";
  std::uint64_t bench_seed = 1;
  std::string bench_out = default_out_dir();
  bench->add_option("--group", bench_group, "gauge group");
  bench->add_option("--beta", bench_beta, "coupling");
  bench->add_option("--ns", ns_list, "spatial extents N_s");
  bench->add_option("--nt", nt, "temporal extent");
  bench->add_option("--sweeps", bench_sweeps, "timed/measured sweeps");
  bench->add_option("--mode", bench_mode, "time or autocorr");
  bench->add_option("--seed", bench_seed, "RNG seed");
  bench->add_option("--out", bench_out, "output directory");

  // config-inspect
  auto* inspect =
      app.add_subcommand("config-inspect", "validate a configuration file");
  std::string inspect_file;
  inspect->add_option("file", inspect_file, "configuration file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (run_mc->parsed()) return cmd_run_mc(mc_flags, out_dir);
    if (ham->parsed())
      return cmd_hamiltonian(ham_dims, cutoff, ham_g2, sector, n_eigs, budget,
                             ham_out);
    if (s2->parsed())
      return cmd_strategy2(s2_flags, mass, hopping, antiperiodic, n_configs,
                           s2_out);
    if (bench->parsed())
      return cmd_bench(bench_group, bench_beta, ns_list, nt, bench_sweeps,
                       bench_mode, bench_seed, bench_out);
    if (inspect->parsed()) return cmd_config_inspect(inspect_file);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
