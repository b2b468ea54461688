#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgt/group.hpp"
#include "lgt/lattice.hpp"

namespace lgt {

// One GroupElement per directed link; the integration variable of the
// partition function.
struct GaugeConfiguration {
  LatticeGeometry geometry;
  Group group;
  std::vector<GroupMatrix> links;  // indexed by LatticeGeometry link index

  GroupElement link(std::int64_t l) const { return {group, links[l]}; }

  static GaugeConfiguration cold(const LatticeGeometry& geom, Group g);
  static GaugeConfiguration hot(const LatticeGeometry& geom, Group g,
                                RngStream& rng);
};

enum class UpdateAlgorithm { Metropolis, Heatbath };

struct McParams {
  double beta = 1.0;
  std::int64_t n_sweeps = 1000;
  std::int64_t n_therm = 200;
  std::uint64_t seed = 1;
  double proposal_step = 0.5;  // Metropolis kick size, in (0, pi]
  std::int64_t measure_every = 1;
  UpdateAlgorithm algorithm = UpdateAlgorithm::Metropolis;
  bool tune_proposal = true;       // aim for ~50% acceptance during therm
  std::int64_t reunitarize_every = 100;  // sweeps; 0 disables
  int n_workers = 1;
  bool measure_polyakov = true;

  void validate() const;
};

struct ObservableSeries {
  std::vector<std::int64_t> sweep;
  std::vector<double> plaquette;
  std::vector<double> action;
  std::vector<Complex> polyakov;  // empty if not measured

  std::size_t size() const { return sweep.size(); }
  void write_csv(const std::string& path) const;
};

// beta = 2N/g^2
double beta_from_coupling(double g_squared, Group g);

// Oriented product U1 U2 U3^dag U4^dag around the plaquette loop.
GroupElement plaquette_product(const GaugeConfiguration& config,
                               std::int64_t plaq);

// S = sum_p (1 - (1/N) Re Tr U_p)
double action(const GaugeConfiguration& config);

double average_plaquette(const GaugeConfiguration& config);

// Sum over the 2(ndim-1) plaquettes containing the link of the product of
// the other three oriented links, arranged so that
// sum_p Re Tr U_p = Re Tr(U_link * staple_sum). The change of the action
// under U -> U' is -(1/N) Re Tr((U' - U) * staple_sum).
GroupMatrix staple_sum(const GaugeConfiguration& config, std::int64_t link);

// One full-lattice Metropolis sweep; returns the acceptance fraction.
// streams.size() is the worker count: 1 = sequential fixed-order sweep,
// >1 = checkerboard-parallel (requires even extents).
double metropolis_sweep(GaugeConfiguration& config, const McParams& params,
                        std::vector<RngStream>& streams);

// Exact conditional resampling of every link. U(1) and SU(2) only.
void heatbath_sweep(GaugeConfiguration& config, const McParams& params,
                    std::vector<RngStream>& streams);

// U_{x,mu} -> g_x U_{x,mu} g_{x+mu}^dag
GaugeConfiguration gauge_transform(const GaugeConfiguration& config,
                                   const std::vector<GroupElement>& g);

// Gauge-transform all time-direction links to the identity except on the
// final time slice (the periodic obstruction keeps one Polyakov line per
// spatial site).
GaugeConfiguration temporal_gauge_fix(const GaugeConfiguration& config);

// Spatial average of (1/N) Tr of the time-winding link product.
Complex polyakov_loop(const GaugeConfiguration& config);

void reunitarize_links(GaugeConfiguration& config);

enum class StartMode { Hot, Cold };

// Thermalize, then measure every measure_every sweeps. Bit-reproducible
// from (seed, params, geometry, group) in sequential mode. If final_config
// is non-null the last configuration is stored there.
ObservableSeries run_chain(const McParams& params, const LatticeGeometry& geom,
                           Group group, StartMode start,
                           GaugeConfiguration* final_config = nullptr);

}  // namespace lgt
