#include "lgt/wilson.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

namespace lgt {

namespace {

const Complex I(0.0, 1.0);
constexpr double kTwoPi = 6.283185307179586476925286766559;

AlgebraElement random_kick(Group g, double step, RngStream& rng) {
  AlgebraElement v = AlgebraElement::zero(g);
  for (Eigen::Index a = 0; a < v.coeffs.size(); ++a)
    v.coeffs[a] = step * rng.uniform(-1.0, 1.0);
  return v;
}

// von Mises sample with mode 0, concentration kappa (Best-Fisher).
double von_mises(double kappa, RngStream& rng) {
  if (!std::isfinite(kappa))
    throw std::runtime_error("heatbath: non-finite concentration");
  if (kappa < 1e-12) return rng.uniform(-0.5 * kTwoPi, 0.5 * kTwoPi);
  const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
  const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double z = std::cos(0.5 * kTwoPi * rng.uniform());
    const double f = (1.0 + r * z) / (r + z);
    const double c = kappa * (r - f);
    const double u2 = rng.uniform();
    if (c * (2.0 - c) - u2 > 0.0 ||
        (u2 > 0.0 && std::log(c / u2) + 1.0 - c >= 0.0)) {
      const double theta = std::acos(std::clamp(f, -1.0, 1.0));
      return rng.uniform() < 0.5 ? -theta : theta;
    }
  }
}

// SU(2) heatbath trace coordinate: P(w0) ~ sqrt(1-w0^2) exp(a w0) (Creutz).
double su2_w0(double a, RngStream& rng) {
  if (!std::isfinite(a))
    throw std::runtime_error("heatbath: non-finite staple norm");
  if (a < 1e-12) {
    // conditional = Haar
    while (true) {
      const double w0 = rng.uniform(-1.0, 1.0);
      if (rng.uniform() < std::sqrt(1.0 - w0 * w0)) return w0;
    }
  }
  const double zmin = std::exp(-2.0 * a);
  while (true) {
    const double z = zmin + (1.0 - zmin) * rng.uniform();
    const double w0 = 1.0 + std::log(z) / a;
    const double r = rng.uniform();
    if (r * r < 1.0 - w0 * w0) return w0;
  }
}

GroupMatrix su2_from_quaternion(double w0, double w1, double w2, double w3) {
  GroupMatrix u(2, 2);
  u(0, 0) = Complex(w0, w3);
  u(0, 1) = Complex(w2, w1);
  u(1, 0) = Complex(-w2, w1);
  u(1, 1) = Complex(w0, -w3);
  return u;
}

// Conditional resample of one link given its staple sum.
void heatbath_link(GaugeConfiguration& config, double beta, std::int64_t link,
                   RngStream& rng) {
  const GroupMatrix a = staple_sum(config, link);
  if (config.group == Group::U1) {
    // weight ~ exp(beta |a| cos(theta + arg a))
    const Complex s = a(0, 0);
    const double theta = von_mises(beta * std::abs(s), rng) - std::arg(s);
    GroupMatrix u(1, 1);
    u(0, 0) = std::exp(I * theta);
    config.links[link] = u;
    return;
  }
  // SU(2): a = k V with V in SU(2); weight ~ exp(beta k Tr(UV)/2).
  // Extract the quaternion components of the staple sum explicitly: this
  // is exact in exact arithmetic and projects out the numerical noise that
  // would otherwise be amplified sweep over sweep.
  const double q0 = 0.5 * (a(0, 0).real() + a(1, 1).real());
  const double q3 = 0.5 * (a(0, 0).imag() - a(1, 1).imag());
  const double q1 = 0.5 * (a(0, 1).imag() + a(1, 0).imag());
  const double q2 = 0.5 * (a(0, 1).real() - a(1, 0).real());
  const double k = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
  if (k < 1e-12) {
    config.links[link] = haar_sample(Group::SU2, rng).mat;
    return;
  }
  const GroupMatrix v = su2_from_quaternion(q0 / k, q1 / k, q2 / k, q3 / k);
  const double w0 = su2_w0(beta * k, rng);
  const double wr = std::sqrt(std::max(0.0, 1.0 - w0 * w0));
  // uniform direction on the 2-sphere
  const double ct = rng.uniform(-1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double phi = rng.uniform(0.0, kTwoPi);
  const GroupMatrix w = su2_from_quaternion(w0, wr * st * std::cos(phi),
                                            wr * st * std::sin(phi), wr * ct);
  config.links[link] = w * v.adjoint();
}

// Metropolis update of one link; returns 1 if accepted.
int metropolis_link(GaugeConfiguration& config, double beta, double step,
                    std::int64_t link, RngStream& rng) {
  const GroupMatrix a = staple_sum(config, link);
  const GroupMatrix& u = config.links[link];
  const GroupMatrix uprime =
      exp_map(random_kick(config.group, step, rng)).mat * u;
  const double n = matrix_dim(config.group);
  const double delta_s = -((uprime - u) * a).trace().real() / n;
  if (delta_s <= 0.0 || rng.uniform() < std::exp(-beta * delta_s)) {
    config.links[link] = uprime;
    return 1;
  }
  return 0;
}

template <typename PerLink>
void parallel_over_sets(const GaugeConfiguration& config, int n_workers,
                        PerLink&& body) {
  const auto sets = checkerboard_partition(config.geometry);
  for (const auto& set : sets) {
    std::vector<std::thread> pool;
    const std::size_t chunk = (set.size() + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(set.size(), lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, w] {
        for (std::size_t i = lo; i < hi; ++i) body(set[i], w);
      });
    }
    for (auto& t : pool) t.join();
  }
}

}  // namespace

GaugeConfiguration GaugeConfiguration::cold(const LatticeGeometry& geom,
                                            Group g) {
  GaugeConfiguration c{geom, g, {}};
  c.links.assign(geom.link_count(), identity(g).mat);
  return c;
}

GaugeConfiguration GaugeConfiguration::hot(const LatticeGeometry& geom,
                                           Group g, RngStream& rng) {
  GaugeConfiguration c{geom, g, {}};
  c.links.reserve(geom.link_count());
  for (std::int64_t l = 0; l < geom.link_count(); ++l)
    c.links.push_back(haar_sample(g, rng).mat);
  return c;
}

void McParams::validate() const {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  if (proposal_step <= 0.0)
    throw std::invalid_argument("proposal_step must be > 0");
  if (n_workers < 1) throw std::invalid_argument("n_workers must be >= 1");
  if (measure_every < 1)
    throw std::invalid_argument("measure_every must be >= 1");
}

double beta_from_coupling(double g_squared, Group g) {
  if (g_squared <= 0.0)
    throw std::invalid_argument("coupling g^2 must be positive");
  return 2.0 * matrix_dim(g) / g_squared;
}

GroupElement plaquette_product(const GaugeConfiguration& config,
                               std::int64_t plaq) {
  const auto loop = plaquette_links(config.geometry, plaq);
  GroupMatrix u = config.links[loop[0].link];
  for (int i = 1; i < 4; ++i) {
    const GroupMatrix& v = config.links[loop[i].link];
    if (loop[i].forward)
      u = u * v;
    else
      u = u * v.adjoint();
  }
  return {config.group, u};
}

double action(const GaugeConfiguration& config) {
  double s = 0.0;
  for (std::int64_t p = 0; p < config.geometry.plaquette_count(); ++p)
    s += 1.0 - trace_real_normalized(plaquette_product(config, p));
  return s;
}

double average_plaquette(const GaugeConfiguration& config) {
  double sum = 0.0;
  const std::int64_t np = config.geometry.plaquette_count();
  for (std::int64_t p = 0; p < np; ++p)
    sum += trace_real_normalized(plaquette_product(config, p));
  return sum / static_cast<double>(np);
}

GroupMatrix staple_sum(const GaugeConfiguration& config, std::int64_t link) {
  const int n = matrix_dim(config.group);
  GroupMatrix sum = GroupMatrix::Zero(n, n);
  for (const Staple& st : link_staples(config.geometry, link)) {
    const GroupMatrix& u1 = config.links[st.l1];
    const GroupMatrix& u2 = config.links[st.l2];
    const GroupMatrix& u3 = config.links[st.l3];
    if (st.forward)
      sum += u1 * u2.adjoint() * u3.adjoint();
    else
      sum += u1.adjoint() * u2.adjoint() * u3;
  }
  return sum;
}

double metropolis_sweep(GaugeConfiguration& config, const McParams& params,
                        std::vector<RngStream>& streams) {
  const std::int64_t nl = config.geometry.link_count();
  if (streams.size() == 1) {
    std::int64_t accepted = 0;
    for (std::int64_t l = 0; l < nl; ++l)
      accepted += metropolis_link(config, params.beta, params.proposal_step, l,
                                  streams[0]);
    return static_cast<double>(accepted) / static_cast<double>(nl);
  }
  std::vector<std::int64_t> accepted(streams.size(), 0);
  parallel_over_sets(config, static_cast<int>(streams.size()),
                     [&](std::int64_t link, int w) {
                       accepted[w] += metropolis_link(
                           config, params.beta, params.proposal_step, link,
                           streams[w]);
                     });
  std::int64_t total = 0;
  for (auto a : accepted) total += a;
  return static_cast<double>(total) / static_cast<double>(nl);
}

void heatbath_sweep(GaugeConfiguration& config, const McParams& params,
                    std::vector<RngStream>& streams) {
  if (config.group == Group::SU3)
    throw std::invalid_argument(
        "heatbath supports U(1) and SU(2) only; use Metropolis for SU(3)");
  const std::int64_t nl = config.geometry.link_count();
  if (streams.size() == 1) {
    for (std::int64_t l = 0; l < nl; ++l)
      heatbath_link(config, params.beta, l, streams[0]);
    return;
  }
  parallel_over_sets(config, static_cast<int>(streams.size()),
                     [&](std::int64_t link, int w) {
                       heatbath_link(config, params.beta, link, streams[w]);
                     });
}

GaugeConfiguration gauge_transform(const GaugeConfiguration& config,
                                   const std::vector<GroupElement>& g) {
  const auto& geom = config.geometry;
  if (static_cast<std::int64_t>(g.size()) != geom.volume())
    throw std::invalid_argument("gauge transform must cover all sites");
  for (const auto& gx : g)
    if (gx.group != config.group)
      throw std::invalid_argument("gauge transform group mismatch");
  GaugeConfiguration out = config;
  for (std::int64_t l = 0; l < geom.link_count(); ++l) {
    const std::int64_t x = geom.link_site(l);
    const std::int64_t y = geom.neighbor(x, geom.link_dir(l), +1);
    out.links[l] = g[x].mat * config.links[l] * g[y].mat.adjoint();
  }
  return out;
}

GaugeConfiguration temporal_gauge_fix(const GaugeConfiguration& config) {
  const auto& geom = config.geometry;
  const int tdir = geom.ndim() - 1;
  const int nt = geom.extents()[tdir];
  // Build g site by site along increasing t: g(x,0) = I,
  // g(x,t+1) = U_t(x,t)^dag g(x,t) ... arranged so transformed U_t = I
  // for t < nt-1.
  std::vector<GroupElement> g(geom.volume(), identity(config.group));
  for (int t = 0; t < nt - 1; ++t) {
    for (std::int64_t s = 0; s < geom.volume(); ++s) {
      const auto c = geom.site_coords(s);
      if (c[tdir] != t) continue;
      const std::int64_t up = geom.neighbor(s, tdir, +1);
      // transformed link g_x U g_{x+t}^dag = I  =>  g_{x+t} = g_x U
      g[up] = {config.group, g[s].mat * config.links[geom.link_index(s, tdir)]};
    }
  }
  return gauge_transform(config, g);
}

Complex polyakov_loop(const GaugeConfiguration& config) {
  const auto& geom = config.geometry;
  const int tdir = geom.ndim() - 1;
  const int nt = geom.extents()[tdir];
  Complex sum = 0.0;
  std::int64_t n_lines = 0;
  for (std::int64_t s = 0; s < geom.volume(); ++s) {
    if (geom.site_coords(s)[tdir] != 0) continue;
    GroupMatrix line = config.links[geom.link_index(s, tdir)];
    std::int64_t x = s;
    for (int t = 1; t < nt; ++t) {
      x = geom.neighbor(x, tdir, +1);
      line = line * config.links[geom.link_index(x, tdir)];
    }
    sum += line.trace() / static_cast<double>(matrix_dim(config.group));
    ++n_lines;
  }
  return sum / static_cast<double>(n_lines);
}

void reunitarize_links(GaugeConfiguration& config) {
  for (auto& u : config.links)
    u = reunitarize({config.group, u}).mat;
}

void ObservableSeries::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "sweep,plaquette,action,polyakov_re,polyakov_im\n";
  char buf[256];
  for (std::size_t i = 0; i < size(); ++i) {
    const Complex p = polyakov.empty() ? Complex(0, 0) : polyakov[i];
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(sweep[i]), plaquette[i], action[i],
                  p.real(), p.imag());
    out << buf;
  }
}

ObservableSeries run_chain(const McParams& params, const LatticeGeometry& geom,
                           Group group, StartMode start,
                           GaugeConfiguration* final_config) {
  params.validate();
  McParams p = params;
  std::vector<RngStream> streams;
  for (int w = 0; w < p.n_workers; ++w)
    streams.emplace_back(p.seed, static_cast<std::uint64_t>(w));
  if (p.n_workers > 1) {
    // fall back to sequential when the checkerboard partition is unavailable
    bool even = true;
    for (int e : geom.extents()) even = even && e % 2 == 0;
    if (!even) {
      streams.erase(streams.begin() + 1, streams.end());
      p.n_workers = 1;
    }
  }

  RngStream init_rng(p.seed, 0x1000);
  GaugeConfiguration config = (start == StartMode::Hot)
                                  ? GaugeConfiguration::hot(geom, group, init_rng)
                                  : GaugeConfiguration::cold(geom, group);

  auto sweep_once = [&]() -> double {
    if (p.algorithm == UpdateAlgorithm::Heatbath) {
      heatbath_sweep(config, p, streams);
      return 1.0;
    }
    return metropolis_sweep(config, p, streams);
  };

  std::int64_t total_sweeps = 0;
  auto maybe_reunitarize = [&]() {
    if (p.reunitarize_every > 0 && total_sweeps % p.reunitarize_every == 0)
      reunitarize_links(config);
  };

  // thermalization, with optional step tuning toward ~50% acceptance
  double acc_window = 0.0;
  std::int64_t window = 0;
  for (std::int64_t i = 0; i < p.n_therm; ++i) {
    acc_window += sweep_once();
    ++total_sweeps;
    ++window;
    maybe_reunitarize();
    if (p.tune_proposal && p.algorithm == UpdateAlgorithm::Metropolis &&
        window == 20) {
      const double acc = acc_window / window;
      p.proposal_step =
          std::clamp(p.proposal_step * std::max(0.5, std::min(2.0, acc / 0.5)),
                     1e-3, 0.5 * kTwoPi);
      acc_window = 0.0;
      window = 0;
    }
  }

  ObservableSeries series;
  for (std::int64_t i = 0; i < p.n_sweeps; ++i) {
    sweep_once();
    ++total_sweeps;
    maybe_reunitarize();
    if ((i + 1) % p.measure_every != 0) continue;
    series.sweep.push_back(total_sweeps);
    const double avg = average_plaquette(config);
    series.plaquette.push_back(avg);
    series.action.push_back((1.0 - avg) *
                            static_cast<double>(geom.plaquette_count()));
    if (p.measure_polyakov) series.polyakov.push_back(polyakov_loop(config));
  }
  if (final_config) *final_config = std::move(config);
  return series;
}

}  // namespace lgt
