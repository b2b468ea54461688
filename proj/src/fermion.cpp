#include "lgt/fermion.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/LU>
#include <Eigen/SparseLU>
#include <stdexcept>

namespace lgt {

namespace {

const Complex I(0.0, 1.0);

// -1 on links that wrap the time boundary when the antiperiodic phase is on
double boundary_phase(const LatticeGeometry& geom, std::int64_t site, int mu,
                      bool antiperiodic) {
  if (!antiperiodic || mu != geom.ndim() - 1) return 1.0;
  const int nt = geom.extents()[mu];
  return geom.site_coords(site)[mu] == nt - 1 ? -1.0 : 1.0;
}

}  // namespace

void FermionParams::validate() const {
  // t = 0 with m = 0 makes every fermion operator singular; t = 0 alone is
  // the static limit and stays legal (the reweighting identity relies on it)
  if (hopping == 0.0 && mass == 0.0)
    throw std::invalid_argument("hopping t and mass m cannot both be zero");
}

SparseCMat hopping_operator(const GaugeConfiguration& config,
                            const FermionParams& params) {
  const auto& geom = config.geometry;
  const int n = matrix_dim(config.group);
  const std::int64_t dim = geom.volume() * n;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(dim * (1 + 2 * geom.ndim()));
  for (std::int64_t x = 0; x < geom.volume(); ++x) {
    for (int a = 0; a < n; ++a)
      trips.emplace_back(x * n + a, x * n + a, params.mass);
    for (int mu = 0; mu < geom.ndim(); ++mu) {
      const std::int64_t y = geom.neighbor(x, mu, +1);
      const GroupMatrix& u = config.links[geom.link_index(x, mu)];
      const double phase =
          boundary_phase(geom, x, mu, params.temporal_antiperiodic);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const Complex v = -params.hopping * phase * u(a, b);
          trips.emplace_back(y * n + b, x * n + a, v);
          trips.emplace_back(x * n + a, y * n + b, std::conj(v));
        }
    }
  }
  SparseCMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

int spinor_dim(int ndim) {
  if (ndim == 2) return 2;
  if (ndim == 4) return 4;
  throw std::invalid_argument("Dirac operator supports 2 and 4 dimensions");
}

std::vector<Eigen::MatrixXcd> gamma_matrices(int ndim) {
  const int ns = spinor_dim(ndim);
  std::vector<Eigen::MatrixXcd> g(ndim, Eigen::MatrixXcd::Zero(ns, ns));
  if (ndim == 2) {
    g[0] << 0, 1, 1, 0;          // sigma_1
    g[1] << 0, -I, I, 0;         // sigma_2 (time)
    return g;
  }
  Eigen::Matrix2cd sigma[3];
  sigma[0] << 0, 1, 1, 0;
  sigma[1] << 0, -I, I, 0;
  sigma[2] << 1, 0, 0, -1;
  for (int k = 0; k < 3; ++k) {
    g[k].block<2, 2>(0, 2) = -I * sigma[k];
    g[k].block<2, 2>(2, 0) = I * sigma[k];
  }
  g[3].block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();  // time
  g[3].block<2, 2>(2, 0) = Eigen::Matrix2cd::Identity();
  return g;
}

Eigen::MatrixXcd gamma5(int ndim) {
  const auto g = gamma_matrices(ndim);
  Eigen::MatrixXcd g5 = g[0];
  for (int mu = 1; mu < ndim; ++mu) g5 = g5 * g[mu];
  if (ndim == 2) return -I * g5;  // -i g0 g1 = sigma_3
  return g5;
}

SparseCMat dirac_operator(const GaugeConfiguration& config,
                          const FermionParams& params) {
  const auto& geom = config.geometry;
  const int n = matrix_dim(config.group);
  const int ns = spinor_dim(geom.ndim());
  const auto gammas = gamma_matrices(geom.ndim());
  const std::int64_t dim = geom.volume() * n * ns;
  auto row = [&](std::int64_t site, int color, int spin) {
    return spin + ns * (color + static_cast<std::int64_t>(n) * site);
  };
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(dim * (1 + 2 * geom.ndim() * n));
  for (std::int64_t x = 0; x < geom.volume(); ++x) {
    for (int a = 0; a < n; ++a)
      for (int s = 0; s < ns; ++s)
        trips.emplace_back(row(x, a, s), row(x, a, s), -params.mass);
    for (int mu = 0; mu < geom.ndim(); ++mu) {
      const std::int64_t y = geom.neighbor(x, mu, +1);
      const GroupMatrix& u = config.links[geom.link_index(x, mu)];
      const double phase =
          boundary_phase(geom, x, mu, params.temporal_antiperiodic);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int s = 0; s < ns; ++s)
            for (int r = 0; r < ns; ++r) {
              const Complex gmu = gammas[mu](r, s);
              if (gmu == Complex(0, 0)) continue;
              // + (1/2) gamma^mu U_mu(x) psi(x+mu) at row x
              trips.emplace_back(row(x, a, r), row(y, b, s),
                                 0.5 * phase * gmu * u(a, b));
              // - (1/2) gamma^mu U_mu(x)^dag psi(x) at row x+mu
              trips.emplace_back(row(y, b, r), row(x, a, s),
                                 -0.5 * phase * gmu * std::conj(u(a, b)));
            }
    }
  }
  SparseCMat m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

LogDet determinant(const SparseCMat& op) {
  if (op.rows() > 4096)
    throw std::invalid_argument(
        "determinant: dimension exceeds the dense budget of 4096");
  Eigen::MatrixXcd dense(op);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(dense);
  double log_mag = 0.0;
  double phase = 0.0;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    const Complex d = lu.matrixLU()(i, i);
    log_mag += std::log(std::abs(d));
    phase += std::arg(d);
  }
  if (lu.permutationP().determinant() < 0) phase += 3.14159265358979323846;
  phase = std::remainder(phase, 2.0 * 3.14159265358979323846);
  return {log_mag, phase};
}

Eigen::VectorXcd propagator(const SparseCMat& op, Eigen::Index source) {
  if (source < 0 || source >= op.rows())
    throw std::invalid_argument("propagator source out of range");
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(op.rows());
  b[source] = 1.0;
  Eigen::BiCGSTAB<SparseCMat> krylov(op);
  krylov.setTolerance(1e-12);
  Eigen::VectorXcd x = krylov.solve(b);
  double resid = (op * x - b).norm();
  if (!(resid <= 1e-10)) {
    Eigen::SparseLU<SparseCMat> direct(op);
    if (direct.info() != Eigen::Success)
      throw std::runtime_error("propagator: operator is singular");
    x = direct.solve(b);
    resid = (op * x - b).norm();
    if (!(resid <= 1e-10))
      throw std::runtime_error(
          "propagator: solver residual " + std::to_string(resid) +
          " exceeds the 1e-10 contract (near-singular operator)");
  }
  return x;
}

}  // namespace lgt
