#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgt/group.hpp"

namespace lgt {

using SparseCMat = Eigen::SparseMatrix<Complex>;

// 2D spatial lattice for the Hamiltonian formulation. Periodic by default;
// the open-boundary variant exists for single-plaquette style systems.
struct HamiltonianLattice {
  int lx = 2;
  int ly = 2;
  bool periodic = true;

  int n_sites() const { return lx * ly; }
  int n_links() const;
  int n_plaquettes() const;

  int site(int x, int y) const { return x + lx * y; }

  // link id for the link leaving (x,y) in direction dir (0 = x, 1 = y);
  // -1 if absent (open boundary)
  int link(int x, int y, int dir) const;

  // the four links of the plaquette at lower-left corner (x,y), with the
  // electric-field shift each one receives under U_p (+1 forward, -1
  // reversed)
  struct PlaquetteLinks {
    int l[4];
    int shift[4];
  };
  std::vector<PlaquetteLinks> plaquettes() const;

  // (link, +1) if the link leaves the site, (link, -1) if it enters
  std::vector<std::vector<std::pair<int, int>>> site_incidence() const;
};

// Electric-field occupation basis with per-link eigenvalues in [-cutoff,
// cutoff]. In projected mode only states satisfying the divergence
// constraint at every site are retained.
class GaugeBasis {
 public:
  // charges: one integer per site (empty = full, unprojected basis).
  // max_dim is the memory budget on the resulting basis dimension.
  GaugeBasis(const HamiltonianLattice& lat, int cutoff,
             std::optional<std::vector<int>> charges = std::nullopt,
             std::int64_t max_dim = 8'000'000);

  const HamiltonianLattice& lattice() const { return lat_; }
  int cutoff() const { return cutoff_; }
  bool projected() const { return projected_; }
  std::int64_t dim() const { return dim_; }

  // per-link electric eigenvalues of basis state i
  std::vector<int> state(std::int64_t i) const;

  // full-space code of basis state i (digits base 2*cutoff+1)
  std::uint64_t code(std::int64_t i) const;

  // basis index of a full-space code; -1 if not in the basis
  std::int64_t index_of_code(std::uint64_t code) const;

  // divergence of E at every site for basis state i
  std::vector<int> divergence(std::int64_t i) const;

  void write_states(const std::string& path) const;

 private:
  HamiltonianLattice lat_;
  int cutoff_;
  bool projected_;
  std::vector<int> charges_;
  std::int64_t dim_;
  std::uint64_t full_dim_;
  std::vector<std::uint64_t> codes_;  // projected mode only, sorted
};

struct HamiltonianOperator {
  SparseCMat matrix;
  double g_squared = 1.0;
};

// Diagonal electric-field operator E_l.
SparseCMat electric_operator(const GaugeBasis& basis, int link);

// Link operator U_l: raises E_l by one unit, annihilating states at the
// cutoff boundary.
SparseCMat link_raising_operator(const GaugeBasis& basis, int link);

// H = g^2/2 sum_links E^2 - (2/g^2) sum_plaq (1 - Re U_p)
HamiltonianOperator build_hamiltonian(const GaugeBasis& basis,
                                      double g_squared);

// Diagonal lattice divergence of E at the site.
SparseCMat gauss_generator(const GaugeBasis& basis, int site);

struct EigenPairs {
  std::vector<double> values;           // ascending
  std::vector<Eigen::VectorXcd> vectors;
};

// Lowest k eigenpairs of a sparse Hermitian matrix. Lanczos with full
// reorthogonalization; dense fallback for small dimensions. Residual
// contract ||Hv - lambda v|| <= 1e-8 ||H||.
EigenPairs ground_state(const SparseCMat& h, int k, std::uint64_t seed = 7);

inline EigenPairs ground_state(const HamiltonianOperator& h, int k,
                               std::uint64_t seed = 7) {
  return ground_state(h.matrix, k, seed);
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<double>& values);

}  // namespace lgt
