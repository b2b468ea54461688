#include "lgt/hamiltonian.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace lgt {

int HamiltonianLattice::n_links() const {
  if (periodic) return 2 * lx * ly;
  return (lx - 1) * ly + lx * (ly - 1);
}

int HamiltonianLattice::n_plaquettes() const {
  if (periodic) return lx * ly;
  return (lx - 1) * (ly - 1);
}

int HamiltonianLattice::link(int x, int y, int dir) const {
  if (periodic) return 2 * site(x, y) + dir;
  if (dir == 0) {
    if (x >= lx - 1) return -1;
    return x + (lx - 1) * y;
  }
  if (y >= ly - 1) return -1;
  return (lx - 1) * ly + site(x, y);
}

std::vector<HamiltonianLattice::PlaquetteLinks>
HamiltonianLattice::plaquettes() const {
  std::vector<PlaquetteLinks> out;
  const int px = periodic ? lx : lx - 1;
  const int py = periodic ? ly : ly - 1;
  for (int y = 0; y < py; ++y)
    for (int x = 0; x < px; ++x) {
      const int xp = periodic ? (x + 1) % lx : x + 1;
      const int yp = periodic ? (y + 1) % ly : y + 1;
      // U_p = U_x(x,y) U_y(x+1,y) U_x(x,y+1)^dag U_y(x,y)^dag
      PlaquetteLinks p;
      p.l[0] = link(x, y, 0);
      p.l[1] = link(xp, y, 1);
      p.l[2] = link(x, yp, 0);
      p.l[3] = link(x, y, 1);
      p.shift[0] = +1;
      p.shift[1] = +1;
      p.shift[2] = -1;
      p.shift[3] = -1;
      out.push_back(p);
    }
  return out;
}

std::vector<std::vector<std::pair<int, int>>>
HamiltonianLattice::site_incidence() const {
  std::vector<std::vector<std::pair<int, int>>> inc(n_sites());
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x)
      for (int dir = 0; dir < 2; ++dir) {
        const int l = link(x, y, dir);
        if (l < 0) continue;
        inc[site(x, y)].emplace_back(l, +1);
        const int xn = dir == 0 ? (x + 1) % lx : x;
        const int yn = dir == 1 ? (y + 1) % ly : y;
        inc[site(xn, yn)].emplace_back(l, -1);
      }
  return inc;
}

namespace {

std::vector<int> decode(std::uint64_t code, int n_links, int cutoff) {
  const std::uint64_t q = 2 * cutoff + 1;
  std::vector<int> e(n_links);
  for (int l = 0; l < n_links; ++l) {
    e[l] = static_cast<int>(code % q) - cutoff;
    code /= q;
  }
  return e;
}

std::vector<int> state_divergence(
    const std::vector<int>& e,
    const std::vector<std::vector<std::pair<int, int>>>& inc) {
  std::vector<int> div(inc.size(), 0);
  for (std::size_t s = 0; s < inc.size(); ++s)
    for (auto [l, sign] : inc[s]) div[s] += sign * e[l];
  return div;
}

}  // namespace

GaugeBasis::GaugeBasis(const HamiltonianLattice& lat, int cutoff,
                       std::optional<std::vector<int>> charges,
                       std::int64_t max_dim)
    : lat_(lat), cutoff_(cutoff), projected_(charges.has_value()) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be >= 1");
  const int nl = lat_.n_links();
  const std::uint64_t q = 2 * cutoff + 1;
  full_dim_ = 1;
  for (int l = 0; l < nl; ++l) {
    if (full_dim_ > (1ULL << 62) / q)
      throw std::runtime_error("basis dimension overflows the memory budget");
    full_dim_ *= q;
  }
  if (projected_) {
    charges_ = *charges;
    if (static_cast<int>(charges_.size()) != lat_.n_sites())
      throw std::invalid_argument("one charge per site required");
    const auto inc = lat_.site_incidence();
    for (std::uint64_t c = 0; c < full_dim_; ++c) {
      const auto e = decode(c, nl, cutoff_);
      const auto div = state_divergence(e, inc);
      bool keep = true;
      for (int s = 0; s < lat_.n_sites() && keep; ++s)
        keep = div[s] == charges_[s];
      if (keep) codes_.push_back(c);
      if (static_cast<std::int64_t>(codes_.size()) > max_dim)
        throw std::runtime_error(
            "projected basis dimension exceeds the memory budget of " +
            std::to_string(max_dim));
    }
    dim_ = static_cast<std::int64_t>(codes_.size());
  } else {
    if (full_dim_ > static_cast<std::uint64_t>(max_dim))
      throw std::runtime_error(
          "full basis dimension " + std::to_string(full_dim_) +
          " exceeds the memory budget of " + std::to_string(max_dim));
    dim_ = static_cast<std::int64_t>(full_dim_);
  }
}

std::vector<int> GaugeBasis::state(std::int64_t i) const {
  return decode(code(i), lat_.n_links(), cutoff_);
}

std::uint64_t GaugeBasis::code(std::int64_t i) const {
  return projected_ ? codes_[i] : static_cast<std::uint64_t>(i);
}

std::int64_t GaugeBasis::index_of_code(std::uint64_t code) const {
  if (!projected_) {
    return code < full_dim_ ? static_cast<std::int64_t>(code) : -1;
  }
  const auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
  if (it == codes_.end() || *it != code) return -1;
  return it - codes_.begin();
}

std::vector<int> GaugeBasis::divergence(std::int64_t i) const {
  return state_divergence(state(i), lat_.site_incidence());
}

void GaugeBasis::write_states(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  for (std::int64_t i = 0; i < dim_; ++i) {
    const auto e = state(i);
    for (std::size_t l = 0; l < e.size(); ++l)
      out << e[l] << (l + 1 == e.size() ? '\n' : ' ');
  }
}

SparseCMat electric_operator(const GaugeBasis& basis, int link) {
  SparseCMat m(basis.dim(), basis.dim());
  m.reserve(Eigen::VectorXi::Constant(basis.dim(), 1));
  for (std::int64_t i = 0; i < basis.dim(); ++i) {
    const int e = basis.state(i)[link];
    if (e != 0) m.insert(i, i) = static_cast<double>(e);
  }
  m.makeCompressed();
  return m;
}

SparseCMat link_raising_operator(const GaugeBasis& basis, int link) {
  // shift by one unit in the base-q code; valid only if the digit stays in
  // range
  const std::uint64_t q = 2 * basis.cutoff() + 1;
  std::uint64_t stride = 1;
  for (int l = 0; l < link; ++l) stride *= q;
  SparseCMat m(basis.dim(), basis.dim());
  m.reserve(Eigen::VectorXi::Constant(basis.dim(), 1));
  for (std::int64_t j = 0; j < basis.dim(); ++j) {
    const std::uint64_t code = basis.code(j);
    const int e = static_cast<int>((code / stride) % q) - basis.cutoff();
    if (e >= basis.cutoff()) continue;  // clipped at the boundary
    const std::int64_t i = basis.index_of_code(code + stride);
    if (i >= 0) m.insert(i, j) = 1.0;
  }
  m.makeCompressed();
  return m;
}

HamiltonianOperator build_hamiltonian(const GaugeBasis& basis,
                                      double g_squared) {
  if (g_squared <= 0.0) throw std::invalid_argument("g^2 must be positive");
  const auto& lat = basis.lattice();
  const auto plaqs = lat.plaquettes();
  const int nl = lat.n_links();
  const std::uint64_t q = 2 * basis.cutoff() + 1;
  std::vector<std::uint64_t> strides(nl);
  std::uint64_t s = 1;
  for (int l = 0; l < nl; ++l) {
    strides[l] = s;
    s *= q;
  }
  const std::int64_t dim = basis.dim();

  // target code of U_p^{+-1} applied to a state; -1 when clipped
  auto shifted_code = [&](const std::vector<int>& e, std::uint64_t code,
                          const HamiltonianLattice::PlaquetteLinks& p,
                          int direction) -> std::int64_t {
    std::int64_t out = static_cast<std::int64_t>(code);
    for (int i = 0; i < 4; ++i) {
      const int d = direction * p.shift[i];
      const int enew = e[p.l[i]] + d;
      if (enew < -basis.cutoff() || enew > basis.cutoff()) return -1;
      out += static_cast<std::int64_t>(d) *
             static_cast<std::int64_t>(strides[p.l[i]]);
    }
    return out;
  };

  // two passes: count entries per column, then insert
  SparseCMat h(dim, dim);
  Eigen::VectorXi counts = Eigen::VectorXi::Constant(dim, 1);
  for (std::int64_t j = 0; j < dim; ++j) {
    const auto e = basis.state(j);
    const std::uint64_t code = basis.code(j);
    for (const auto& p : plaqs)
      for (int dir : {+1, -1}) {
        const std::int64_t target = shifted_code(e, code, p, dir);
        if (target >= 0 && basis.index_of_code(target) >= 0) ++counts[j];
      }
  }
  h.reserve(counts);
  const double magnetic = 1.0 / g_squared;  // coefficient of U_p and U_p^dag
  const double offset =
      -2.0 / g_squared * static_cast<double>(plaqs.size());
  for (std::int64_t j = 0; j < dim; ++j) {
    const auto e = basis.state(j);
    const std::uint64_t code = basis.code(j);
    double diag = offset;
    for (int l = 0; l < nl; ++l)
      diag += 0.5 * g_squared * e[l] * e[l];
    h.insert(j, j) = diag;
    for (const auto& p : plaqs)
      for (int dir : {+1, -1}) {
        const std::int64_t target = shifted_code(e, code, p, dir);
        if (target < 0) continue;
        const std::int64_t i = basis.index_of_code(target);
        if (i >= 0) h.coeffRef(i, j) += magnetic;
      }
  }
  h.makeCompressed();
  return {std::move(h), g_squared};
}

SparseCMat gauss_generator(const GaugeBasis& basis, int site) {
  SparseCMat m(basis.dim(), basis.dim());
  m.reserve(Eigen::VectorXi::Constant(basis.dim(), 1));
  const auto inc = basis.lattice().site_incidence();
  for (std::int64_t i = 0; i < basis.dim(); ++i) {
    const auto e = basis.state(i);
    int div = 0;
    for (auto [l, sign] : inc[site]) div += sign * e[l];
    if (div != 0) m.insert(i, i) = static_cast<double>(div);
  }
  m.makeCompressed();
  return m;
}

void write_spectrum_csv(const std::string& path,
                        const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "index,eigenvalue\n";
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, values[i]);
    out << buf;
  }
}

}  // namespace lgt
