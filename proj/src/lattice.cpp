#include "lgt/lattice.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace lgt {

LatticeGeometry::LatticeGeometry(std::vector<int> extents)
    : extents_(std::move(extents)) {
  if (extents_.size() < 2 || extents_.size() > 4)
    throw std::invalid_argument("lattice dimension must be 2, 3, or 4");
  volume_ = 1;
  strides_.resize(extents_.size());
  for (std::size_t d = 0; d < extents_.size(); ++d) {
    if (extents_[d] < 2)
      throw std::invalid_argument("every lattice extent must be >= 2");
    strides_[d] = volume_;
    volume_ *= extents_[d];
  }
}

std::int64_t LatticeGeometry::site_index(const std::vector<int>& coords) const {
  std::int64_t s = 0;
  for (int d = 0; d < ndim(); ++d) s += strides_[d] * coords[d];
  return s;
}

std::vector<int> LatticeGeometry::site_coords(std::int64_t site) const {
  std::vector<int> c(ndim());
  for (int d = 0; d < ndim(); ++d) {
    c[d] = static_cast<int>(site % extents_[d]);
    site /= extents_[d];
  }
  return c;
}

std::int64_t LatticeGeometry::neighbor(std::int64_t site, int direction,
                                       int orientation) const {
  if (direction < 0 || direction >= ndim())
    throw std::out_of_range("direction out of range: " +
                            std::to_string(direction));
  const int ext = extents_[direction];
  const std::int64_t stride = strides_[direction];
  const int coord = static_cast<int>((site / stride) % ext);
  const int shifted = (coord + (orientation >= 0 ? 1 : ext - 1)) % ext;
  return site + static_cast<std::int64_t>(shifted - coord) * stride;
}

std::int64_t LatticeGeometry::plaquette_index(std::int64_t site, int mu,
                                              int nu) const {
  // planes (mu < nu) enumerated lexicographically
  int plane = 0;
  for (int a = 0; a < ndim(); ++a)
    for (int b = a + 1; b < ndim(); ++b) {
      if (a == mu && b == nu) goto found;
      ++plane;
    }
  throw std::invalid_argument("bad plaquette plane");
found:
  return site + volume_ * plane;
}

void LatticeGeometry::plaquette_decompose(std::int64_t plaq,
                                          std::int64_t& site, int& mu,
                                          int& nu) const {
  site = plaq % volume_;
  int plane = static_cast<int>(plaq / volume_);
  for (int a = 0; a < ndim(); ++a)
    for (int b = a + 1; b < ndim(); ++b) {
      if (plane == 0) {
        mu = a;
        nu = b;
        return;
      }
      --plane;
    }
  throw std::out_of_range("plaquette index out of range");
}

std::array<OrientedLink, 4> plaquette_links(const LatticeGeometry& geom,
                                            std::int64_t plaq) {
  std::int64_t x;
  int mu, nu;
  geom.plaquette_decompose(plaq, x, mu, nu);
  const std::int64_t xmu = geom.neighbor(x, mu, +1);
  const std::int64_t xnu = geom.neighbor(x, nu, +1);
  return {OrientedLink{geom.link_index(x, mu), true},
          OrientedLink{geom.link_index(xmu, nu), true},
          OrientedLink{geom.link_index(xnu, mu), false},
          OrientedLink{geom.link_index(x, nu), false}};
}

std::vector<Staple> link_staples(const LatticeGeometry& geom,
                                 std::int64_t link) {
  const std::int64_t x = geom.link_site(link);
  const int mu = geom.link_dir(link);
  std::vector<Staple> staples;
  staples.reserve(2 * (geom.ndim() - 1));
  for (int nu = 0; nu < geom.ndim(); ++nu) {
    if (nu == mu) continue;
    const std::int64_t xmu = geom.neighbor(x, mu, +1);
    const std::int64_t xnu = geom.neighbor(x, nu, +1);
    const std::int64_t xdn = geom.neighbor(x, nu, -1);
    const std::int64_t xmudn = geom.neighbor(xmu, nu, -1);
    // forward: U_nu(x+mu) U_mu(x+nu)^dag U_nu(x)^dag
    staples.push_back({geom.link_index(xmu, nu), geom.link_index(xnu, mu),
                       geom.link_index(x, nu), true});
    // backward: U_nu(x+mu-nu)^dag U_mu(x-nu)^dag U_nu(x-nu)
    staples.push_back({geom.link_index(xmudn, nu), geom.link_index(xdn, mu),
                       geom.link_index(xdn, nu), false});
  }
  return staples;
}

std::vector<std::vector<std::int64_t>> checkerboard_partition(
    const LatticeGeometry& geom) {
  for (int ext : geom.extents())
    if (ext % 2 != 0)
      throw std::invalid_argument(
          "checkerboard partition needs even extents; use sequential sweep");
  std::vector<std::vector<std::int64_t>> sets(2 * geom.ndim());
  for (std::int64_t s = 0; s < geom.volume(); ++s) {
    const auto c = geom.site_coords(s);
    int parity = 0;
    for (int v : c) parity += v;
    parity &= 1;
    for (int mu = 0; mu < geom.ndim(); ++mu)
      sets[2 * mu + parity].push_back(geom.link_index(s, mu));
  }
  return sets;
}

}  // namespace lgt
