#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace lgt {

// Lexicographic site indexing with dimension 0 fastest. Periodic boundaries.
// The "time" direction is by convention the last dimension.
class LatticeGeometry {
 public:
  explicit LatticeGeometry(std::vector<int> extents);

  int ndim() const { return static_cast<int>(extents_.size()); }
  const std::vector<int>& extents() const { return extents_; }
  std::int64_t volume() const { return volume_; }
  std::int64_t link_count() const { return volume_ * ndim(); }
  std::int64_t plaquette_count() const {
    return volume_ * ndim() * (ndim() - 1) / 2;
  }

  std::int64_t site_index(const std::vector<int>& coords) const;
  std::vector<int> site_coords(std::int64_t site) const;

  // site shifted by +/-1 in the given direction, wrapped periodically
  std::int64_t neighbor(std::int64_t site, int direction, int orientation) const;

  // link (site, mu) -> flat index
  std::int64_t link_index(std::int64_t site, int mu) const {
    return site * ndim() + mu;
  }
  std::int64_t link_site(std::int64_t link) const { return link / ndim(); }
  int link_dir(std::int64_t link) const {
    return static_cast<int>(link % ndim());
  }

  // plaquette (site, mu < nu) -> flat index and back
  std::int64_t plaquette_index(std::int64_t site, int mu, int nu) const;
  void plaquette_decompose(std::int64_t plaq, std::int64_t& site, int& mu,
                           int& nu) const;

 private:
  std::vector<int> extents_;
  std::vector<std::int64_t> strides_;
  std::int64_t volume_;
};

struct OrientedLink {
  std::int64_t link;
  bool forward;  // false: traversed against its direction (use U^dagger)
};

// The four oriented links of the plaquette, in loop order
// x -> x+mu -> x+mu+nu -> x+nu -> x.
std::array<OrientedLink, 4> plaquette_links(const LatticeGeometry& geom,
                                            std::int64_t plaq);

// Links of direction nu != mu entering the staple sum of link (site, mu):
// for each nu, one forward staple (three links) and one backward staple.
// Consumers combine them as U1 U2^dag U3^dag (forward) and
// U1^dag U2^dag U3 (backward).
struct Staple {
  std::int64_t l1, l2, l3;
  bool forward;
};
std::vector<Staple> link_staples(const LatticeGeometry& geom,
                                 std::int64_t link);

// Partition of all links into 2*ndim sets (site parity x direction) such
// that no two links in one set touch a common plaquette. Requires all
// extents even.
std::vector<std::vector<std::int64_t>> checkerboard_partition(
    const LatticeGeometry& geom);

}  // namespace lgt
