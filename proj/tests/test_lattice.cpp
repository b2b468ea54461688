#include <doctest.h>

#include <map>
#include <set>

#include "lgt/lattice.hpp"

using namespace lgt;

TEST_CASE("counting identities") {
  for (const auto& ext : std::vector<std::vector<int>>{
           {2, 2}, {4, 4}, {3, 5}, {4, 4, 4}, {4, 4, 4, 4}, {6, 4, 2, 4}}) {
    LatticeGeometry geom(ext);
    std::int64_t vol = 1;
    for (int e : ext) vol *= e;
    CHECK(geom.volume() == vol);
    CHECK(geom.link_count() == vol * geom.ndim());
    CHECK(geom.plaquette_count() ==
          vol * geom.ndim() * (geom.ndim() - 1) / 2);
  }
  CHECK_THROWS(LatticeGeometry({4, 1}));
  CHECK_THROWS(LatticeGeometry({4}));
}

TEST_CASE("coordinate round trip") {
  LatticeGeometry geom({3, 4, 5});
  for (std::int64_t s = 0; s < geom.volume(); ++s)
    CHECK(geom.site_index(geom.site_coords(s)) == s);
}

TEST_CASE("neighbor arithmetic") {
  LatticeGeometry geom({4, 4, 4, 4});
  const std::int64_t origin = geom.site_index({0, 0, 0, 0});
  CHECK(geom.neighbor(origin, 0, +1) == geom.site_index({1, 0, 0, 0}));
  CHECK(geom.neighbor(geom.site_index({3, 0, 0, 0}), 0, +1) == origin);
  CHECK_THROWS(geom.neighbor(origin, 4, +1));

  for (std::int64_t s = 0; s < geom.volume(); ++s)
    for (int mu = 0; mu < geom.ndim(); ++mu)
      CHECK(geom.neighbor(geom.neighbor(s, mu, +1), mu, -1) == s);
}

TEST_CASE("plaquette loop on the 2x2 lattice") {
  LatticeGeometry geom({2, 2});
  const auto loop = plaquette_links(geom, 0);
  CHECK(loop[0].link == geom.link_index(geom.site_index({0, 0}), 0));
  CHECK(loop[0].forward);
  CHECK(loop[1].link == geom.link_index(geom.site_index({1, 0}), 1));
  CHECK(loop[1].forward);
  CHECK(loop[2].link == geom.link_index(geom.site_index({0, 1}), 0));
  CHECK_FALSE(loop[2].forward);
  CHECK(loop[3].link == geom.link_index(geom.site_index({0, 0}), 1));
  CHECK_FALSE(loop[3].forward);
}

TEST_CASE("every 4^4 link sits in exactly 2(ndim-1) plaquettes") {
  LatticeGeometry geom({4, 4, 4, 4});
  CHECK(geom.plaquette_count() == 1536);
  std::map<std::int64_t, int> appearances;
  for (std::int64_t p = 0; p < geom.plaquette_count(); ++p)
    for (const auto& ol : plaquette_links(geom, p)) ++appearances[ol.link];
  CHECK(static_cast<std::int64_t>(appearances.size()) == geom.link_count());
  for (const auto& [link, count] : appearances) CHECK(count == 6);
}

TEST_CASE("plaquette enumeration visits each element once") {
  LatticeGeometry geom({4, 2, 4});
  std::set<std::tuple<std::int64_t, int, int>> seen;
  for (std::int64_t p = 0; p < geom.plaquette_count(); ++p) {
    std::int64_t site;
    int mu, nu;
    geom.plaquette_decompose(p, site, mu, nu);
    CHECK(mu < nu);
    CHECK(geom.plaquette_index(site, mu, nu) == p);
    seen.insert({site, mu, nu});
  }
  CHECK(static_cast<std::int64_t>(seen.size()) == geom.plaquette_count());
}

TEST_CASE("checkerboard partition") {
  for (const auto& ext :
       std::vector<std::vector<int>>{{4, 4}, {4, 4, 4, 4}}) {
    LatticeGeometry geom(ext);
    const auto sets = checkerboard_partition(geom);
    std::int64_t total = 0;
    std::vector<int> set_of(geom.link_count(), -1);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      total += static_cast<std::int64_t>(sets[i].size());
      for (auto l : sets[i]) {
        CHECK(set_of[l] == -1);
        set_of[l] = static_cast<int>(i);
      }
    }
    CHECK(total == geom.link_count());

    // no two links of one set share a plaquette (brute force)
    for (std::int64_t p = 0; p < geom.plaquette_count(); ++p) {
      const auto loop = plaquette_links(geom, p);
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (loop[i].link != loop[j].link)
            CHECK(set_of[loop[i].link] != set_of[loop[j].link]);
    }
  }
  CHECK_THROWS(checkerboard_partition(LatticeGeometry({3, 4})));
}

TEST_CASE("staples cover the plaquettes containing the link") {
  LatticeGeometry geom2({4, 4});
  CHECK(link_staples(geom2, 0).size() == 2);
  LatticeGeometry geom4({4, 4, 4, 4});
  CHECK(link_staples(geom4, 0).size() == 6);
}
