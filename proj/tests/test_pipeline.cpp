#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "lgt/pipeline.hpp"

using namespace lgt;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("lgt_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<char> read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>(std::istreambuf_iterator<char>(in), {});
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool records_equal(const Strategy2Record& a, const Strategy2Record& b) {
  return a.sweep_index == b.sweep_index && a.plaquette == b.plaquette &&
         a.correlator == b.correlator && a.log_det == b.log_det &&
         a.det_sign == b.det_sign;
}

}  // namespace

TEST_CASE("config export/import round trip is bitwise exact") {
  const fs::path dir = temp_dir("roundtrip");
  RngStream rng(3);
  for (Group g : {Group::U1, Group::SU2, Group::SU3}) {
    LatticeGeometry geom({4, 2, 2});
    auto config = GaugeConfiguration::hot(geom, g, rng);
    ConfigMetadata meta{2.25, 77, 1234};
    const std::string path = (dir / "cfg.lgc").string();
    export_config(config, meta, path);

    const ImportedConfig back = import_config(path);
    CHECK(back.config.group == g);
    CHECK(back.config.geometry.extents() == geom.extents());
    CHECK(back.meta.beta == meta.beta);
    CHECK(back.meta.seed == meta.seed);
    CHECK(back.meta.sweep_index == meta.sweep_index);
    REQUIRE(back.config.links.size() == config.links.size());
    for (std::size_t l = 0; l < config.links.size(); ++l)
      CHECK((back.config.links[l] - config.links[l]).cwiseAbs().maxCoeff() ==
            0.0);

    const InspectReport rep = inspect_config(path);
    CHECK(rep.version == kConfigFormatVersion);
    CHECK(rep.group_n == matrix_dim(g));
    CHECK(rep.extents == geom.extents());
    CHECK(rep.link_count == geom.link_count());
    CHECK(rep.meta.beta == meta.beta);
  }
  fs::remove_all(dir);
}

TEST_CASE("format error taxonomy") {
  const fs::path dir = temp_dir("format");
  LatticeGeometry geom({2, 2});
  RngStream rng(5);
  auto config = GaugeConfiguration::hot(geom, Group::SU2, rng);
  const std::string path = (dir / "cfg.lgc").string();
  export_config(config, {1.0, 1, 0}, path);
  const std::vector<char> good = read_bytes(path);

  SUBCASE("bad magic") {
    auto bytes = good;
    bytes[0] = 'X';
    write_bytes(path, bytes);
    CHECK_THROWS_AS(import_config(path), BadMagicError);
    CHECK_THROWS_AS(inspect_config(path), BadMagicError);
  }
  SUBCASE("bad version") {
    auto bytes = good;
    bytes[4] = 99;  // version is the little-endian u32 after the magic
    write_bytes(path, bytes);
    CHECK_THROWS_AS(import_config(path), BadVersionError);
  }
  SUBCASE("flipped payload byte") {
    auto bytes = good;
    bytes[bytes.size() / 2] ^= 0x01;
    write_bytes(path, bytes);
    CHECK_THROWS_AS(import_config(path), ChecksumError);
  }
  SUBCASE("truncated file") {
    auto bytes = good;
    bytes.resize(bytes.size() - 13);
    write_bytes(path, bytes);
    CHECK_THROWS_AS(import_config(path), FormatError);
  }
  SUBCASE("non-unitary link") {
    auto scaled = config;
    scaled.links[3] *= 1.1;
    export_config(scaled, {1.0, 1, 0}, path);
    // header passes, payload checksum passes, unitarity does not
    CHECK_THROWS_AS(import_config(path), UnitarityError);
    try {
      import_config(path);
    } catch (const UnitarityError& e) {
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS(import_config((dir / "absent.lgc").string()));
  }
  fs::remove_all(dir);
}

TEST_CASE("archive writer and listing") {
  const fs::path dir = temp_dir("archive");
  LatticeGeometry geom({2, 2});
  RngStream rng(7);
  {
    ArchiveWriter writer(dir.string(), Group::U1, geom, 1.5, 42);
    for (int i = 0; i < 3; ++i)
      writer.append(GaugeConfiguration::hot(geom, Group::U1, rng),
                    10 * (i + 1));
    writer.finalize();
  }
  const auto files = archive_files(dir.string());
  REQUIRE(files.size() == 3);
  for (const auto& f : files) {
    const InspectReport rep = inspect_config(f);
    CHECK(rep.meta.beta == 1.5);
    CHECK(rep.meta.seed == 42);
  }
  CHECK(inspect_config(files[0]).meta.sweep_index == 10);
  CHECK(inspect_config(files[2]).meta.sweep_index == 30);
  fs::remove_all(dir);
}

TEST_CASE("static fermions leave the quenched estimates unchanged") {
  const fs::path dir = temp_dir("static");
  Strategy2Params params;
  params.mc.beta = 1.0;
  params.mc.n_sweeps = 40;
  params.mc.n_therm = 40;
  params.mc.seed = 11;
  params.n_configs = 4;
  params.fermion.hopping = 0.0;  // det is constant across configurations
  params.fermion.mass = 0.5;

  LatticeGeometry geom({4, 4});
  const Strategy2Result res =
      strategy2_run(params, geom, Group::U1, dir.string());
  REQUIRE(res.records.size() == 4);
  CHECK(res.reweighted_plaquette ==
        doctest::Approx(res.quenched_plaquette).epsilon(1e-12));
  for (const auto& r : res.records) CHECK(r.det_sign == 1.0);
  fs::remove_all(dir);
}

TEST_CASE("replay from the archive is bitwise identical") {
  const fs::path dir = temp_dir("replay");
  Strategy2Params params;
  params.mc.beta = 1.2;
  params.mc.n_sweeps = 30;
  params.mc.n_therm = 30;
  params.mc.seed = 19;
  params.n_configs = 3;
  params.fermion.mass = 5.0;
  params.fermion.hopping = 1.0;

  LatticeGeometry geom({4, 4});
  const Strategy2Result first =
      strategy2_run(params, geom, Group::U1, dir.string());
  const Strategy2Result second =
      strategy2_replay(dir.string(), params.fermion);

  REQUIRE(first.records.size() == second.records.size());
  for (std::size_t i = 0; i < first.records.size(); ++i)
    CHECK(records_equal(first.records[i], second.records[i]));
  CHECK(first.quenched_plaquette == second.quenched_plaquette);
  CHECK(first.quenched_plaquette_err == second.quenched_plaquette_err);
  CHECK(first.reweighted_plaquette == second.reweighted_plaquette);
  CHECK(first.reweighted_correlator == second.reweighted_correlator);
  fs::remove_all(dir);
}

TEST_CASE("frozen limit: plaquette near 1 at very large beta") {
  const fs::path dir = temp_dir("frozen");
  Strategy2Params params;
  params.mc.beta = 100.0;
  params.mc.n_sweeps = 30;
  params.mc.n_therm = 30;
  params.mc.seed = 23;
  params.n_configs = 3;
  params.fermion.mass = 5.0;
  params.start = StartMode::Cold;

  LatticeGeometry geom({4, 4});
  const Strategy2Result res =
      strategy2_run(params, geom, Group::U1, dir.string());
  CHECK(res.quenched_plaquette > 0.9);
  fs::remove_all(dir);
}

TEST_CASE("condensate link loop trace") {
  RngStream rng(29);
  const int n = 3;
  std::vector<Eigen::VectorXcd> phi(4);
  for (auto& v : phi) {
    v.resize(n);
    for (int a = 0; a < n; ++a)
      v[a] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  }
  const Eigen::MatrixXcd loop = condensate_link(phi[0], phi[1]) *
                                condensate_link(phi[1], phi[2]) *
                                condensate_link(phi[2], phi[3]) *
                                condensate_link(phi[3], phi[0]);
  double product = 1.0;
  for (const auto& v : phi) product *= v.squaredNorm();
  const Complex tr = loop.trace();
  CHECK(tr.imag() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tr.real() >= 0.0);
  CHECK(tr.real() == doctest::Approx(product).epsilon(1e-12));

  // per-site phase rotations cancel around the loop
  std::vector<Eigen::VectorXcd> rotated = phi;
  for (int i = 0; i < 4; ++i)
    rotated[i] *= std::exp(Complex(0.0, rng.uniform(-3.0, 3.0)));
  const Eigen::MatrixXcd loop2 = condensate_link(rotated[0], rotated[1]) *
                                 condensate_link(rotated[1], rotated[2]) *
                                 condensate_link(rotated[2], rotated[3]) *
                                 condensate_link(rotated[3], rotated[0]);
  CHECK(std::abs(loop2.trace() - tr) < 1e-10);
}

TEST_CASE("polar projection") {
  RngStream rng(31);
  // unitary input is a fixed point
  const GroupElement u = haar_sample(Group::SU3, rng);
  CHECK((polar_project(u.mat) - u.mat).cwiseAbs().maxCoeff() < 1e-12);

  // generic input projects to a unitary with Hermitian positive U^dag M
  Eigen::MatrixXcd m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const Eigen::MatrixXcd p = polar_project(m);
  CHECK((p * p.adjoint() - Eigen::MatrixXcd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  const Eigen::MatrixXcd h = p.adjoint() * m;
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // a condensate link projects onto a unitary as well
  Eigen::VectorXcd a(2), b(2);
  a << Complex(1, 0.3), Complex(-0.2, 1);
  b << Complex(0.5, -1), Complex(2, 0.1);
  const Eigen::MatrixXcd cp = polar_project(condensate_link(a, b));
  CHECK((cp * cp.adjoint() - Eigen::MatrixXcd::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("cost estimate") {
  CHECK(cost_estimate(2.0, 1.0) == doctest::Approx(32.0).epsilon(1e-12));
  CHECK(cost_estimate(1.0, 0.5) == doctest::Approx(128.0).epsilon(1e-12));
  CHECK(cost_estimate(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cost_estimate(2.0, 0.5) == doctest::Approx(4096.0).epsilon(1e-12));
}
