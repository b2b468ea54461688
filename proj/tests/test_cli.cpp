#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#ifndef LGT_CLI_PATH
#error "LGT_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd =
      std::string(LGT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string run_capture(const std::string& args) {
  const fs::path out = fs::temp_directory_path() / "lgt_cli_capture.txt";
  const std::string cmd = std::string(LGT_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2>&1";
  std::system(cmd.c_str());
  std::ifstream in(out);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("lgt_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help") == 0);
  CHECK(run("run-mc --help") == 0);
  CHECK(run("") == 2);                    // missing subcommand
  CHECK(run("no-such-command") == 2);
  CHECK(run("config-inspect") == 2);      // missing required argument
}

TEST_CASE("run-mc requires exactly one of --beta / --g2") {
  const fs::path dir = temp_dir("beta");
  const std::string tail =
      " --group u1 --dims 4x4 --sweeps 10 --therm 10 --out " + dir.string();
  CHECK(run("run-mc" + tail) == 2);                       // neither
  CHECK(run("run-mc --beta 1.0 --g2 2.0" + tail) == 2);   // both
  CHECK(run("run-mc --beta 1.0" + tail) == 0);
  CHECK(run("run-mc --g2 2.0" + tail) == 0);
  fs::remove_all(dir);
}

TEST_CASE("run-mc output is deterministic and complete") {
  const fs::path a = temp_dir("det_a");
  const fs::path b = temp_dir("det_b");
  const std::string base =
      "run-mc --group su2 --beta 2.0 --dims 4x4 --sweeps 20 --therm 10 "
      "--seed 7 --out ";
  REQUIRE(run(base + a.string()) == 0);
  REQUIRE(run(base + b.string()) == 0);

  for (const char* name : {"observables.csv", "final.lgc"}) {
    const std::string xa = slurp(a / name);
    const std::string xb = slurp(b / name);
    CHECK(!xa.empty());
    CHECK(xa == xb);
  }
  CHECK(fs::exists(a / "manifest.json"));

  // a different seed must change the observables
  const fs::path c = temp_dir("det_c");
  REQUIRE(run("run-mc --group su2 --beta 2.0 --dims 4x4 --sweeps 20 "
              "--therm 10 --seed 8 --out " +
              c.string()) == 0);
  CHECK(slurp(a / "observables.csv") != slurp(c / "observables.csv"));
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(c);
}

TEST_CASE("run-mc rejects bad flags") {
  CHECK(run("run-mc --group su9 --beta 1.0 --dims 4x4 --sweeps 5 "
            "--therm 5") == 2);
  CHECK(run("run-mc --group u1 --beta 1.0 --dims 4x4 --algorithm fancy "
            "--sweeps 5 --therm 5") == 2);
}

TEST_CASE("hamiltonian command") {
  const fs::path dir = temp_dir("ham");
  const std::string out = run_capture(
      "hamiltonian --dims 2x2 --cutoff 1 --g2 1.0 --sector projected -k 3 "
      "--out " +
      dir.string());
  CHECK(out.find("all commutators 0") != std::string::npos);
  CHECK(out.find("gap") != std::string::npos);
  CHECK(fs::exists(dir / "spectrum.csv"));
  CHECK(fs::exists(dir / "basis.txt"));

  CHECK(run("hamiltonian --dims 2x2 --cutoff 0") == 2);   // out of range
  CHECK(run("hamiltonian --dims 2x2x2 --cutoff 1") == 2); // not 2D
  CHECK(run("hamiltonian --dims 2x2 --cutoff 1 --sector odd") == 2);
  fs::remove_all(dir);
}

TEST_CASE("strategy2 static limit reports an exact match") {
  const fs::path dir = temp_dir("s2");
  const std::string out = run_capture(
      "strategy2 --group u1 --beta 1.0 --dims 4x4 --sweeps 30 --therm 30 "
      "--seed 5 --t 0 --mass 0.5 --n-configs 3 --out " +
      dir.string());
  CHECK(out.find("exact") != std::string::npos);
  CHECK(out.find("MISMATCH") == std::string::npos);
  CHECK(fs::exists(dir / "archive" / "manifest.json"));
  fs::remove_all(dir);
}

TEST_CASE("bench time mode") {
  const fs::path dir = temp_dir("bench");
  const std::string out = run_capture(
      "bench --group u1 --beta 1.0 --ns 2 4 6 --nt 2 --sweeps 10 --mode time "
      "--out " +
      dir.string());
  CHECK(out.find("volume^") != std::string::npos);
  CHECK(fs::exists(dir / "timing.csv"));
  CHECK(run("bench --mode juggle --out " + dir.string()) == 2);
  fs::remove_all(dir);
}

TEST_CASE("config-inspect exit codes") {
  const fs::path dir = temp_dir("inspect");
  REQUIRE(run("run-mc --group u1 --beta 1.0 --dims 4x4 --sweeps 5 --therm 5 "
              "--out " +
              dir.string()) == 0);
  const fs::path cfg = dir / "final.lgc";

  const std::string ok = run_capture("config-inspect " + cfg.string());
  CHECK(ok.find("OK") != std::string::npos);
  CHECK(run("config-inspect " + cfg.string()) == 0);

  // corrupt one payload byte
  {
    std::fstream f(cfg, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(200);
    char byte;
    f.seekg(200);
    f.get(byte);
    byte ^= 0x01;
    f.seekp(200);
    f.put(byte);
  }
  const std::string bad = run_capture("config-inspect " + cfg.string());
  CHECK(bad.find("CHECKSUM MISMATCH") != std::string::npos);
  CHECK(run("config-inspect " + cfg.string()) == 1);

  CHECK(run("config-inspect /nonexistent/file.lgc") == 1);
  fs::remove_all(dir);
}
