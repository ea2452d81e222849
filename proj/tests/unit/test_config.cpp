#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "wigner/config.hpp"
#include "wigner/io.hpp"

using namespace wigner;

namespace {

const char* kDelta = R"(
# delta barrier
grid.x_lo = -30
grid.x_hi = 30
grid.Q = 20
grid.M = 55
grid.k_min = -pi
grid.k_max = pi
grid.N_k = 128
potential.kind = delta
potential.H = 1
init.kind = gaussian
init.x0 = -10
init.k0 = 2
init.sigma = 2   # nm
time.dt = 0.01
time.t_final = 10
)";

std::string without(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line))
    if (line.rfind(key, 0) != 0) out += line + '\n';
  return out;
}

SimulationConfig parse(const std::string& text) { return config_from_entries(parse_config_text(text)); }

}  // namespace

TEST_CASE("config parsing") {
  const SimulationConfig c = parse(kDelta);
  CHECK(c.N_k == 128);
  CHECK(c.k_min == -std::numbers::pi);
  CHECK(c.k_max == std::numbers::pi);
  CHECK(c.packet.sigma == 2.0);
  CHECK(std::get<DeltaPotential>(c.potential).H == 1.0);
  CHECK(c.scheme.name() == "yoshida4");
  CHECK(c.num_steps() == 1000);
  CHECK(c.snapshot_steps() == std::vector<long>{1000});
  CHECK(c.consts.mass == 1.0);
}

TEST_CASE("config errors name the key") {
  try {
    parse(without(kDelta, "grid.N_k"));
    FAIL("missing key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.N_k");
    CHECK(std::string(e.what()).find("N_k") != std::string::npos);
  }
  try {
    parse(std::string(kDelta) + "grid.Nk = 3\n");
    FAIL("unknown key accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.Nk");
  }
  try {
    parse(std::string(kDelta) + "grid.N_k = 64\n");
    FAIL("duplicate accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.N_k");
  }
  try {
    parse(without(kDelta, "grid.N_k") + "grid.N_k = 127\n");
    FAIL("odd N_k accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "grid.N_k");
  }
  try {
    parse(without(kDelta, "time.dt") + "time.dt = fast\n");
    FAIL("bad number accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "time.dt");
  }
  CHECK_THROWS_AS(parse(without(kDelta, "time.t_final") + "time.t_final = 10.005\n"), ConfigError);
  CHECK_THROWS_AS(parse(std::string(kDelta) + "potential.alpha = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), ConfigError);
}

TEST_CASE("resolved config round-trips") {
  SimulationConfig c = parse(std::string(kDelta) + "time.snapshots = 0, 2.5, 10\ntime.scheme = strang\n");
  c.dt = 0.1 / 3.0 * 0.3;
  c.t_final = c.dt * 1000;
  c.snapshot_times = {0.0, c.dt * 250};
  const std::string text = config_to_text(c);
  const SimulationConfig back = parse(text);
  CHECK(config_to_text(back) == text);
  CHECK(back.dt == c.dt);
  CHECK(back.scheme.name() == "strang");
  CHECK(back.snapshot_times == c.snapshot_times);
}

TEST_CASE("ring of deltas is closed under quarter turns") {
  const std::string four_d = R"(
grid.dimensions = 4
grid.x_lo = -10
grid.x_hi = 10
grid.Q = 5
grid.M = 9
grid.k_min = -pi
grid.k_max = pi
grid.N_k = 16
potential.kind = multi_delta
potential.H = 1
potential.ring_count = 8
potential.ring_radius = 2
init.kind = fermi_dirac
physics.hbar = 0.658211899
time.dt = 0.01
time.t_final = 0.5
)";
  const SimulationConfig c = parse(four_d);
  const auto& pts = std::get<MultiDelta2DPotential>(c.potential).points;
  REQUIRE(pts.size() == 8);
  CHECK(pts[0][0] == 2.0);
  CHECK(pts[0][1] == 0.0);
  CHECK(pts[1][0] > 0.0);
  CHECK(pts[1][1] > 0.0);  // anticlockwise
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 2) % 8];
    CHECK(q[0] == -p[1]);
    CHECK(q[1] == p[0]);
    CHECK(std::hypot(p[0], p[1]) == doctest::Approx(2.0).epsilon(1e-15));
  }
  CHECK(c.consts.mass == doctest::Approx(0.067 * 5.68562966).epsilon(1e-15));
  CHECK(parse(config_to_text(c)).consts.mass == c.consts.mass);
}

TEST_CASE("number formatting is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-30.0) == "-30");
  const double v = 2.0 / 3.0;
  CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("snapshot CSV layout") {
  const auto g = make_phase_grid(-2.0, 2.0, 2, 4, -1.0, 1.0, 4);
  WignerState s(g);
  for (std::size_t i = 0; i < s.values().size(); ++i) s.values()[i] = static_cast<double>(i);
  const auto dir = std::filesystem::temp_directory_path() / "wigner_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / snapshot_file_name(2.5)).string();
  CHECK(snapshot_file_name(2.5) == "snapshot_t2.5.csv");
  write_snapshot_csv(path, s, 0, {{"note", "unit"}});
  std::ifstream f(path);
  std::string line;
  std::getline(f, line);
  CHECK(line == "# note: unit");
  std::getline(f, line);
  CHECK(line == "x,k,f");
  int rows = 0;
  while (std::getline(f, line)) ++rows;
  CHECK(rows == 7 * 4);  // 8 stored points, one shared end point
  std::filesystem::remove_all(dir);
}
