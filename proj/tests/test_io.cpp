#include <filesystem>
#include <fstream>

#include "capflow/io.hpp"
#include "capflow/shapes.hpp"
#include "doctest.h"

using namespace capflow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("capflow_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

json small_config() {
  return json::parse(R"({
    "name": "io",
    "d": 1, "dx": 0.03125, "n_horiz": 48, "n_vert": 32,
    "kappa": 0.5, "h": 0.01, "T": 0.05,
    "beta": {"kind": "constant", "value": 0.0},
    "stencil": "N8",
    "initial": {"kind": "box", "lo": [-0.3, 0.0], "hi": [0.3, 0.4]},
    "snapshot_every": 2
  })");
}

}  // namespace

TEST_CASE("config parsing fills every field") {
  auto j = small_config();
  j["beta"] = {{"kind", "ramp"}, {"value", 0.1}, {"slope", 0.2}};
  j["sample_times"] = {0.02};
  j["stationary"] = {{"cells", 3}, {"steps", 7}};
  j["seed"] = 11;
  const auto c = parse_config(j);
  CHECK(c.name == "io");
  CHECK(c.grid.nx() == 48);
  CHECK(c.grid.origin()[0] == doctest::Approx(-0.5 * 47 * 0.03125));
  CHECK(c.beta.kind == BetaSpec::Kind::ramp);
  CHECK(c.beta.slope == 0.2);
  CHECK(c.stencil == Neighborhood::N8);
  CHECK(c.snapshot_every == 2);
  REQUIRE(c.stop_when_stationary.has_value());
  CHECK(c.stop_when_stationary->max_cells == 3);
  CHECK(c.stop_when_stationary->steps == 7);
  CHECK(c.seed == 11);
  CHECK(c.sample_times == std::vector<double>{0.02});
}

TEST_CASE("config shapes") {
  auto j = small_config();
  j["initial"] = json::parse(R"({"kind": "union", "parts": [
      {"kind": "ball", "center": [-0.2, 0.0], "radius": 0.1},
      {"kind": "cap", "r": 0.1, "base_center": [0.2, 0.0]}]})");
  const auto c = parse_config(j);
  const auto e = rasterize(c.initial, c.grid);
  CHECK(component_count(e) == 2);

  j = small_config();
  j["d"] = 2;
  j["n_horiz"] = 24;
  j["n_vert"] = 16;
  j["dx"] = 0.0625;
  j["initial"] = json::parse(R"({"kind": "ball", "center": [0.0, 0.0, 0.0], "radius": 0.4})");
  CHECK(parse_config(j).grid.d() == 2);
  j["initial"] = json::parse(R"({"kind": "ball", "center": [0.0, 0.0], "radius": 0.4})");
  CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("invalid configs are rejected with ConfigError") {
  auto j = small_config();
  j.erase("h");
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["kappa"] = 0.25;
  j["beta"]["value"] = 0.6;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["stencil"] = "N12";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["beta"] = {{"kind", "table"}, {"values", {0.0, 0.1}}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = small_config();
  j["initial"]["kind"] = "torus";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  CHECK_THROWS_AS(load_json("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("sha256 of known inputs") {
  const auto dir = scratch("sha");
  write_text(dir / "abc", "abc");
  CHECK(sha256_file(dir / "abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  write_text(dir / "empty", "");
  CHECK(sha256_file(dir / "empty") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("pgm snapshots store the bottom row first") {
  const auto dir = scratch("pgm");
  const GridSpec g = GridSpec::make(1, 0.25, 3, 2, {0, 0});
  IndicatorSet e(g);
  e.set(g.index(0, 0, 0), true);
  write_pgm(dir / "a.pgm", e);
  std::ifstream is(dir / "a.pgm", std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const std::string header = "P5\n3 2\n255\n";
  REQUIRE(bytes.size() == header.size() + 6);
  CHECK(bytes.substr(0, header.size()) == header);
  CHECK(static_cast<unsigned char>(bytes[header.size()]) == 255);
  for (std::size_t i = 1; i < 6; ++i) CHECK(bytes[header.size() + i] == 0);
  CHECK(read_pgm(dir / "a.pgm", g) == e);

  const GridSpec g3 = GridSpec::centered(2, 0.125, 8, 6);
  const auto b = rasterize(Shape::ball({0.1, -0.05, 0.0}, 0.3), g3);
  write_pgm(dir / "b.pgm", b);
  CHECK(read_pgm(dir / "b.pgm", g3) == b);
  CHECK_THROWS_AS(read_pgm(dir / "b.pgm", g), IoError);
  CHECK(snapshot_name(42) == "snap_000042.pgm");
}

TEST_CASE("trace directories round trip") {
  const auto dir = scratch("trace");
  const auto src = small_config();
  const auto trace = run_flow(parse_config(src));
  const auto files = write_trace_dir(dir, trace, src);
  CHECK(files.size() == 3 + trace.snapshots.size());
  const auto back = read_trace_dir(dir);
  REQUIRE(back.records.size() == trace.records.size());
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& a = trace.records[k];
    const auto& b = back.records[k];
    CHECK(a.k == b.k);
    CHECK(a.t == b.t);
    CHECK(a.lambda == b.lambda);
    CHECK(a.capillary == b.capillary);
    CHECK(a.dissipation == b.dissipation);
    CHECK(a.off_volume == b.off_volume);
    CHECK(a.r_t == b.r_t);
    CHECK(a.reference_energy == b.reference_energy);
    CHECK(a.quantum == b.quantum);
    CHECK(a.sym_diff_cells == b.sym_diff_cells);
    CHECK(a.velocity_sq == b.velocity_sq);
  }
  REQUIRE(back.snapshots.size() == trace.snapshots.size());
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    CHECK(back.snapshots[i].k == trace.snapshots[i].k);
    CHECK(back.snapshots[i].set == trace.snapshots[i].set);
  }
  CHECK(back.p0 == trace.p0);
  CHECK(back.m0 == trace.m0);
  CHECK(diagnose(back).to_csv() == diagnose(trace).to_csv());
}

TEST_CASE("identical runs give identical hashes") {
  const auto src = small_config();
  std::vector<std::vector<ManifestEntry>> runs;
  for (int r = 0; r < 2; ++r) {
    const auto dir = scratch("repro" + std::to_string(r));
    const auto files = write_trace_dir(dir, run_flow(parse_config(src)), src);
    write_manifest(dir, src, files, {{"wall_seconds", 0.1 * r}});
    runs.push_back(read_manifest_files(dir));
  }
  REQUIRE(runs[0].size() == runs[1].size());
  for (std::size_t i = 0; i < runs[0].size(); ++i) {
    CHECK(runs[0][i].file == runs[1][i].file);
    CHECK(runs[0][i].sha256 == runs[1][i].sha256);
    CHECK(runs[0][i].bytes > 0);
  }
}
