#include "capflow/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace capflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Point point_of(const json& j, int d) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d + 1))
    throw ConfigError("points are [x, z] for d = 1 and [x, y, z] for d = 2");
  Point p;
  p.x = j[0].get<double>();
  if (d == 2) p.y = j[1].get<double>();
  p.z = j[static_cast<std::size_t>(d)].get<double>();
  return p;
}

Shape shape_of(const json& j, int d, double kappa) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "box") return Shape::box(point_of(j.at("lo"), d), point_of(j.at("hi"), d));
  if (kind == "ball") return Shape::ball(point_of(j.at("center"), d), j.at("radius").get<double>());
  if (kind == "cap") {
    Point base{};
    if (j.contains("base_center")) base = point_of(j.at("base_center"), d);
    return Shape::cap(j.at("r").get<double>(), j.value("kappa", kappa), base);
  }
  if (kind == "union") {
    std::vector<Shape> parts;
    for (const auto& p : j.at("parts")) parts.push_back(shape_of(p, d, kappa));
    return Shape::unite(std::move(parts));
  }
  throw ConfigError("unknown initial shape kind: " + kind);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path, bool binary = false) {
  std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
  if (!os) throw IoError("cannot write " + path.string());
  return os;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

FlowConfig parse_config(const json& j) {
  try {
    FlowConfig c;
    c.name = j.value("name", "run");
    const int d = j.at("d").get<int>();
    const double dx = j.at("dx").get<double>();
    const int nh = j.at("n_horiz").get<int>();
    const int nv = j.at("n_vert").get<int>();
    if (j.contains("origin")) {
      const auto& o = j.at("origin");
      c.grid = GridSpec::make(d, dx, nh, nv,
                              {o.at(0).get<double>(), o.size() > 1 ? o.at(1).get<double>() : 0.0});
    } else {
      c.grid = GridSpec::centered(d, dx, nh, nv);
    }
    c.kappa = j.at("kappa").get<double>();
    if (j.contains("m0")) c.m0 = j.at("m0").get<double>();
    c.h = j.at("h").get<double>();
    c.T = j.at("T").get<double>();
    if (j.contains("beta")) {
      const auto& b = j.at("beta");
      const std::string kind = b.value("kind", "constant");
      if (kind == "constant") {
        c.beta.kind = BetaSpec::Kind::constant;
        c.beta.value = b.at("value").get<double>();
      } else if (kind == "ramp") {
        c.beta.kind = BetaSpec::Kind::ramp;
        c.beta.value = b.at("value").get<double>();
        c.beta.slope = b.at("slope").get<double>();
      } else if (kind == "table") {
        c.beta.kind = BetaSpec::Kind::table;
        c.beta.table = b.at("values").get<std::vector<double>>();
      } else {
        throw ConfigError("unknown beta kind: " + kind);
      }
    }
    c.stencil = parse_neighborhood(j.value("stencil", "N8"));
    c.initial = shape_of(j.at("initial"), d, c.kappa);
    c.snapshot_every = j.value("snapshot_every", 0);
    if (j.contains("sample_times")) c.sample_times = j.at("sample_times").get<std::vector<double>>();
    if (j.contains("stationary")) {
      StationaryRule r;
      r.max_cells = j.at("stationary").value("cells", r.max_cells);
      r.steps = j.at("stationary").value("steps", r.steps);
      c.stop_when_stationary = r;
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

json load_json(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
}

void write_trace_csv(const fs::path& path, const std::vector<StepRecord>& records) {
  auto os = open_out(path);
  os << "k,t,lambda,volume,capillary,dissipation,penalty,off_volume,r_t\n";
  for (const auto& r : records)
    os << r.k << ',' << num(r.t) << ',' << num(r.lambda) << ',' << num(r.volume) << ','
       << num(r.capillary) << ',' << num(r.dissipation) << ',' << num(r.penalty) << ','
       << (r.off_volume ? 1 : 0) << ',' << num(r.r_t) << '\n';
}

void write_steps_csv(const fs::path& path, const std::vector<StepRecord>& records) {
  auto os = open_out(path);
  os << "k,reference_energy,quantum,max_distance_moved,sym_diff_cells,velocity_sq,cut_solves\n";
  for (const auto& r : records)
    os << r.k << ',' << num(r.reference_energy) << ',' << num(r.quantum) << ','
       << num(r.max_distance_moved) << ',' << r.sym_diff_cells << ',' << num(r.velocity_sq)
       << ',' << r.cut_solves << '\n';
}

std::vector<StepRecord> read_records(const fs::path& trace_csv, const fs::path& steps_csv) {
  const auto a = read_csv(trace_csv);
  const auto b = read_csv(steps_csv);
  if (a.empty() || b.empty() || a.size() != b.size())
    throw IoError("trace and step tables disagree in length");
  std::vector<StepRecord> out;
  try {
    for (std::size_t i = 1; i < a.size(); ++i) {
      const auto& x = a[i];
      const auto& y = b[i];
      if (x.size() != 9 || y.size() != 7 || x[0] != y[0]) throw IoError("malformed trace row");
      StepRecord r;
      r.k = std::stoi(x[0]);
      r.t = std::stod(x[1]);
      r.lambda = std::stod(x[2]);
      r.volume = std::stod(x[3]);
      r.capillary = std::stod(x[4]);
      r.dissipation = std::stod(x[5]);
      r.penalty = std::stod(x[6]);
      r.off_volume = x[7] == "1";
      r.r_t = std::stod(x[8]);
      r.reference_energy = std::stod(y[1]);
      r.quantum = std::stod(y[2]);
      r.max_distance_moved = std::stod(y[3]);
      r.sym_diff_cells = std::stoull(y[4]);
      r.velocity_sq = std::stod(y[5]);
      r.cut_solves = std::stoi(y[6]);
      out.push_back(r);
    }
  } catch (const std::logic_error& e) {
    throw IoError(std::string("malformed trace value: ") + e.what());
  }
  return out;
}

std::string snapshot_name(int k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06d.pgm", k);
  return buf;
}

void write_pgm(const fs::path& path, const IndicatorSet& e) {
  const GridSpec& g = e.grid();
  auto os = open_out(path, true);
  os << "P5\n" << g.nx() << ' ' << g.ny() * g.nz() << "\n255\n";
  std::string row(static_cast<std::size_t>(g.nx()), '\0');
  for (std::size_t r = 0; r < static_cast<std::size_t>(g.ny() * g.nz()); ++r) {
    for (int ix = 0; ix < g.nx(); ++ix)
      row[static_cast<std::size_t>(ix)] =
          static_cast<char>(e.contains(r * g.nx() + ix) ? 255 : 0);
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

IndicatorSet read_pgm(const fs::path& path, const GridSpec& g) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  std::string magic;
  int w = 0, hgt = 0, maxv = 0;
  is >> magic >> w >> hgt >> maxv;
  is.get();
  if (magic != "P5" || maxv != 255 || w != g.nx() || hgt != g.ny() * g.nz())
    throw IoError("snapshot does not match the grid: " + path.string());
  std::vector<std::uint8_t> bits(g.cell_count());
  is.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(bits.size()));
  if (!is) throw IoError("truncated snapshot: " + path.string());
  for (auto b : bits)
    if (b != 0 && b != 255) throw IoError("snapshot is not binary: " + path.string());
  return IndicatorSet(g, std::move(bits));
}

std::string sha256_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path.string());
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof buf);
    if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(is.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

void write_manifest(const fs::path& dir, const json& config_echo,
                    const std::vector<std::string>& files, const json& extra) {
  json m;
  m["config"] = config_echo;
  m["output_dir"] = fs::absolute(dir).string();
  json list = json::array();
  for (const auto& f : files) {
    const fs::path p = dir / f;
    list.push_back({{"file", f}, {"sha256", sha256_file(p)}, {"bytes", fs::file_size(p)}});
  }
  m["files"] = list;
  for (const auto& [k, v] : extra.items()) m[k] = v;
  write_text(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<ManifestEntry> read_manifest_files(const fs::path& dir) {
  const json m = load_json(dir / "manifest.json");
  std::vector<ManifestEntry> out;
  for (const auto& f : m.at("files"))
    out.push_back({f.at("file").get<std::string>(), f.at("sha256").get<std::string>(),
                   f.at("bytes").get<std::uintmax_t>()});
  return out;
}

std::vector<std::string> write_trace_dir(const fs::path& dir, const FlowTrace& trace,
                                         const json& config_echo) {
  fs::create_directories(dir);
  std::vector<std::string> files = {"config.json", "trace.csv", "steps.csv"};
  write_text(dir / "config.json", config_echo.dump(2) + "\n");
  write_trace_csv(dir / "trace.csv", trace.records);
  write_steps_csv(dir / "steps.csv", trace.records);
  for (const auto& s : trace.snapshots) {
    const std::string name = snapshot_name(s.k);
    write_pgm(dir / name, s.set);
    files.push_back(name);
  }
  return files;
}

FlowTrace read_trace_dir(const fs::path& dir) {
  FlowTrace t;
  t.config = parse_config(load_json(dir / "config.json"));
  t.records = read_records(dir / "trace.csv", dir / "steps.csv");
  if (t.records.empty()) throw IoError("empty trace in " + dir.string());
  std::map<int, fs::path> snaps;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string n = entry.path().filename().string();
    int k = 0;
    if (n.size() == 15 && std::sscanf(n.c_str(), "snap_%6d.pgm", &k) == 1) snaps[k] = entry.path();
  }
  if (snaps.empty() || snaps.begin()->first != 0) throw IoError("missing initial snapshot");
  for (const auto& [k, p] : snaps) t.snapshots.push_back({k, k * t.config.h, read_pgm(p, t.config.grid)});
  const auto stencil = PerimeterStencil::make(t.config.grid, t.config.stencil);
  t.p0 = full_perimeter(t.snapshots.front().set, stencil);
  t.m0 = t.records.front().volume;
  const auto& rule = t.config.stop_when_stationary;
  if (rule && static_cast<int>(t.records.size()) >= rule->steps) {
    int quiet = 0;
    for (std::size_t k = t.records.size() - static_cast<std::size_t>(rule->steps);
         k < t.records.size(); ++k)
      quiet += t.records[k].sym_diff_cells <= rule->max_cells;
    t.stationary = quiet == rule->steps &&
                   t.records.back().k < step_index(t.config.T, t.config.h);
  }
  return t;
}

}  // namespace capflow
