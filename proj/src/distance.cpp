#include "capflow/distance.hpp"

#include <cmath>

namespace capflow {

namespace {

// Breakpoint between two parabolas as an exact fraction num / den (den > 0).
struct Breakpoint {
  std::int64_t num = 0;
  std::int64_t den = 1;
  int inf = 0;  // -1: -infinity, +1: +infinity
};

bool less_equal(const Breakpoint& a, const Breakpoint& b) {
  if (a.inf != 0 || b.inf != 0) {
    if (a.inf == -1 || b.inf == 1) return true;
    return false;
  }
  return static_cast<__int128>(a.num) * b.den <= static_cast<__int128>(b.num) * a.den;
}

// One-dimensional transform of f (kNoSite = no site) written to out.
// Scratch vectors are passed in to avoid reallocation per line.
void transform_line(const std::int64_t* f, std::int64_t* out, int n,
                    std::vector<int>& v, std::vector<Breakpoint>& z) {
  v.assign(static_cast<std::size_t>(n), 0);
  z.assign(static_cast<std::size_t>(n) + 1, Breakpoint{});
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] == kNoSite) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = {0, 1, -1};
      z[1] = {0, 1, 1};
      continue;
    }
    Breakpoint s;
    while (true) {
      const std::int64_t p = v[static_cast<std::size_t>(k)];
      s.num = (f[q] + static_cast<std::int64_t>(q) * q) - (f[p] + static_cast<std::int64_t>(p) * p);
      s.den = 2 * static_cast<std::int64_t>(q - p);
      s.inf = 0;
      if (k > 0 && less_equal(s, z[static_cast<std::size_t>(k)])) {
        --k;
        continue;
      }
      break;
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = {0, 1, 1};
  }
  if (k < 0) {
    for (int x = 0; x < n; ++x) out[x] = kNoSite;
    return;
  }
  int j = 0;
  for (int x = 0; x < n; ++x) {
    const Breakpoint bx{x, 1, 0};
    while (!less_equal(bx, z[static_cast<std::size_t>(j) + 1])) ++j;
    const std::int64_t p = v[static_cast<std::size_t>(j)];
    out[x] = (x - p) * (x - p) + f[p];
  }
}

// Applies the 1D transform along one axis for every line of the grid.
void pass(std::vector<std::int64_t>& d, int nx, int ny, int nz, int axis,
          Exec exec) {
  const int len = axis == 0 ? nx : (axis == 1 ? ny : nz);
  if (len <= 1) return;
  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(nx);
  const std::size_t sz = static_cast<std::size_t>(nx) * ny;
  const std::size_t stride = axis == 0 ? sx : (axis == 1 ? sy : sz);
  // Lines are enumerated by their two remaining coordinates.
  const int na = axis == 0 ? ny : nx;
  const int nb = axis == 2 ? ny : nz;
  const long lines = static_cast<long>(na) * nb;

  auto run_line = [&](long line, std::vector<std::int64_t>& in,
                      std::vector<std::int64_t>& out, std::vector<int>& v,
                      std::vector<Breakpoint>& z) {
    const int a = static_cast<int>(line % na);
    const int b = static_cast<int>(line / na);
    std::size_t base = 0;
    if (axis == 0) base = a * sy + b * sz;
    if (axis == 1) base = a * sx + b * sz;
    if (axis == 2) base = a * sx + b * sy;
    for (int i = 0; i < len; ++i) in[static_cast<std::size_t>(i)] = d[base + i * stride];
    transform_line(in.data(), out.data(), len, v, z);
    for (int i = 0; i < len; ++i) d[base + i * stride] = out[static_cast<std::size_t>(i)];
  };

  if (exec == Exec::serial) {
    std::vector<std::int64_t> in(static_cast<std::size_t>(len)), out(in.size());
    std::vector<int> v;
    std::vector<Breakpoint> z;
    for (long line = 0; line < lines; ++line) run_line(line, in, out, v, z);
    return;
  }
#pragma omp parallel
  {
    std::vector<std::int64_t> in(static_cast<std::size_t>(len)), out(in.size());
    std::vector<int> v;
    std::vector<Breakpoint> z;
#pragma omp for schedule(static)
    for (long line = 0; line < lines; ++line) run_line(line, in, out, v, z);
  }
}

}  // namespace

std::vector<std::int64_t> squared_distance_transform(
    const GridSpec& grid, std::span<const std::uint8_t> sites, Exec exec) {
  if (sites.size() != grid.cell_count())
    throw GridError("distance transform: site mask does not match grid");
  std::vector<std::int64_t> d(sites.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = sites[i] ? 0 : kNoSite;
  pass(d, grid.nx(), grid.ny(), grid.nz(), 0, exec);
  if (grid.d() == 2) pass(d, grid.nx(), grid.ny(), grid.nz(), 1, exec);
  pass(d, grid.nx(), grid.ny(), grid.nz(), 2, exec);
  return d;
}

ScalarField signed_distance(const IndicatorSet& f, Exec exec) {
  const GridSpec& g = f.grid();
  const std::size_t n = g.cell_count();
  const std::size_t occupied = f.count();
  if (occupied == 0 || occupied == n)
    throw DegenerateSet("signed distance: reference set is empty or full");
  const auto bits = f.bits();
  std::vector<std::uint8_t> outside(n);
  for (std::size_t i = 0; i < n; ++i) outside[i] = bits[i] ? 0 : 1;
  const auto to_f = squared_distance_transform(g, bits, exec);
  const auto to_c = squared_distance_transform(g, outside, exec);
  ScalarField sd{g, std::vector<double>(n)};
  const double dx = g.dx();
  for (std::size_t i = 0; i < n; ++i) {
    if (bits[i])
      sd.values[i] = -(std::sqrt(static_cast<double>(to_c[i])) * dx - 0.5 * dx);
    else
      sd.values[i] = std::sqrt(static_cast<double>(to_f[i])) * dx - 0.5 * dx;
  }
  return sd;
}

}  // namespace capflow
