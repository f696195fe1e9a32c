#include "capflow/contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace capflow {

namespace {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double s = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * i * i / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    s += v;
  }
  for (double& v : k) v /= s;
  return k;
}

}  // namespace

std::vector<double> smoothed_indicator(const IndicatorSet& e, double sigma_cells) {
  const GridSpec& g = e.grid();
  if (g.d() != 1) throw GridError("smoothed_indicator: d = 1 grids only");
  const int nx = g.nx();
  const int nz = g.nz();
  std::vector<double> u(g.cell_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = e.contains(i) ? 1.0 : 0.0;
  if (sigma_cells <= 0.0) return u;
  const auto k = gaussian_kernel(sigma_cells);
  const int r = static_cast<int>(k.size() / 2);
  std::vector<double> tmp(u.size(), 0.0);
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix) {
      double s = 0.0;
      for (int j = -r; j <= r; ++j) {
        const int x = ix + j;
        if (x < 0 || x >= nx) continue;
        s += k[static_cast<std::size_t>(j + r)] * u[g.index(x, 0, iz)];
      }
      tmp[g.index(ix, 0, iz)] = s;
    }
  for (int iz = 0; iz < nz; ++iz)
    for (int ix = 0; ix < nx; ++ix) {
      double s = 0.0;
      for (int j = -r; j <= r; ++j) {
        int z = iz + j;
        if (z < 0) z = -z - 1;
        if (z >= nz) continue;
        s += k[static_cast<std::size_t>(j + r)] * tmp[g.index(ix, 0, z)];
      }
      u[g.index(ix, 0, iz)] = s;
    }
  return u;
}

std::vector<Polyline> extract_contours(const GridSpec& g, const std::vector<double>& values,
                                       double level) {
  if (g.d() != 1) throw GridError("extract_contours: d = 1 grids only");
  if (values.size() != g.cell_count()) throw GridError("extract_contours: size mismatch");
  // Lattice with one ghost column on each side and one ghost row on top.
  const int w = g.nx() + 2;
  const int hgt = g.nz() + 1;
  auto val = [&](int i, int j) -> double {
    const int ix = i - 1;
    if (ix < 0 || ix >= g.nx() || j >= g.nz()) return 0.0;
    return values[g.index(ix, 0, j)];
  };
  auto pos = [&](int i, int j) -> std::array<double, 2> {
    return {g.origin()[0] + (i - 1) * g.dx(), (j + 0.5) * g.dx()};
  };
  auto h_edge = [&](int i, int j) { return 2 * (static_cast<long>(j) * w + i); };
  auto v_edge = [&](int i, int j) { return 2 * (static_cast<long>(j) * w + i) + 1; };

  std::unordered_map<long, std::array<double, 2>> point;
  std::unordered_map<long, long> next;  // start edge -> end edge
  auto crossing = [&](std::array<double, 2> a, double va, std::array<double, 2> b, double vb) {
    const double t = (level - va) / (vb - va);
    return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };

  for (int j = 0; j + 1 < hgt; ++j) {
    for (int i = 0; i + 1 < w; ++i) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      const long eid[4] = {h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
      double v[4];
      bool in[4];
      for (int c = 0; c < 4; ++c) {
        v[c] = val(ci[c], cj[c]);
        in[c] = v[c] > level;
      }
      int exits[2];
      int entries[2];
      int ne = 0;
      int nn = 0;
      for (int c = 0; c < 4; ++c) {
        const int d = (c + 1) % 4;
        if (in[c] == in[d]) continue;
        point.emplace(eid[c], crossing(pos(ci[c], cj[c]), v[c], pos(ci[d], cj[d]), v[d]));
        if (in[c])
          exits[ne++] = c;
        else
          entries[nn++] = c;
      }
      if (ne == 1) {
        next[eid[exits[0]]] = eid[entries[0]];
      } else if (ne == 2) {
        const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
        // Connected inside: each exit pairs with the following entry.
        const int shift = center > level ? 1 : 3;
        for (int x = 0; x < 2; ++x) {
          const int e = exits[x];
          const int target = (e + shift) % 4;
          next[eid[e]] = eid[target];
        }
      }
    }
  }

  std::unordered_map<long, int> is_end;
  for (const auto& [s, t] : next) is_end[t] = 1;
  std::vector<Polyline> out;
  std::unordered_map<long, int> used;
  auto trace_from = [&](long start, bool open) {
    Polyline pl;
    long cur = start;
    pl.points.push_back(point.at(cur));
    while (true) {
      used[cur] = 1;
      auto it = next.find(cur);
      if (it == next.end()) break;
      cur = it->second;
      if (cur == start) {
        pl.closed = true;
        break;
      }
      pl.points.push_back(point.at(cur));
    }
    (void)open;
    out.push_back(std::move(pl));
  };
  // Deterministic order: sort start edges.
  std::vector<long> starts;
  for (const auto& [s, t] : next) starts.push_back(s);
  std::sort(starts.begin(), starts.end());
  for (long s : starts)
    if (!is_end.count(s) && !used.count(s)) trace_from(s, true);
  for (long s : starts)
    if (!used.count(s)) trace_from(s, false);
  return out;
}

std::vector<double> polyline_curvature(const Polyline& line, double window) {
  const auto& p = line.points;
  const std::size_t n = p.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    s[i] = s[i - 1] + std::hypot(p[i][0] - p[i - 1][0], p[i][1] - p[i - 1][1]);
  const double length =
      line.closed && n > 1 ? s[n - 1] + std::hypot(p[0][0] - p[n - 1][0], p[0][1] - p[n - 1][1])
                           : s[n - 1];
  std::vector<double> kappa(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // Normal equations for a quadratic in t = s - s_i.
    double m[3][3] = {};
    double bx[3] = {};
    double bz[3] = {};
    for (std::size_t j = 0; j < n; ++j) {
      double t = s[j] - s[i];
      if (line.closed) {
        if (t > 0.5 * length) t -= length;
        if (t < -0.5 * length) t += length;
      }
      if (std::abs(t) > window) continue;
      const double pw[3] = {1.0, t, t * t};
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) m[a][b] += pw[a] * pw[b];
        bx[a] += pw[a] * p[j][0];
        bz[a] += pw[a] * p[j][1];
      }
    }
    // Solve by Cramer's rule.
    auto det3 = [](double a[3][3]) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det3(m);
    if (std::abs(d) < 1e-300) continue;
    auto solve = [&](const double* b, int col) {
      double c[3][3];
      for (int a = 0; a < 3; ++a)
        for (int q = 0; q < 3; ++q) c[a][q] = q == col ? b[a] : m[a][q];
      return det3(c) / d;
    };
    const double x1 = solve(bx, 1), x2 = 2.0 * solve(bx, 2);
    const double z1 = solve(bz, 1), z2 = 2.0 * solve(bz, 2);
    const double speed = std::hypot(x1, z1);
    kappa[i] = (x1 * z2 - z1 * x2) / (speed * speed * speed);
  }
  return kappa;
}

double bilinear(const GridSpec& g, const std::vector<double>& values, double x, double z) {
  const double fx = std::clamp((x - g.origin()[0]) / g.dx(), 0.0, g.nx() - 1.0);
  const double fz = std::clamp(z / g.dx() - 0.5, 0.0, g.nz() - 1.0);
  const int ix = std::min(static_cast<int>(fx), g.nx() - 2);
  const int iz = std::min(static_cast<int>(fz), g.nz() - 2);
  const double tx = fx - ix;
  const double tz = fz - iz;
  auto at = [&](int a, int b) { return values[g.index(a, 0, b)]; };
  return (1 - tx) * (1 - tz) * at(ix, iz) + tx * (1 - tz) * at(ix + 1, iz) +
         (1 - tx) * tz * at(ix, iz + 1) + tx * tz * at(ix + 1, iz + 1);
}

}  // namespace capflow
