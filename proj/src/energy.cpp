#include "capflow/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace capflow {

Neighborhood parse_neighborhood(const std::string& name) {
  if (name == "N4") return Neighborhood::N4;
  if (name == "N8") return Neighborhood::N8;
  if (name == "N16") return Neighborhood::N16;
  throw std::invalid_argument("unknown stencil order: " + name);
}

std::string to_string(Neighborhood n) {
  switch (n) {
    case Neighborhood::N4:
      return "N4";
    case Neighborhood::N8:
      return "N8";
    case Neighborhood::N16:
      return "N16";
  }
  return "?";
}

namespace {

using Offset = std::array<int, 3>;

std::vector<Offset> offsets_2d(Neighborhood n) {
  std::vector<Offset> o = {{1, 0, 0}, {0, 0, 1}};
  if (n == Neighborhood::N4) return o;
  o.push_back({1, 0, 1});
  o.push_back({1, 0, -1});
  if (n == Neighborhood::N8) return o;
  o.push_back({1, 0, 2});
  o.push_back({2, 0, 1});
  o.push_back({1, 0, -2});
  o.push_back({2, 0, -1});
  return o;
}

std::vector<Offset> offsets_3d(Neighborhood n) {
  std::vector<Offset> o = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  if (n == Neighborhood::N4) return o;
  for (const Offset& e : {Offset{1, 1, 0}, Offset{1, -1, 0}, Offset{1, 0, 1},
                          Offset{1, 0, -1}, Offset{0, 1, 1}, Offset{0, 1, -1}})
    o.push_back(e);
  if (n == Neighborhood::N8) return o;
  for (const Offset& e : {Offset{1, 1, 1}, Offset{1, 1, -1}, Offset{1, -1, 1},
                          Offset{1, -1, -1}})
    o.push_back(e);
  return o;
}

double norm(const Offset& e) {
  return std::sqrt(static_cast<double>(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]));
}

// Angular measure (undirected directions, total pi) of the Voronoi cell of
// each direction on the half circle.
std::vector<double> angular_gaps(const std::vector<Offset>& dirs) {
  const std::size_t n = dirs.size();
  std::vector<std::pair<double, std::size_t>> ang(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = std::atan2(static_cast<double>(dirs[k][2]), static_cast<double>(dirs[k][0]));
    if (a < 0.0) a += std::numbers::pi;
    if (a >= std::numbers::pi) a -= std::numbers::pi;
    ang[k] = {a, k};
  }
  std::sort(ang.begin(), ang.end());
  std::vector<double> gap(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = i == 0 ? ang[n - 1].first - std::numbers::pi : ang[i - 1].first;
    const double next = i + 1 == n ? ang[0].first + std::numbers::pi : ang[i + 1].first;
    gap[ang[i].second] = 0.5 * (next - prev);
  }
  return gap;
}

// Solid angle (one of the two antipodal cells; totals 2 pi) of the spherical
// Voronoi cell of each direction, by quadrature on a Fibonacci point set.
std::vector<double> solid_angles(const std::vector<Offset>& dirs) {
  constexpr int kSamples = 400000;
  std::vector<std::array<double, 3>> unit(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double l = norm(dirs[k]);
    unit[k] = {dirs[k][0] / l, dirs[k][1] / l, dirs[k][2] / l};
  }
  std::vector<long> hits(dirs.size(), 0);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < kSamples; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kSamples;
    const double r = std::sqrt(1.0 - z * z);
    const double phi = golden * i;
    const double u[3] = {r * std::cos(phi), r * std::sin(phi), z};
    std::size_t best = 0;
    double best_dot = -1.0;
    for (std::size_t k = 0; k < unit.size(); ++k) {
      const double dot =
          std::abs(u[0] * unit[k][0] + u[1] * unit[k][1] + u[2] * unit[k][2]);
      if (dot > best_dot) {
        best_dot = dot;
        best = k;
      }
    }
    ++hits[best];
  }
  std::vector<double> omega(dirs.size());
  for (std::size_t k = 0; k < dirs.size(); ++k)
    omega[k] = 0.5 * 4.0 * std::numbers::pi * static_cast<double>(hits[k]) / kSamples;
  return omega;
}

}  // namespace

PerimeterStencil PerimeterStencil::make(const GridSpec& grid, Neighborhood order) {
  PerimeterStencil s;
  s.order_ = order;
  s.d_ = grid.d();
  s.dx_ = grid.dx();
  const auto offs = grid.d() == 1 ? offsets_2d(order) : offsets_3d(order);
  const double face = grid.face_area();
  std::vector<double> w(offs.size(), face);
  if (order != Neighborhood::N4) {
    if (grid.d() == 1) {
      const auto gap = angular_gaps(offs);
      for (std::size_t k = 0; k < offs.size(); ++k)
        w[k] = grid.dx() * gap[k] / (2.0 * norm(offs[k]));
    } else {
      const auto omega = solid_angles(offs);
      for (std::size_t k = 0; k < offs.size(); ++k)
        w[k] = face * omega[k] / (std::numbers::pi * norm(offs[k]));
    }
  }
  for (std::size_t k = 0; k < offs.size(); ++k) s.dirs_.push_back({offs[k], w[k]});
  return s;
}

double PerimeterStencil::max_relative_error() const {
  // A flat interface with unit normal n cuts |e.n| / dx^(d+1) pairs of family
  // e (in cells) per unit area.
  const double scale = std::pow(dx_, d_);
  auto estimate = [&](double nx, double ny, double nz) {
    double s = 0.0;
    for (const auto& dir : dirs_)
      s += dir.weight * std::abs(dir.offset[0] * nx + dir.offset[1] * ny + dir.offset[2] * nz);
    return s / scale;
  };
  double worst = 0.0;
  if (d_ == 1) {
    constexpr int kAngles = 3600;
    for (int i = 0; i < kAngles; ++i) {
      const double a = std::numbers::pi * i / kAngles;
      worst = std::max(worst, std::abs(estimate(std::cos(a), 0.0, std::sin(a)) - 1.0));
    }
  } else {
    constexpr int kSamples = 20000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kSamples; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / kSamples;
      const double r = std::sqrt(1.0 - z * z);
      worst = std::max(worst, std::abs(estimate(r * std::cos(golden * i),
                                                r * std::sin(golden * i), z) - 1.0));
    }
  }
  return worst;
}

std::vector<std::int64_t> perimeter_cut_counts(const IndicatorSet& e,
                                               const PerimeterStencil& stencil,
                                               Exec exec) {
  const GridSpec& g = e.grid();
  if (stencil.d() != g.d() || stencil.dx() != g.dx())
    throw GridError("perimeter: stencil built for a different grid");
  const auto& dirs = stencil.directions();
  const std::size_t nd = dirs.size();
  const int nz = g.nz();
  const int ny = g.ny();
  const int nx = g.nx();
  // Per-row integer tallies keep the result independent of thread count.
  std::vector<std::int64_t> rows(static_cast<std::size_t>(nz) * nd, 0);

  auto count_row = [&](int iz) {
    std::int64_t* acc = rows.data() + static_cast<std::size_t>(iz) * nd;
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        const bool in = e.contains(g.index(ix, iy, iz));
        for (std::size_t k = 0; k < nd; ++k) {
          const auto& o = dirs[k].offset;
          const int jx = ix + o[0];
          const int jy = iy + o[1];
          const int jz = iz + o[2];
          if (g.in_grid(jx, jy, jz)) {
            if (in != e.contains(g.index(jx, jy, jz))) ++acc[k];
          } else if (jz >= 0 && in) {
            ++acc[k];
          }
          const int bx = ix - o[0];
          const int by = iy - o[1];
          const int bz = iz - o[2];
          if (!g.in_grid(bx, by, bz) && bz >= 0 && in) ++acc[k];
        }
      }
    }
  };

  if (exec == Exec::serial) {
    for (int iz = 0; iz < nz; ++iz) count_row(iz);
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz) count_row(iz);
  }
  std::vector<std::int64_t> out(nd, 0);
  for (int iz = 0; iz < nz; ++iz)
    for (std::size_t k = 0; k < nd; ++k) out[k] += rows[static_cast<std::size_t>(iz) * nd + k];
  return out;
}

double perimeter(const IndicatorSet& e, const PerimeterStencil& stencil, Exec exec) {
  const auto counts = perimeter_cut_counts(e, stencil, exec);
  double p = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k)
    p += static_cast<double>(counts[k]) * stencil.directions()[k].weight;
  return p;
}

double full_perimeter(const IndicatorSet& e, const PerimeterStencil& stencil) {
  return perimeter(e, stencil) + trace_area(e);
}

double wetting_energy(const IndicatorSet& e, const BetaField& beta) {
  const GridSpec& g = e.grid();
  if (beta.values().size() != g.bottom_count())
    throw GridError("wetting energy: beta sampled on a different grid");
  double s = 0.0;
  for (std::size_t i = 0; i < g.bottom_count(); ++i)
    if (e.contains(i)) s += beta.at_bottom(i);
  return s * g.face_area();
}

double capillary_energy(const IndicatorSet& e, const BetaField& beta,
                        const PerimeterStencil& stencil) {
  return perimeter(e, stencil) + wetting_energy(e, beta);
}

double dissipation_term(const IndicatorSet& e, const IndicatorSet& f,
                        const ScalarField& sd_f, double h, Exec exec) {
  require_same_grid(e.grid(), f.grid());
  require_same_grid(e.grid(), sd_f.grid);
  const GridSpec& g = e.grid();
  const std::size_t row = g.bottom_count();
  const int nz = g.nz();
  std::vector<double> partial(static_cast<std::size_t>(nz), 0.0);
  auto sum_row = [&](int iz) {
    double s = 0.0;
    const std::size_t base = static_cast<std::size_t>(iz) * row;
    for (std::size_t i = base; i < base + row; ++i)
      if (e.contains(i) != f.contains(i)) s += std::abs(sd_f.values[i]);
    partial[static_cast<std::size_t>(iz)] = s;
  };
  if (exec == Exec::serial) {
    for (int iz = 0; iz < nz; ++iz) sum_row(iz);
  } else {
#pragma omp parallel for schedule(static)
    for (int iz = 0; iz < nz; ++iz) sum_row(iz);
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s * g.cell_volume() / h;
}

EnergyBreakdown atw_energy(const IndicatorSet& e, const IndicatorSet& f,
                           const ScalarField& sd_f, double h, double m0,
                           const BetaField& beta, const PerimeterStencil& stencil) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("atw energy: h must lie in (0, 1)");
  EnergyBreakdown out;
  out.capillary = capillary_energy(e, beta, stencil);
  out.dissipation = dissipation_term(e, f, sd_f, h);
  out.penalty = std::abs(volume(e) - m0) / std::sqrt(h);
  return out;
}

EnergyBreakdown atw_energy(const IndicatorSet& e, const IndicatorSet& f, double h,
                           double m0, const BetaField& beta,
                           const PerimeterStencil& stencil) {
  return atw_energy(e, f, signed_distance(f), h, m0, beta, stencil);
}

}  // namespace capflow
