#include "capflow/barriers.hpp"

#include <cmath>
#include <stdexcept>

namespace capflow {

bool CapBarrier::contains(const Point& p) const {
  if (p.z <= 0.0) return false;
  const double dz = p.z + center_depth;
  return p.x * p.x + p.y * p.y + dz * dz < rho * rho;
}

CapBarrier cap_geometry(double r, double kappa) {
  if (!(kappa > 0.0 && kappa <= 0.5))
    throw std::invalid_argument("cap: kappa must lie in (0, 1/2]");
  if (!(r > 0.0)) throw std::invalid_argument("cap: r must be > 0");
  CapBarrier c;
  c.r = r;
  c.kappa = kappa;
  c.rho = r / std::sqrt(2.0 * kappa - kappa * kappa);
  c.center_depth = c.rho * (1.0 - kappa);
  return c;
}

double cap_radius_through(const Point& p, double kappa) {
  const double s = 2.0 * kappa - kappa * kappa;
  const double a = p.z * (1.0 - kappa);
  const double q = p.x * p.x + p.y * p.y + p.z * p.z;
  const double rho = (a + std::sqrt(a * a + s * q)) / s;
  return rho * std::sqrt(s);
}

namespace {

bool all_inside(const IndicatorSet& e, const CapBarrier& cap) {
  const GridSpec& g = e.grid();
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (e.contains(i) && !cap.contains(g.center(i))) return false;
  return true;
}

}  // namespace

double min_enclosing_cap(const IndicatorSet& e, double kappa) {
  if (e.empty()) throw std::invalid_argument("min_enclosing_cap: empty set");
  const GridSpec& g = e.grid();
  double hi = g.dx();
  while (!all_inside(e, cap_geometry(hi, kappa))) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (all_inside(e, cap_geometry(mid, kappa)))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

CapContact cap_contact(const IndicatorSet& e, double kappa) {
  if (e.empty()) throw std::invalid_argument("cap_contact: empty set");
  const GridSpec& g = e.grid();
  CapContact out;
  double best = -1.0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (!e.contains(i)) continue;
    const double r = cap_radius_through(g.center(i), kappa);
    if (r > best) {
      best = r;
      out.cell = i;
    }
  }
  out.on_boundary_plane = g.cell(out.cell).iz == 0;
  return out;
}

}  // namespace capflow
