#include "capflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "capflow/contour.hpp"
#include "capflow/distance.hpp"

namespace capflow {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CheckEntry::Status verdict(bool ok) {
  return ok ? CheckEntry::Status::pass : CheckEntry::Status::fail;
}

}  // namespace

bool DiagnosticsReport::all_pass() const {
  return std::none_of(entries.begin(), entries.end(), [](const CheckEntry& e) {
    return e.status == CheckEntry::Status::fail;
  });
}

const CheckEntry* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

std::string DiagnosticsReport::to_csv() const {
  std::ostringstream os;
  os << "name,value,threshold,pass,step\n";
  for (const auto& e : entries) {
    os << e.name << ',' << fmt(e.value) << ',' << (e.threshold ? fmt(*e.threshold) : "")
       << ',';
    switch (e.status) {
      case CheckEntry::Status::pass:
        os << "true";
        break;
      case CheckEntry::Status::fail:
        os << "false";
        break;
      case CheckEntry::Status::report:
        os << "report";
        break;
    }
    os << ',' << e.step << '\n';
  }
  return os.str();
}

double density_constant(int d, double kappa) {
  return 4.0 * (d + 1) * std::pow(2.0 / kappa, 0.5 * (d + 1));
}

CheckEntry density_check(const IndicatorSet& e, const IndicatorSet& f, double h,
                         double kappa) {
  require_same_grid(e.grid(), f.grid());
  const GridSpec& g = e.grid();
  CheckEntry c;
  c.name = "density_linf";
  c.threshold = density_constant(g.d(), kappa) * std::sqrt(h) + g.dx();
  if (sym_diff_count(e, f) > 0) {
    const auto sd = signed_distance(f);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (e.contains(i) != f.contains(i)) c.value = std::max(c.value, std::abs(sd.values[i]));
  }
  c.status = verdict(c.value <= *c.threshold);
  return c;
}

double ball_density_constant(const IndicatorSet& e, double h) {
  const GridSpec& g = e.grid();
  std::vector<std::size_t> boundary;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (!e.contains(i)) continue;
    const CellIndex c = g.cell(i);
    const int nb[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    for (const auto& o : nb) {
      const int x = c.ix + o[0], y = c.iy + o[1], z = c.iz + o[2];
      if (g.in_grid(x, y, z) && !e.contains(g.index(x, y, z))) {
        boundary.push_back(i);
        break;
      }
    }
  }
  if (boundary.empty()) return 0.0;
  const std::size_t stride = std::max<std::size_t>(1, boundary.size() / 256);
  const double cv = g.cell_volume();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < boundary.size(); b += stride) {
    const CellIndex c = g.cell(boundary[b]);
    for (int q = 1; q <= 4; ++q) {
      const double r = 0.25 * q * std::sqrt(h);
      if (r < 2.0 * g.dx()) continue;
      const int rc = static_cast<int>(std::floor(r / g.dx()));
      double in = 0.0;
      double out = 0.0;
      for (int dz = -rc; dz <= rc; ++dz)
        for (int dy = g.d() == 2 ? -rc : 0; dy <= (g.d() == 2 ? rc : 0); ++dy)
          for (int dx = -rc; dx <= rc; ++dx) {
            if ((dx * dx + dy * dy + dz * dz) * g.dx() * g.dx() > r * r) continue;
            const int x = c.ix + dx, y = c.iy + dy, z = c.iz + dz;
            if (z < 0) continue;  // the ball is intersected with the half-space
            const bool inside = g.in_grid(x, y, z) && e.contains(g.index(x, y, z));
            (inside ? in : out) += cv;
          }
      best = std::min(best, std::min(in, out) / std::pow(r, g.d() + 1));
    }
  }
  return std::isfinite(best) ? best : 0.0;
}

std::vector<CheckEntry> dissipation_report(const FlowTrace& trace, double p0,
                                           double estimator_error) {
  std::vector<CheckEntry> out;
  CheckEntry step_check{"dissipation_step", 0.0, 0.0, CheckEntry::Status::pass, -1};
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    // Excess over F^h(F, F) in units of the integer quantum.
    const double excess = (r.energy() - r.reference_energy) / r.quantum;
    if (excess > worst) {
      worst = excess;
      step_check.step = r.k;
    }
    if (excess > 2.0) step_check.status = CheckEntry::Status::fail;
  }
  step_check.value = trace.records.size() > 1 ? worst : 0.0;
  step_check.threshold = 2.0;
  out.push_back(step_check);

  const double slack = 3.0 * estimator_error * p0;
  CheckEntry energy{"energy_bound", 0.0, p0 + slack, CheckEntry::Status::pass, -1};
  CheckEntry cumulative{"dissipation_sum", 0.0, p0 + slack, CheckEntry::Status::pass, -1};
  double sum = 0.0;
  for (const auto& r : trace.records) {
    const double e = r.capillary + r.penalty;
    if (e > energy.value) {
      energy.value = e;
      energy.step = r.k;
    }
    sum += r.dissipation;
  }
  cumulative.value = sum;
  cumulative.step = trace.records.back().k;
  energy.status = verdict(energy.value <= *energy.threshold);
  cumulative.status = verdict(cumulative.value <= *cumulative.threshold);
  out.push_back(energy);
  out.push_back(cumulative);
  return out;
}

double holder_modulus(const FlowTrace& trace, double p0) {
  double best = 0.0;
  const auto& s = trace.snapshots;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) {
      const double dt = std::abs(s[b].t - s[a].t);
      if (dt <= 0.0) continue;
      best = std::max(best, sym_diff_volume(s[a].set, s[b].set) / (p0 * std::sqrt(dt)));
    }
  return best;
}

L2Stats velocity_and_multiplier_stats(const FlowTrace& trace) {
  L2Stats s;
  const double h = trace.config.h;
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    s.velocity += h * r.velocity_sq;
    s.lambda += h * r.lambda * r.lambda;
    s.off_volume += r.off_volume ? 1 : 0;
  }
  return s;
}

std::vector<CheckEntry> multiplier_checks(const FlowTrace& trace) {
  const double bound = 1.0 / std::sqrt(trace.config.h);
  CheckEntry sign{"multiplier_sign_law", 0.0, 0.0, CheckEntry::Status::pass, -1};
  CheckEntry range{"multiplier_range", 0.0, bound, CheckEntry::Status::pass, -1};
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (std::abs(r.lambda) > range.value) {
      range.value = std::abs(r.lambda);
      range.step = r.k;
    }
    if (r.off_volume) {
      const double expect = trace.m0 > r.volume ? bound : -bound;
      if (r.lambda != expect) {
        sign.value += 1.0;
        if (sign.step < 0) sign.step = r.k;
      }
    }
  }
  sign.status = verdict(sign.value == 0.0);
  range.status = verdict(range.value <= bound);
  return {sign, range};
}

CheckEntry barrier_recursion(const FlowTrace& trace) {
  CheckEntry c{"barrier_recursion", 0.0, 0.0, CheckEntry::Status::pass, -1};
  const double h = trace.config.h;
  const double dx = trace.config.grid.dx();
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    const double excess =
        r.r_t - (trace.records[k - 1].r_t + h * std::abs(r.lambda) + 2.0 * dx);
    if (excess > worst) {
      worst = excess;
      c.step = r.k;
    }
  }
  c.value = trace.records.size() > 1 ? worst : 0.0;
  c.status = verdict(c.value <= 0.0);
  return c;
}

namespace {

std::vector<double> relative_sd(const IndicatorSet& e, const IndicatorSet& f, double h) {
  const auto sf = signed_distance(f);
  std::vector<double> v = sf.values;
  if (!(e == f)) {
    const auto se = signed_distance(e);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= se.values[i];
  } else {
    std::fill(v.begin(), v.end(), 0.0);
  }
  for (double& x : v) x /= h;
  return v;
}

// Level-set H = div(nu), nu = -grad u / |grad u|, at interface cells (d = 2).
ElResidual el_residual_3d(const IndicatorSet& e, const IndicatorSet& f, double h,
                          double lambda, const ElOptions& o) {
  const GridSpec& g = e.grid();
  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  std::vector<double> u(g.cell_count());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = e.contains(i) ? 1.0 : 0.0;
  const double sigma = o.smoothing_cells;
  const int rad = std::max(1, static_cast<int>(std::ceil(3 * sigma)));
  std::vector<double> k(2 * rad + 1);
  double ks = 0.0;
  for (int i = -rad; i <= rad; ++i) ks += k[i + rad] = std::exp(-0.5 * i * i / (sigma * sigma));
  for (double& x : k) x /= ks;
  const int ext[3] = {nx, ny, nz};
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> t(u.size(), 0.0);
    for (int iz = 0; iz < nz; ++iz)
      for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
          double s = 0.0;
          for (int j = -rad; j <= rad; ++j) {
            int c[3] = {ix, iy, iz};
            c[axis] += j;
            if (axis == 2 && c[2] < 0) c[2] = -c[2] - 1;
            if (c[axis] < 0 || c[axis] >= ext[axis]) continue;
            s += k[j + rad] * u[g.index(c[0], c[1], c[2])];
          }
          t[g.index(ix, iy, iz)] = s;
        }
    u.swap(t);
  }
  const auto v = relative_sd(e, f, h);
  const double dx = g.dx();
  auto at = [&](int x, int y, int z) {
    x = std::clamp(x, 0, nx - 1);
    y = std::clamp(y, 0, ny - 1);
    z = std::clamp(z, 0, nz - 1);
    return u[g.index(x, y, z)];
  };
  ElResidual out;
  double sq = 0.0;
  double hsum = 0.0;
  for (int iz = 2; iz + 2 < nz; ++iz) {
    if ((iz + 0.5) * dx <= o.boundary_margin_cells * dx) continue;
    for (int iy = 2; iy + 2 < ny; ++iy)
      for (int ix = 2; ix + 2 < nx; ++ix) {
        const std::size_t i = g.index(ix, iy, iz);
        const bool in = e.contains(i);
        if (!in) continue;
        if (e.contains(g.index(ix + 1, iy, iz)) && e.contains(g.index(ix - 1, iy, iz)) &&
            e.contains(g.index(ix, iy + 1, iz)) && e.contains(g.index(ix, iy - 1, iz)) &&
            e.contains(g.index(ix, iy, iz + 1)) && e.contains(g.index(ix, iy, iz - 1)))
          continue;
        const double ux = (at(ix + 1, iy, iz) - at(ix - 1, iy, iz)) / (2 * dx);
        const double uy = (at(ix, iy + 1, iz) - at(ix, iy - 1, iz)) / (2 * dx);
        const double uz = (at(ix, iy, iz + 1) - at(ix, iy, iz - 1)) / (2 * dx);
        const double c0 = at(ix, iy, iz);
        const double uxx = (at(ix + 1, iy, iz) - 2 * c0 + at(ix - 1, iy, iz)) / (dx * dx);
        const double uyy = (at(ix, iy + 1, iz) - 2 * c0 + at(ix, iy - 1, iz)) / (dx * dx);
        const double uzz = (at(ix, iy, iz + 1) - 2 * c0 + at(ix, iy, iz - 1)) / (dx * dx);
        const double uxy = (at(ix + 1, iy + 1, iz) - at(ix + 1, iy - 1, iz) -
                            at(ix - 1, iy + 1, iz) + at(ix - 1, iy - 1, iz)) / (4 * dx * dx);
        const double uxz = (at(ix + 1, iy, iz + 1) - at(ix + 1, iy, iz - 1) -
                            at(ix - 1, iy, iz + 1) + at(ix - 1, iy, iz - 1)) / (4 * dx * dx);
        const double uyz = (at(ix, iy + 1, iz + 1) - at(ix, iy + 1, iz - 1) -
                            at(ix, iy - 1, iz + 1) + at(ix, iy - 1, iz - 1)) / (4 * dx * dx);
        const double g2 = ux * ux + uy * uy + uz * uz;
        if (g2 < 1e-20) continue;
        const double num = uxx * (uy * uy + uz * uz) + uyy * (ux * ux + uz * uz) +
                           uzz * (ux * ux + uy * uy) - 2 * ux * uy * uxy - 2 * ux * uz * uxz -
                           2 * uy * uz * uyz;
        const double hcurv = -num / std::pow(g2, 1.5);
        const double r = hcurv + v[i] - lambda;
        sq += r * r;
        hsum += hcurv;
        ++out.samples;
      }
  }
  if (out.samples == 0) throw std::invalid_argument("el_residual: empty interface");
  out.rms = std::sqrt(sq / out.samples);
  out.mean_curvature = hsum / out.samples;
  return out;
}

// Cramer solve of a 3x3 system.
std::array<double, 3> solve3(const double m[3][3], const double r[3]) {
  auto det = [](const double a[3][3]) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  const double d = det(m);
  std::array<double, 3> out{};
  for (int c = 0; c < 3; ++c) {
    double a[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = j == c ? r[i] : m[i][j];
    out[static_cast<std::size_t>(c)] = d == 0.0 ? 0.0 : det(a) / d;
  }
  return out;
}

}  // namespace

ElResidual el_residual(const IndicatorSet& e, const IndicatorSet& f, double h, double lambda,
                       const ElOptions& o) {
  require_same_grid(e.grid(), f.grid());
  const GridSpec& g = e.grid();
  if (g.d() == 2) return el_residual_3d(e, f, h, lambda, o);
  const auto u = smoothed_indicator(e, o.smoothing_cells);
  const auto lines = extract_contours(g, u, 0.5);
  const auto v = relative_sd(e, f, h);
  const double margin = o.boundary_margin_cells * g.dx();
  ElResidual out;
  double sq = 0.0;
  double hsum = 0.0;
  for (const auto& line : lines) {
    if (line.points.size() < 5) continue;
    const auto curv = polyline_curvature(line, o.window_cells * g.dx());
    // Skip points whose fit window would run off an open end.
    std::vector<double> s(line.points.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i)
      s[i] = s[i - 1] + std::hypot(line.points[i][0] - line.points[i - 1][0],
                                   line.points[i][1] - line.points[i - 1][1]);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      const auto& p = line.points[i];
      if (p[1] <= margin) continue;
      if (!line.closed && (s[i] < o.window_cells * g.dx() ||
                           s.back() - s[i] < o.window_cells * g.dx()))
        continue;
      const double r = curv[i] + bilinear(g, v, p[0], p[1]) - lambda;
      sq += r * r;
      hsum += curv[i];
      ++out.samples;
    }
  }
  if (out.samples == 0) throw std::invalid_argument("el_residual: empty interface");
  out.rms = std::sqrt(sq / out.samples);
  out.mean_curvature = hsum / out.samples;
  return out;
}

std::vector<ContactMeasure> contact_angles(const IndicatorSet& e, const BetaField& beta,
                                           const ContactOptions& o) {
  const GridSpec& g = e.grid();
  if (g.d() != 1) throw GridError("contact_angles: d = 1 grids only");
  const auto u = smoothed_indicator(e, o.smoothing_cells);
  const auto lines = extract_contours(g, u, 0.5);
  const double bottom = 0.5 * g.dx();
  const double z0 = o.skip_cells * g.dx();
  const double z1 = z0 + o.window_cells * g.dx();
  std::vector<ContactMeasure> out;
  for (const auto& line : lines) {
    if (line.closed || line.points.size() < 2) continue;
    const std::size_t n = line.points.size();
    for (int end = 0; end < 2; ++end) {
      const auto& c = end == 0 ? line.points.front() : line.points.back();
      if (std::abs(c[1] - bottom) > 1e-9 * g.dx()) continue;
      // Walk from the contact point until the curve leaves the fitting band.
      // Stop early past an apex so the band never reaches the far side.
      std::vector<std::array<double, 2>> pts;
      double top = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const auto& p = line.points[end == 0 ? q : n - 1 - q];
        if (p[1] > z1 || p[1] < top - 2.0 * g.dx()) break;
        top = std::max(top, p[1]);
        if (p[1] >= z0) pts.push_back(p);
      }
      if (pts.size() < 4) continue;
      // Algebraic circle fit x^2 + z^2 + a x + b z + c = 0 in coordinates
      // relative to the contact point; the tangent is taken where the circle
      // meets z = 0. Nearly straight bands fall back to the principal axis.
      double nm[3][3] = {};
      double rhs[3] = {};
      double mx = 0.0, mz = 0.0;
      for (const auto& p : pts) {
        mx += p[0];
        mz += p[1];
      }
      mx /= pts.size();
      mz /= pts.size();
      double sxx = 0.0, sxz = 0.0, szz = 0.0;
      for (const auto& p : pts) {
        const double x = p[0] - c[0];
        const double z = p[1];
        const double b3[3] = {x, z, 1.0};
        const double w = -(x * x + z * z);
        for (int r = 0; r < 3; ++r) {
          for (int k = 0; k < 3; ++k) nm[r][k] += b3[r] * b3[k];
          rhs[r] += b3[r] * w;
        }
        sxx += (p[0] - mx) * (p[0] - mx);
        sxz += (p[0] - mx) * (p[1] - mz);
        szz += (p[1] - mz) * (p[1] - mz);
      }
      const double theta = 0.5 * std::atan2(2.0 * sxz, sxx - szz);
      double tx = std::cos(theta);
      double tz = std::sin(theta);
      const auto abc = solve3(nm, rhs);
      const double ccx = -0.5 * abc[0];
      const double ccz = -0.5 * abc[1];
      const double rad2 = ccx * ccx + ccz * ccz - abc[2];
      if (rad2 > ccz * ccz && rad2 < 1e6 * z1 * z1) {
        const double half = std::sqrt(rad2 - ccz * ccz);
        const double px = std::abs(ccx - half) < std::abs(ccx + half) ? ccx - half : ccx + half;
        tx = ccz;
        tz = px - ccx;
      }
      // Orient along the traversal: upward out of a start contact and
      // downward into an end contact.
      const double ux = pts.back()[0] - c[0];
      const double uz = pts.back()[1] - c[1];
      const double sgn = end == 0 ? 1.0 : -1.0;
      if (sgn * (tx * ux + tz * uz) < 0.0) {
        tx = -tx;
        tz = -tz;
      }
      const double len = std::hypot(tx, tz);
      tx /= len;
      tz /= len;
      // The set lies to the left of t, so the outward normal is (tz, -tx)
      // and nu . (-e_z) = tx.
      ContactMeasure m;
      m.x = c[0];
      m.cosine = tx;
      const double fx = std::round((c[0] - g.origin()[0]) / g.dx());
      const std::size_t col =
          static_cast<std::size_t>(std::clamp(fx, 0.0, static_cast<double>(g.nx() - 1)));
      m.beta = beta.at_bottom(col);
      out.push_back(m);
    }
  }
  return out;
}

namespace {

CheckEntry spread(const std::string& name, const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  CheckEntry c{name, 0.0, 2.0, CheckEntry::Status::pass, -1};
  // max / min, with two vanishing values counted as stable.
  c.value = *hi == 0.0 ? 1.0 : (*lo == 0.0 ? std::numeric_limits<double>::infinity() : *hi / *lo);
  c.status = verdict(c.value < 2.0);
  return c;
}

}  // namespace

std::vector<CheckEntry> study_checks(const StudyReport& study) {
  std::vector<CheckEntry> out;
  for (std::size_t j = 0; j < study.times.size(); ++j) {
    const auto& row = study.diffs[j];
    CheckEntry c{"cauchy_trend_t" + std::to_string(j), 0.0, 1.0 + study.slack,
                 CheckEntry::Status::pass, -1};
    // Largest ratio of consecutive differences.
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      const double r = row[i] == 0.0 ? (row[i + 1] == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                     : row[i + 1] / row[i];
      if (r > c.value) {
        c.value = r;
        c.step = static_cast<int>(i);
      }
    }
    c.status = verdict(c.value <= *c.threshold);
    out.push_back(c);
  }
  std::vector<double> holder, vel, lam, off;
  for (const auto& l : study.levels) {
    holder.push_back(holder_modulus(l.trace, l.trace.p0));
    const auto s = velocity_and_multiplier_stats(l.trace);
    vel.push_back(s.velocity);
    lam.push_back(s.lambda);
    off.push_back(s.off_volume * l.h);
  }
  out.push_back(spread("holder_modulus_spread", holder));
  out.push_back(spread("velocity_l2_spread", vel));
  out.push_back(spread("lambda_l2_spread", lam));
  CheckEntry o{"off_volume_time_trend", 0.0, 0.0, CheckEntry::Status::pass, -1};
  for (std::size_t i = 0; i + 1 < off.size(); ++i)
    if (off[i + 1] - off[i] > o.value) {
      o.value = off[i + 1] - off[i];
      o.step = static_cast<int>(i);
    }
  o.status = verdict(o.value <= 0.0);
  out.push_back(o);
  return out;
}

DiagnosticsReport diagnose(const FlowTrace& trace, const DiagnoseOptions& options) {
  DiagnosticsReport rep;
  const FlowConfig& cfg = trace.config;
  const GridSpec& g = cfg.grid;
  const auto stencil = PerimeterStencil::make(g, cfg.stencil);
  for (auto& e : dissipation_report(trace, trace.p0, stencil.max_relative_error()))
    rep.add(std::move(e));

  CheckEntry dens{"density_linf", 0.0, 0.0, CheckEntry::Status::pass, -1};
  dens.threshold = density_constant(g.d(), cfg.kappa) * std::sqrt(cfg.h) + g.dx();
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    if (r.max_distance_moved > dens.value) {
      dens.value = r.max_distance_moved;
      dens.step = r.k;
    }
  }
  dens.status = verdict(dens.value <= *dens.threshold);
  rep.add(dens);
  rep.add({"density_ball_constant", ball_density_constant(trace.final_set(), cfg.h),
           std::nullopt, CheckEntry::Status::report, trace.records.back().k});

  for (auto& e : multiplier_checks(trace)) rep.add(std::move(e));
  rep.add(barrier_recursion(trace));

  const auto l2 = velocity_and_multiplier_stats(trace);
  rep.add({"velocity_l2", l2.velocity, std::nullopt, CheckEntry::Status::report, -1});
  rep.add({"lambda_l2", l2.lambda, std::nullopt, CheckEntry::Status::report, -1});
  rep.add({"off_volume_steps", static_cast<double>(l2.off_volume), std::nullopt,
           CheckEntry::Status::report, -1});
  rep.add({"holder_modulus", holder_modulus(trace, trace.p0), std::nullopt,
           CheckEntry::Status::report, -1});

  // Pointwise law and Young's law on the last step.
  const auto& snaps = trace.snapshots;
  if (snaps.size() >= 2 && trace.records.size() >= 2) {
    const Snapshot& last = snaps.back();
    const Snapshot* prev = trace.snapshot_at(last.k - 1);
    if (prev != nullptr) {
      try {
        const auto el = el_residual(last.set, prev->set, cfg.h, trace.records.back().lambda,
                                    options.el);
        rep.add({"el_residual_rms", el.rms, std::nullopt, CheckEntry::Status::report, last.k});
        rep.add({"el_mean_curvature", el.mean_curvature, std::nullopt,
                 CheckEntry::Status::report, last.k});
      } catch (const std::invalid_argument&) {
      }
    }
  }
  if (g.d() == 1) {
    const BetaField beta = cfg.beta.build(g, cfg.kappa);
    const auto contacts = contact_angles(trace.final_set(), beta, options.contact);
    double worst = 0.0;
    for (const auto& c : contacts) worst = std::max(worst, std::abs(c.cosine - c.beta));
    if (!contacts.empty()) {
      CheckEntry ca{"contact_angle_error", worst, std::nullopt, CheckEntry::Status::report,
                    trace.records.back().k};
      if (options.assert_contact_angle) {
        ca.threshold = options.contact_tolerance;
        ca.status = verdict(worst <= options.contact_tolerance);
      }
      rep.add(ca);
    }
  }
  rep.add({"stationary", trace.stationary ? 1.0 : 0.0, std::nullopt, CheckEntry::Status::report,
           trace.records.back().k});
  return rep;
}

}  // namespace capflow
