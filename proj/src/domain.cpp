#include "capflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace capflow {

GridSpec GridSpec::make(int d, double dx, int n_horiz, int n_vert,
                        std::array<double, 2> origin) {
  if (d != 1 && d != 2) throw GridError("grid: d must be 1 or 2");
  if (!(dx > 0.0) || !std::isfinite(dx)) throw GridError("grid: dx must be > 0");
  if (n_horiz < 2 || n_vert < 2)
    throw GridError("grid: need at least 2 cells per axis");
  if (!std::isfinite(origin[0]) || !std::isfinite(origin[1]))
    throw GridError("grid: origin must be finite");
  GridSpec g;
  g.d_ = d;
  g.dx_ = dx;
  g.n_horiz_ = n_horiz;
  g.n_vert_ = n_vert;
  g.origin_ = origin;
  if (d == 1) g.origin_[1] = 0.0;
  return g;
}

GridSpec GridSpec::centered(int d, double dx, int n_horiz, int n_vert) {
  const double o = -0.5 * (n_horiz - 1) * dx;
  return make(d, dx, n_horiz, n_vert, {o, d == 2 ? o : 0.0});
}

double GridSpec::cell_volume() const { return std::pow(dx_, d_ + 1); }
double GridSpec::face_area() const { return std::pow(dx_, d_); }

CellIndex GridSpec::cell(std::size_t idx) const {
  const std::size_t plane = static_cast<std::size_t>(nx()) * ny();
  CellIndex c;
  c.iz = static_cast<int>(idx / plane);
  const std::size_t rem = idx % plane;
  c.iy = static_cast<int>(rem / nx());
  c.ix = static_cast<int>(rem % nx());
  return c;
}

Point GridSpec::center(CellIndex c) const {
  Point p;
  p.x = origin_[0] + c.ix * dx_;
  p.y = d_ == 2 ? origin_[1] + c.iy * dx_ : 0.0;
  p.z = (c.iz + 0.5) * dx_;
  return p;
}

Point GridSpec::box_lo() const {
  return {origin_[0] - 0.5 * dx_, d_ == 2 ? origin_[1] - 0.5 * dx_ : 0.0, 0.0};
}

Point GridSpec::box_hi() const {
  return {origin_[0] + (n_horiz_ - 0.5) * dx_,
          d_ == 2 ? origin_[1] + (n_horiz_ - 0.5) * dx_ : 0.0, n_vert_ * dx_};
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw GridError("grid mismatch between operands");
}

IndicatorSet::IndicatorSet(const GridSpec& grid)
    : grid_(grid), bits_(grid.cell_count(), 0) {}

IndicatorSet::IndicatorSet(const GridSpec& grid, std::vector<std::uint8_t> bits)
    : grid_(grid), bits_(std::move(bits)) {
  if (bits_.size() != grid_.cell_count())
    throw GridError("indicator: bit count does not match grid");
  for (auto& b : bits_) b = b ? 1 : 0;
}

IndicatorSet IndicatorSet::full(const GridSpec& grid) {
  return IndicatorSet(grid, std::vector<std::uint8_t>(grid.cell_count(), 1));
}

std::size_t IndicatorSet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

std::size_t IndicatorSet::bottom_row_count() const {
  const auto n = grid_.bottom_count();
  return static_cast<std::size_t>(
      std::count(bits_.begin(), bits_.begin() + static_cast<std::ptrdiff_t>(n), 1));
}

bool IndicatorSet::subset_of(const IndicatorSet& other) const {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i] && !other.bits_[i]) return false;
  return true;
}

IndicatorSet IndicatorSet::complement() const {
  std::vector<std::uint8_t> c(bits_.size());
  for (std::size_t i = 0; i < bits_.size(); ++i) c[i] = bits_[i] ? 0 : 1;
  return IndicatorSet(grid_, std::move(c));
}

BetaField::BetaField(const GridSpec& grid, double kappa,
                     std::vector<double> values)
    : kappa_(kappa), values_(std::move(values)) {
  if (!(kappa > 0.0 && kappa <= 0.5))
    throw std::invalid_argument("beta: kappa must lie in (0, 1/2]");
  if (values_.size() != grid.bottom_count())
    throw std::invalid_argument("beta: one value per bottom cell required");
  const double bound = 1.0 - 2.0 * kappa;
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("beta: non-finite value");
    if (std::abs(v) > bound + 1e-12)
      throw std::invalid_argument("beta: |beta| exceeds 1 - 2 kappa");
  }
}

BetaField BetaField::constant(const GridSpec& grid, double kappa, double value) {
  return BetaField(grid, kappa, std::vector<double>(grid.bottom_count(), value));
}

BetaField BetaField::ramp(const GridSpec& grid, double kappa, double value0,
                          double slope) {
  const double bound = 1.0 - 2.0 * kappa;
  std::vector<double> v(grid.bottom_count());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.center(i).x;
    v[i] = std::clamp(value0 + slope * x, -bound, bound);
  }
  return BetaField(grid, kappa, std::move(v));
}

double BetaField::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double volume(const IndicatorSet& e) {
  return static_cast<double>(e.count()) * e.grid().cell_volume();
}

double trace_area(const IndicatorSet& e) {
  return static_cast<double>(e.bottom_row_count()) * e.grid().face_area();
}

std::size_t sym_diff_count(const IndicatorSet& a, const IndicatorSet& b) {
  require_same_grid(a.grid(), b.grid());
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) n += (x[i] != y[i]) ? 1 : 0;
  return n;
}

double sym_diff_volume(const IndicatorSet& a, const IndicatorSet& b) {
  return static_cast<double>(sym_diff_count(a, b)) * a.grid().cell_volume();
}

namespace {

// Overlap length of [a0, a1] and [b0, b1].
double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Index range of cells of `g` along an axis with first center `o` that overlap [lo, hi].
std::pair<int, int> cell_range(double o, double dx, int n, double lo, double hi) {
  const int first = std::max(0, static_cast<int>(std::floor((lo - (o - 0.5 * dx)) / dx)));
  const int last = std::min(n - 1, static_cast<int>(std::floor((hi - (o - 0.5 * dx)) / dx)));
  return {first, last};
}

}  // namespace

double cross_grid_sym_diff(const IndicatorSet& a, const IndicatorSet& b) {
  const GridSpec& ga = a.grid();
  const GridSpec& gb = b.grid();
  if (ga.d() != gb.d()) throw GridError("cross-grid: dimension mismatch");
  const double ha = 0.5 * ga.dx();
  const double hb = 0.5 * gb.dx();
  const double zo_b = hb;
  // Sum of overlaps between occupied cells of a and occupied cells of b.
  double both = 0.0;
  for (std::size_t i = 0; i < a.bits().size(); ++i) {
    if (!a.contains(i)) continue;
    const Point c = ga.center(i);
    const auto [x0, x1] = cell_range(gb.origin()[0], gb.dx(), gb.nx(), c.x - ha, c.x + ha);
    const auto [z0, z1] = cell_range(zo_b, gb.dx(), gb.nz(), c.z - ha, c.z + ha);
    int y0 = 0;
    int y1 = 0;
    if (ga.d() == 2) {
      std::tie(y0, y1) = cell_range(gb.origin()[1], gb.dx(), gb.ny(), c.y - ha, c.y + ha);
    }
    double acc = 0.0;
    for (int iz = z0; iz <= z1; ++iz) {
      for (int iy = y0; iy <= y1; ++iy) {
        for (int ix = x0; ix <= x1; ++ix) {
          const std::size_t j = gb.index(ix, iy, iz);
          if (!b.contains(j)) continue;
          const Point q = gb.center(j);
          double o = overlap(c.x - ha, c.x + ha, q.x - hb, q.x + hb) *
                     overlap(c.z - ha, c.z + ha, q.z - hb, q.z + hb);
          if (ga.d() == 2) o *= overlap(c.y - ha, c.y + ha, q.y - hb, q.y + hb);
          acc += o;
        }
      }
    }
    both += acc;
  }
  return volume(a) + volume(b) - 2.0 * both;
}

int component_count(const IndicatorSet& e) {
  const GridSpec& g = e.grid();
  std::vector<int> label(g.cell_count(), -1);
  std::vector<std::size_t> stack;
  int comps = 0;
  for (std::size_t s = 0; s < label.size(); ++s) {
    if (!e.contains(s) || label[s] >= 0) continue;
    label[s] = comps;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const CellIndex c = g.cell(i);
      const int nb[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                            {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
      for (const auto& o : nb) {
        const int x = c.ix + o[0];
        const int y = c.iy + o[1];
        const int z = c.iz + o[2];
        if (!g.in_grid(x, y, z)) continue;
        const std::size_t j = g.index(x, y, z);
        if (e.contains(j) && label[j] < 0) {
          label[j] = comps;
          stack.push_back(j);
        }
      }
    }
    ++comps;
  }
  return comps;
}

bool touches_walls(const IndicatorSet& e) {
  const GridSpec& g = e.grid();
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (!e.contains(i)) continue;
    const CellIndex c = g.cell(i);
    if (c.ix == 0 || c.ix == g.nx() - 1 || c.iz == g.nz() - 1) return true;
    if (g.d() == 2 && (c.iy == 0 || c.iy == g.ny() - 1)) return true;
  }
  return false;
}

}  // namespace capflow
