#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace capflow {

// A point of the closed upper half-space. For d = 1 the y component is unused
// and stays 0; z is always the vertical coordinate.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct CellIndex {
  int ix = 0;
  int iy = 0;
  int iz = 0;
};

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Uniform Cartesian grid over a box [lo, hi]^d x [0, n_vert * dx]. The bottom
// row of cells abuts the boundary plane z = 0.
class GridSpec {
 public:
  GridSpec() = default;

  // origin holds the horizontal coordinates of the bottom-left cell center; the
  // vertical coordinate of that center is always dx / 2.
  static GridSpec make(int d, double dx, int n_horiz, int n_vert,
                       std::array<double, 2> origin);
  // Horizontal extent symmetric about x' = 0.
  static GridSpec centered(int d, double dx, int n_horiz, int n_vert);

  int d() const { return d_; }
  double dx() const { return dx_; }
  int n_horiz() const { return n_horiz_; }
  int n_vert() const { return n_vert_; }
  std::array<double, 2> origin() const { return origin_; }

  int nx() const { return n_horiz_; }
  int ny() const { return d_ == 2 ? n_horiz_ : 1; }
  int nz() const { return n_vert_; }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(nx()) * ny() * nz();
  }
  std::size_t bottom_count() const {
    return static_cast<std::size_t>(nx()) * ny();
  }
  // Volume of one cell, dx^(d+1).
  double cell_volume() const;
  // Area of one face parallel to the boundary plane, dx^d.
  double face_area() const;

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * ny() + iy) * nx() + ix;
  }
  std::size_t index(CellIndex c) const { return index(c.ix, c.iy, c.iz); }
  CellIndex cell(std::size_t idx) const;
  bool in_grid(int ix, int iy, int iz) const {
    return ix >= 0 && ix < nx() && iy >= 0 && iy < ny() && iz >= 0 &&
           iz < nz();
  }

  Point center(std::size_t idx) const { return center(cell(idx)); }
  Point center(CellIndex c) const;

  // Box bounds (cell faces) of the truncated domain.
  Point box_lo() const;
  Point box_hi() const;

  bool operator==(const GridSpec&) const = default;

 private:
  int d_ = 1;
  double dx_ = 1.0;
  int n_horiz_ = 2;
  int n_vert_ = 2;
  std::array<double, 2> origin_{0.0, 0.0};
};

void require_same_grid(const GridSpec& a, const GridSpec& b);

// Binary occupancy over grid cells; a set is the union of its closed cells.
class IndicatorSet {
 public:
  IndicatorSet() = default;
  explicit IndicatorSet(const GridSpec& grid);
  IndicatorSet(const GridSpec& grid, std::vector<std::uint8_t> bits);

  static IndicatorSet full(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool contains(std::size_t idx) const { return bits_[idx] != 0; }
  void set(std::size_t idx, bool inside) { bits_[idx] = inside ? 1 : 0; }

  std::size_t count() const;
  std::size_t bottom_row_count() const;
  bool empty() const { return count() == 0; }
  bool is_full() const { return count() == bits_.size(); }

  // True when every occupied cell of *this is occupied in other.
  bool subset_of(const IndicatorSet& other) const;
  IndicatorSet complement() const;

  bool operator==(const IndicatorSet&) const = default;

 private:
  GridSpec grid_;
  std::vector<std::uint8_t> bits_;
};

// Contact coefficient sampled at bottom-row cell centers, |beta| <= 1 - 2 kappa.
class BetaField {
 public:
  BetaField() = default;
  BetaField(const GridSpec& grid, double kappa, std::vector<double> values);

  static BetaField constant(const GridSpec& grid, double kappa, double value);
  // beta(x') = value0 + slope * x_1 clamped to the admissible band.
  static BetaField ramp(const GridSpec& grid, double kappa, double value0,
                        double slope);

  double kappa() const { return kappa_; }
  std::span<const double> values() const { return values_; }
  double at_bottom(std::size_t bottom_idx) const { return values_[bottom_idx]; }
  double max_abs() const;

 private:
  double kappa_ = 0.5;
  std::vector<double> values_;
};

double volume(const IndicatorSet& e);
double trace_area(const IndicatorSet& e);
double sym_diff_volume(const IndicatorSet& a, const IndicatorSet& b);
std::size_t sym_diff_count(const IndicatorSet& a, const IndicatorSet& b);

// Exact |A delta B| for sets living on different grids sharing the same
// physical frame; computed from rectangle overlaps of cells.
double cross_grid_sym_diff(const IndicatorSet& a, const IndicatorSet& b);

// Number of 4/6-connected components of occupied cells.
int component_count(const IndicatorSet& e);

// True when any occupied cell lies in an outermost lateral column or the top row.
bool touches_walls(const IndicatorSet& e);

}  // namespace capflow
