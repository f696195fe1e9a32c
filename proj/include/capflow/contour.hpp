#pragma once

#include <array>
#include <vector>

#include "capflow/domain.hpp"

namespace capflow {

// Vertices (x, z) of an interface curve, oriented with the set on the left.
struct Polyline {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
};

// Cell-center values of a d = 1 grid, Gaussian-smoothed with standard
// deviation sigma (in cells). Values beyond the lateral and top walls are 0;
// the bottom row is reflected across the boundary plane.
std::vector<double> smoothed_indicator(const IndicatorSet& e, double sigma_cells);

// Marching squares on the lattice of cell centers at the given level.
// Lattice points outside the lateral and top walls are treated as 0, so every
// curve either closes or ends on the bottom row of centers.
std::vector<Polyline> extract_contours(const GridSpec& grid, const std::vector<double>& values,
                                       double level = 0.5);

// Signed curvature at every vertex (positive where the set is convex), from a
// least-squares quadratic fit of x(s) and z(s) over |s - s_i| <= window.
std::vector<double> polyline_curvature(const Polyline& line, double window);

// Bilinear interpolation of cell-center values at (x, z), clamped to the grid.
double bilinear(const GridSpec& grid, const std::vector<double>& values, double x, double z);

}  // namespace capflow
