#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "capflow/barriers.hpp"
#include "capflow/domain.hpp"

namespace capflow {

// Analytic region descriptor used to generate initial data.
class Shape {
 public:
  enum class Kind { empty, box, ball, cap, union_of };

  static Shape empty();
  static Shape box(Point lo, Point hi);
  // Ball intersected with the open half-space.
  static Shape ball(Point center, double radius);
  // Spherical cap barrier of base radius r, translated horizontally to base_center.
  static Shape cap(double r, double kappa, Point base_center = {});
  static Shape unite(std::vector<Shape> parts);

  Kind kind() const { return kind_; }
  bool contains(const Point& p) const;

  struct Bounds {
    Point lo;
    Point hi;
  };
  // Bounding box of the region within the half-space; nullopt when empty.
  std::optional<Bounds> bounds() const;

 private:
  Kind kind_ = Kind::empty;
  Point a_{};
  Point b_{};
  double radius_ = 0.0;
  CapBarrier cap_{};
  std::vector<Shape> parts_;
};

// Cell occupied iff its center lies in the region. Throws GridError when the
// region is not contained in the grid box.
IndicatorSet rasterize(const Shape& shape, const GridSpec& grid);

}  // namespace capflow
