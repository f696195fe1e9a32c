#include "capflow/shapes.hpp"

#include <algorithm>
#include <cmath>

namespace capflow {

Shape Shape::empty() { return Shape{}; }

Shape Shape::box(Point lo, Point hi) {
  Shape s;
  s.kind_ = Kind::box;
  s.a_ = lo;
  s.b_ = hi;
  return s;
}

Shape Shape::ball(Point center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
  Shape s;
  s.kind_ = Kind::ball;
  s.a_ = center;
  s.radius_ = radius;
  return s;
}

Shape Shape::cap(double r, double kappa, Point base_center) {
  Shape s;
  s.kind_ = Kind::cap;
  s.cap_ = cap_geometry(r, kappa);
  s.a_ = base_center;
  s.a_.z = 0.0;
  return s;
}

Shape Shape::unite(std::vector<Shape> parts) {
  Shape s;
  s.kind_ = Kind::union_of;
  s.parts_ = std::move(parts);
  return s;
}

bool Shape::contains(const Point& p) const {
  if (p.z <= 0.0) return false;
  switch (kind_) {
    case Kind::empty:
      return false;
    case Kind::box:
      return p.x >= a_.x && p.x <= b_.x && p.y >= a_.y && p.y <= b_.y &&
             p.z >= a_.z && p.z <= b_.z;
    case Kind::ball: {
      const double dx = p.x - a_.x;
      const double dy = p.y - a_.y;
      const double dz = p.z - a_.z;
      return dx * dx + dy * dy + dz * dz < radius_ * radius_;
    }
    case Kind::cap:
      return cap_.contains({p.x - a_.x, p.y - a_.y, p.z});
    case Kind::union_of:
      return std::any_of(parts_.begin(), parts_.end(),
                         [&](const Shape& s) { return s.contains(p); });
  }
  return false;
}

std::optional<Shape::Bounds> Shape::bounds() const {
  switch (kind_) {
    case Kind::empty:
      return std::nullopt;
    case Kind::box:
      if (a_.x > b_.x || a_.y > b_.y || a_.z > b_.z || b_.z <= 0.0) return std::nullopt;
      return Bounds{{a_.x, a_.y, std::max(a_.z, 0.0)}, b_};
    case Kind::ball:
      if (a_.z + radius_ <= 0.0) return std::nullopt;
      return Bounds{{a_.x - radius_, a_.y - radius_, std::max(0.0, a_.z - radius_)},
                    {a_.x + radius_, a_.y + radius_, a_.z + radius_}};
    case Kind::cap:
      return Bounds{{a_.x - cap_.r, a_.y - cap_.r, 0.0},
                    {a_.x + cap_.r, a_.y + cap_.r, cap_.apex_height()}};
    case Kind::union_of: {
      std::optional<Bounds> out;
      for (const auto& s : parts_) {
        const auto b = s.bounds();
        if (!b) continue;
        if (!out) {
          out = b;
          continue;
        }
        out->lo = {std::min(out->lo.x, b->lo.x), std::min(out->lo.y, b->lo.y),
                   std::min(out->lo.z, b->lo.z)};
        out->hi = {std::max(out->hi.x, b->hi.x), std::max(out->hi.y, b->hi.y),
                   std::max(out->hi.z, b->hi.z)};
      }
      return out;
    }
  }
  return std::nullopt;
}

IndicatorSet rasterize(const Shape& shape, const GridSpec& grid) {
  IndicatorSet out(grid);
  const auto b = shape.bounds();
  if (!b) return out;
  const Point lo = grid.box_lo();
  const Point hi = grid.box_hi();
  const double tol = 1e-12 * std::max(1.0, grid.dx() * grid.n_horiz());
  bool inside = b->lo.x >= lo.x - tol && b->hi.x <= hi.x + tol &&
                b->hi.z <= hi.z + tol;
  if (grid.d() == 2) inside = inside && b->lo.y >= lo.y - tol && b->hi.y <= hi.y + tol;
  if (!inside) throw GridError("rasterize: region extends outside the grid box");
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    Point p = grid.center(i);
    if (shape.contains(p)) out.set(i, true);
  }
  return out;
}

}  // namespace capflow
