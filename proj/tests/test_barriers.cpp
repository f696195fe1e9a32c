#include <cmath>
#include <random>

#include "capflow/barriers.hpp"
#include "capflow/shapes.hpp"
#include "doctest.h"

using namespace capflow;

TEST_CASE("cap geometry") {
  const auto c = cap_geometry(std::sqrt(3.0), 0.5);
  CHECK(c.rho == doctest::Approx(2.0));
  CHECK(c.center_depth == doctest::Approx(1.0));
  CHECK(c.apex_height() == doctest::Approx(1.0));
  CHECK_THROWS(cap_geometry(1.0, 0.0));
  CHECK_THROWS(cap_geometry(1.0, 0.7));
  CHECK_THROWS(cap_geometry(0.0, 0.3));
  for (double kappa : {0.05, 0.2, 0.25, 0.4, 0.5}) {
    for (double r : {0.1, 1.0, 7.5}) {
      const auto k = cap_geometry(r, kappa);
      CHECK(r * r + k.rho * k.rho * (1 - kappa) * (1 - kappa) ==
            doctest::Approx(k.rho * k.rho));
      CHECK(k.contact_normal_z() == doctest::Approx(1.0 - kappa));
      CHECK(k.rho > r);
    }
  }
}

TEST_CASE("caps are nested and fit the containment box") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double kappa : {0.1, 0.25, 0.5}) {
    for (int t = 0; t < 2000; ++t) {
      const Point p{u(rng), 0.0, std::abs(u(rng))};
      const double r = 0.5 + std::abs(u(rng));
      const auto a = cap_geometry(r, kappa);
      const auto b = cap_geometry(r * 1.3, kappa);
      if (a.contains(p)) {
        CHECK(b.contains(p));
        const double box = 2.0 / std::sqrt(3.0) * r;
        CHECK(std::abs(p.x) < box);
        CHECK(p.z < 2.0 * box);
      }
    }
  }
}

TEST_CASE("closed-form cap through a point") {
  for (double kappa : {0.1, 0.25, 0.5}) {
    for (const Point p : {Point{0, 0, 0.01}, Point{0.3, 0, 0.2}, Point{-1.0, 0, 2.0}}) {
      const double r = cap_radius_through(p, kappa);
      const auto c = cap_geometry(r, kappa);
      const double dz = p.z + c.center_depth;
      CHECK(std::sqrt(p.x * p.x + dz * dz) == doctest::Approx(c.rho));
    }
  }
}

TEST_CASE("minimal enclosing cap") {
  const double dx = 1.0 / 64;
  const GridSpec g = GridSpec::centered(1, dx, 200, 120);
  IndicatorSet single(g);
  const std::size_t mid = g.index(g.nx() / 2, 0, 0);
  single.set(mid, true);
  const double r_single = min_enclosing_cap(single, 0.5);
  CHECK(r_single == doctest::Approx(cap_radius_through(g.center(mid), 0.5)).epsilon(1e-9));

  for (double kappa : {0.25, 0.5}) {
    const auto cap = rasterize(Shape::cap(1.0, kappa), g);
    const double r = min_enclosing_cap(cap, kappa);
    CHECK(r >= 1.0 - dx);
    CHECK(r <= 1.0 + dx);
    const auto bigger = rasterize(Shape::cap(1.2, kappa), g);
    CHECK(min_enclosing_cap(bigger, kappa) >= r);
  }
  CHECK_THROWS(min_enclosing_cap(IndicatorSet(g), 0.5));
}
