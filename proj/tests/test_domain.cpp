#include <random>

#include "capflow/domain.hpp"
#include "capflow/shapes.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capflow;

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(GridSpec::make(3, 1.0, 4, 4, {0, 0}), GridError);
  CHECK_THROWS_AS(GridSpec::make(1, 0.0, 4, 4, {0, 0}), GridError);
  CHECK_THROWS_AS(GridSpec::make(1, 1.0, 1, 4, {0, 0}), GridError);
  const GridSpec g = GridSpec::make(2, 0.5, 3, 4, {0, 0});
  CHECK(g.cell_count() == 36);
  CHECK(g.bottom_count() == 9);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    CHECK(g.index(g.cell(i)) == i);
    CHECK(g.center(i).z > 0.0);
  }
  CHECK(g.center(0).z == doctest::Approx(0.25));
}

TEST_CASE("volume and trace") {
  const GridSpec g4 = GridSpec::make(1, 0.5, 4, 4, {0, 0});
  CHECK(volume(IndicatorSet(g4)) == 0.0);
  CHECK(volume(IndicatorSet::full(g4)) == 4.0);
  const GridSpec g = GridSpec::make(1, 0.1, 4, 4, {0, 0});
  IndicatorSet one(g);
  one.set(5, true);
  CHECK(volume(one) == doctest::Approx(0.01));

  IndicatorSet e(g4);
  e.set(g4.index(0, 0, 2), true);
  CHECK(trace_area(e) == 0.0);
  for (int ix = 0; ix < 3; ++ix) e.set(g4.index(ix, 0, 0), true);
  CHECK(trace_area(e) == 1.5);
  const GridSpec g8 = GridSpec::make(1, 1.0, 8, 3, {0, 0});
  CHECK(trace_area(IndicatorSet::full(g8)) == 8.0);
}

TEST_CASE("symmetric difference") {
  const GridSpec g = GridSpec::make(1, 0.5, 4, 4, {0, 0});
  std::mt19937_64 rng(7);
  const auto a = oracle::random_set(g, rng);
  CHECK(sym_diff_volume(a, a) == 0.0);
  CHECK(sym_diff_volume(a, a.complement()) ==
        doctest::Approx(volume(a) + volume(a.complement())));
  auto b = a;
  b.set(3, !b.contains(3));
  CHECK(sym_diff_volume(a, b) == doctest::Approx(0.25));
  CHECK_THROWS_AS(sym_diff_volume(a, IndicatorSet(GridSpec::make(1, 0.5, 5, 4, {0, 0}))),
                  GridError);
}

TEST_CASE("symmetric difference is a metric") {
  const GridSpec g = GridSpec::make(1, 0.25, 8, 8, {0, 0});
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto a = oracle::random_set(g, rng);
    const auto b = oracle::random_set(g, rng);
    const auto c = oracle::random_set(g, rng);
    CHECK(sym_diff_volume(a, c) <= sym_diff_volume(a, b) + sym_diff_volume(b, c) + 1e-15);
    CHECK(sym_diff_volume(a, b) == sym_diff_volume(b, a));
  }
}

TEST_CASE("measures are additive over disjoint unions") {
  const GridSpec g = GridSpec::make(2, 0.5, 5, 5, {0, 0});
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto a = oracle::random_set(g, rng, 0.3);
    auto b = oracle::random_set(g, rng, 0.3);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (a.contains(i)) b.set(i, false);
    IndicatorSet u(g);
    for (std::size_t i = 0; i < g.cell_count(); ++i) u.set(i, a.contains(i) || b.contains(i));
    CHECK(volume(u) == doctest::Approx(volume(a) + volume(b)));
    CHECK(trace_area(u) == doctest::Approx(trace_area(a) + trace_area(b)));
  }
}

TEST_CASE("cross-grid symmetric difference") {
  const GridSpec coarse = GridSpec::make(1, 0.5, 4, 4, {0.25, 0});
  const GridSpec fine = GridSpec::make(1, 0.25, 8, 8, {0.125, 0});
  const Shape sq = Shape::box({0.0, 0.0, 0.0}, {1.0, 0.0, 1.0});
  const auto a = rasterize(sq, coarse);
  const auto b = rasterize(sq, fine);
  CHECK(cross_grid_sym_diff(a, b) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(cross_grid_sym_diff(a, IndicatorSet(fine)) == doctest::Approx(volume(a)));
  std::mt19937_64 rng(5);
  const auto r = oracle::random_set(coarse, rng);
  const auto s = oracle::random_set(coarse, rng);
  CHECK(cross_grid_sym_diff(r, s) == doctest::Approx(sym_diff_volume(r, s)));
}

TEST_CASE("rasterize") {
  const GridSpec g = GridSpec::make(1, 0.25, 6, 6, {-0.125, 0});
  const auto sq = rasterize(Shape::box({0, 0, 0}, {1, 0, 1}), g);
  CHECK(sq.count() == 16);
  CHECK(rasterize(Shape::empty(), g).empty());
  CHECK_THROWS_AS(rasterize(Shape::box({0, 0, 0}, {3, 0, 1}), g), GridError);

  const Shape cap = Shape::cap(std::sqrt(3.0), 0.5);
  CHECK(cap.contains({0, 0, 0.9}));
  CHECK_FALSE(cap.contains({0, 0, 1.1}));
}

TEST_CASE("rasterize is monotone") {
  const GridSpec g = GridSpec::centered(1, 1.0 / 32, 80, 48);
  for (double r = 0.1; r < 1.0; r += 0.1) {
    const auto small = rasterize(Shape::ball({0, 0, 0.3}, r), g);
    const auto big = rasterize(Shape::ball({0, 0, 0.3}, r + 0.05), g);
    CHECK(small.subset_of(big));
    const auto c1 = rasterize(Shape::cap(r, 0.3), g);
    const auto c2 = rasterize(Shape::cap(r * 1.1, 0.3), g);
    CHECK(c1.subset_of(c2));
  }
}

TEST_CASE("beta field") {
  const GridSpec g = GridSpec::make(1, 0.5, 4, 4, {0, 0});
  CHECK_THROWS(BetaField::constant(g, 0.25, 0.6));
  CHECK_THROWS(BetaField::constant(g, 0.0, 0.0));
  CHECK_THROWS(BetaField::constant(g, 0.6, 0.0));
  CHECK_NOTHROW(BetaField::constant(g, 0.25, -0.5));
  const auto ramp = BetaField::ramp(g, 0.25, 0.0, 10.0);
  CHECK(ramp.max_abs() <= 0.5);
}

TEST_CASE("components and walls") {
  const GridSpec g = GridSpec::make(1, 1.0, 6, 4, {0, 0});
  IndicatorSet e(g);
  e.set(g.index(1, 0, 0), true);
  e.set(g.index(3, 0, 0), true);
  CHECK(component_count(e) == 2);
  e.set(g.index(2, 0, 0), true);
  CHECK(component_count(e) == 1);
  CHECK_FALSE(touches_walls(e));
  e.set(g.index(2, 0, 3), true);
  CHECK(touches_walls(e));
}
