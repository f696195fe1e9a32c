#include <cmath>
#include <numbers>
#include <random>

#include "capflow/energy.hpp"
#include "capflow/shapes.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace capflow;

TEST_CASE("face-count perimeter") {
  const GridSpec g = GridSpec::make(1, 1.0, 6, 6, {0, 0});
  const auto n4 = PerimeterStencil::make(g, Neighborhood::N4);
  IndicatorSet block(g);
  for (int ix = 2; ix < 4; ++ix)
    for (int iz = 2; iz < 4; ++iz) block.set(g.index(ix, 0, iz), true);
  CHECK(perimeter(block, n4) == 8.0);

  const GridSpec q = GridSpec::make(1, 0.25, 8, 8, {0.125, 0});
  const auto sq = rasterize(Shape::box({0.5, 0, 0}, {1.5, 0, 1}), q);
  CHECK(sq.count() == 16);
  const auto s4 = PerimeterStencil::make(q, Neighborhood::N4);
  CHECK(perimeter(sq, s4) == doctest::Approx(3.0));
  CHECK(full_perimeter(sq, s4) == doctest::Approx(4.0));
}

TEST_CASE("capillary energy and coercivity") {
  const GridSpec q = GridSpec::make(1, 0.25, 8, 8, {0.125, 0});
  const auto sq = rasterize(Shape::box({0.5, 0, 0}, {1.5, 0, 1}), q);
  const auto s4 = PerimeterStencil::make(q, Neighborhood::N4);
  CHECK(capillary_energy(sq, BetaField::constant(q, 0.5, 0.0), s4) == doctest::Approx(3.0));
  CHECK(capillary_energy(sq, BetaField::constant(q, 0.25, 0.3), s4) == doctest::Approx(3.3));
  const double c = capillary_energy(sq, BetaField::constant(q, 0.25, -0.5), s4);
  CHECK(c == doctest::Approx(2.5));
  CHECK(0.25 * full_perimeter(sq, s4) <= c);
  CHECK(c <= full_perimeter(sq, s4));
}

TEST_CASE("coercivity sandwich on random sets") {
  std::mt19937_64 rng(17);
  const GridSpec g = GridSpec::make(1, 0.1, 12, 10, {0, 0});
  for (double kappa : {0.1, 0.25, 0.5}) {
    for (auto order : {Neighborhood::N4, Neighborhood::N8, Neighborhood::N16}) {
      const auto s = PerimeterStencil::make(g, order);
      for (int t = 0; t < 20; ++t) {
        const auto e = oracle::random_set(g, rng, 0.4);
        const double bmax = 1.0 - 2.0 * kappa;
        const auto beta = BetaField::constant(g, kappa, t % 2 ? bmax : -bmax);
        const double c = capillary_energy(e, beta, s);
        // Crofton stencils undercount vertical chains slightly, hence the
        // estimator margin on the lower side.
        CHECK(c <= full_perimeter(e, s) + 1e-12);
        CHECK(c >= kappa * full_perimeter(e, s) * (1.0 - s.max_relative_error()) - 1e-12);
      }
    }
  }
}

TEST_CASE("stencil weights") {
  const GridSpec g = GridSpec::make(1, 0.5, 4, 4, {0, 0});
  for (auto order : {Neighborhood::N4, Neighborhood::N8, Neighborhood::N16}) {
    const auto s = PerimeterStencil::make(g, order);
    for (const auto& d : s.directions()) CHECK(d.weight > 0.0);
  }
  CHECK(PerimeterStencil::make(g, Neighborhood::N4).directions().size() == 2);
  CHECK(PerimeterStencil::make(g, Neighborhood::N16).directions().size() == 8);
  const double e8 = PerimeterStencil::make(g, Neighborhood::N8).max_relative_error();
  const double e16 = PerimeterStencil::make(g, Neighborhood::N16).max_relative_error();
  CHECK(e16 < e8);
  CHECK(e16 < 0.03);
  const GridSpec g3 = GridSpec::make(2, 0.5, 4, 4, {0, 0});
  CHECK(PerimeterStencil::make(g3, Neighborhood::N16).directions().size() == 13);
  CHECK(PerimeterStencil::make(g3, Neighborhood::N16).max_relative_error() < 0.15);
  CHECK_THROWS(parse_neighborhood("N5"));
  CHECK(parse_neighborhood("N16") == Neighborhood::N16);
}

TEST_CASE("disk perimeter with N16") {
  const double dx = 1.0 / 128;
  const GridSpec g = GridSpec::centered(1, dx, 320, 440);
  const auto disk = rasterize(Shape::ball({0, 0, 2}, 1.0), g);
  const auto s = PerimeterStencil::make(g, Neighborhood::N16);
  CHECK(std::abs(perimeter(disk, s) - 2 * std::numbers::pi) < 0.02 * 2 * std::numbers::pi);
}

TEST_CASE("sphere area with the 26-neighborhood") {
  const double dx = 1.0 / 32;
  const GridSpec g = GridSpec::centered(2, dx, 80, 120);
  const auto ball = rasterize(Shape::ball({0, 0, 2}, 1.0), g);
  const auto s = PerimeterStencil::make(g, Neighborhood::N16);
  CHECK(std::abs(perimeter(ball, s) - 4 * std::numbers::pi) < 0.08 * 4 * std::numbers::pi);
}

TEST_CASE("perimeter matches the pairwise oracle and is thread independent") {
  std::mt19937_64 rng(8);
  const GridSpec g = GridSpec::make(1, 0.25, 4, 4, {0, 0});
  for (auto order : {Neighborhood::N4, Neighborhood::N8, Neighborhood::N16}) {
    const auto s = PerimeterStencil::make(g, order);
    for (int t = 0; t < 50; ++t) {
      const auto e = oracle::random_set(g, rng);
      CHECK(perimeter(e, s) == doctest::Approx(oracle::mask_perimeter(g, s, oracle::to_mask(e))));
      CHECK(perimeter(e, s, Exec::serial) == perimeter(e, s, Exec::parallel));
    }
  }
}

TEST_CASE("step energy matches the oracle") {
  std::mt19937_64 rng(81);
  const GridSpec g = GridSpec::make(1, 0.25, 4, 4, {0, 0});
  const auto s = PerimeterStencil::make(g, Neighborhood::N8);
  const auto beta = BetaField::ramp(g, 0.25, -0.2, 0.4);
  for (int t = 0; t < 50; ++t) {
    const auto f = oracle::random_set(g, rng);
    const auto e = oracle::random_set(g, rng);
    const auto sd = oracle::all_pairs_signed_distance(f);
    const double h = 0.05;
    const double m0 = volume(f);
    const auto got = atw_energy(e, f, h, m0, beta, s);
    CHECK(got.total() ==
          doctest::Approx(oracle::step_energy(f, sd, h, m0, beta, s, oracle::to_mask(e))));
    CHECK(got.dissipation >= 0.0);
    CHECK(got.penalty >= 0.0);
    CHECK(atw_energy(f, f, h, m0, beta, s).dissipation == 0.0);
  }
  const auto f = oracle::random_set(g, rng);
  CHECK_THROWS(atw_energy(f, f, 1.0, 1.0, beta, s));
}

TEST_CASE("serial and parallel kernels agree bit for bit on large grids") {
  std::mt19937_64 rng(99);
  for (int d : {1, 2}) {
    const GridSpec g = GridSpec::centered(d, d == 1 ? 1.0 / 128 : 1.0 / 24, d == 1 ? 128 : 24,
                                          d == 1 ? 96 : 24);
    const auto f = rasterize(Shape::ball({0, 0, 0}, 0.35), g);
    auto e = f;
    std::bernoulli_distribution flip(0.05);
    for (std::size_t i = 0; i < g.cell_count(); ++i)
      if (flip(rng)) e.set(i, !e.contains(i));
    const auto sd = signed_distance(f);
    CHECK(dissipation_term(e, f, sd, 0.01, Exec::serial) ==
          dissipation_term(e, f, sd, 0.01, Exec::parallel));
    const auto s = PerimeterStencil::make(g, Neighborhood::N16);
    CHECK(perimeter(e, s, Exec::serial) == perimeter(e, s, Exec::parallel));
    CHECK(signed_distance(e, Exec::serial).values == signed_distance(e, Exec::parallel).values);
  }
}
