#pragma once

#include <array>
#include <string>
#include <vector>

#include "capflow/distance.hpp"
#include "capflow/domain.hpp"
#include "capflow/parallel.hpp"

namespace capflow {

// N4 is the face neighborhood (4 in 2D, 6 in 3D); N8 and N16 add diagonal
// families (18- and 26-neighborhoods in 3D).
enum class Neighborhood { N4, N8, N16 };

Neighborhood parse_neighborhood(const std::string& name);
std::string to_string(Neighborhood n);

struct StencilDirection {
  std::array<int, 3> offset{};  // (x, y, z) in cells; one representative per +-pair
  double weight = 0.0;          // length^d per cut pair
};

class PerimeterStencil {
 public:
  // Face weights dx^d for N4 (exact face count); Cauchy-Crofton angular
  // (solid-angle in 3D) quadrature weights otherwise.
  static PerimeterStencil make(const GridSpec& grid, Neighborhood order);

  Neighborhood order() const { return order_; }
  int d() const { return d_; }
  double dx() const { return dx_; }
  const std::vector<StencilDirection>& directions() const { return dirs_; }

  // Worst relative deviation of the estimated length/area of a flat interface
  // from its true value over all orientations.
  double max_relative_error() const;

 private:
  Neighborhood order_ = Neighborhood::N8;
  int d_ = 1;
  double dx_ = 1.0;
  std::vector<StencilDirection> dirs_;
};

// Number of cut neighbor pairs per stencil direction. Pairs reaching below the
// boundary plane do not exist; neighbors beyond the lateral and top walls
// count as empty.
std::vector<std::int64_t> perimeter_cut_counts(const IndicatorSet& e,
                                               const PerimeterStencil& stencil,
                                               Exec exec = Exec::parallel);

// Discrete relative perimeter P(E, Omega).
double perimeter(const IndicatorSet& e, const PerimeterStencil& stencil,
                 Exec exec = Exec::parallel);

// Full-space perimeter P(E) = P(E, Omega) + H^d(Tr E).
double full_perimeter(const IndicatorSet& e, const PerimeterStencil& stencil);

// Trace integral of beta over the wetted footprint (midpoint rule).
double wetting_energy(const IndicatorSet& e, const BetaField& beta);

// C_beta(E) = P(E, Omega) + integral of beta chi_E over the boundary plane.
double capillary_energy(const IndicatorSet& e, const BetaField& beta,
                        const PerimeterStencil& stencil);

struct EnergyBreakdown {
  double capillary = 0.0;
  double dissipation = 0.0;  // (1/h) integral of d_F over E delta F
  double penalty = 0.0;      // h^{-1/2} | |E| - m0 |
  double total() const { return capillary + dissipation + penalty; }
};

// (1/h) * sum over E delta F of |sd_F| * dx^(d+1).
double dissipation_term(const IndicatorSet& e, const IndicatorSet& f,
                        const ScalarField& sd_f, double h,
                        Exec exec = Exec::parallel);

EnergyBreakdown atw_energy(const IndicatorSet& e, const IndicatorSet& f,
                           const ScalarField& sd_f, double h, double m0,
                           const BetaField& beta,
                           const PerimeterStencil& stencil);

EnergyBreakdown atw_energy(const IndicatorSet& e, const IndicatorSet& f, double h,
                           double m0, const BetaField& beta,
                           const PerimeterStencil& stencil);

}  // namespace capflow
