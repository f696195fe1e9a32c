#pragma once

#include <cstddef>

#include "capflow/distance.hpp"
#include "capflow/domain.hpp"
#include "capflow/energy.hpp"
#include "capflow/mincut.hpp"

namespace capflow {

struct StepRecord {
  int k = 0;
  double t = 0.0;
  double lambda = 0.0;
  double volume = 0.0;
  double capillary = 0.0;
  double dissipation = 0.0;
  double penalty = 0.0;
  bool off_volume = false;
  double r_t = 0.0;

  double reference_energy = 0.0;    // F^h(F, F)
  double quantum = 0.0;             // integer cost unit of the cut problems
  double max_distance_moved = 0.0;  // max d_F over E delta F
  std::size_t sym_diff_cells = 0;
  double velocity_sq = 0.0;  // sum over interface faces of (sd_F/h)^2 dx^d
  int cut_solves = 0;
  double seconds = 0.0;

  double energy() const { return capillary + dissipation + penalty; }
};

struct StepOptions {
  CutOptions cut;
  // Accept an empty or full minimizer instead of throwing DegenerateSet.
  bool allow_degenerate = false;
};

struct StepResult {
  IndicatorSet set;
  StepRecord record;
};

// One minimizing-movements step: minimizes F^h(., F) over the sets produced by
// the slope sweep E_mu of the linearized problem plus F itself.
StepResult step(const IndicatorSet& f, double h, double m0, const BetaField& beta,
                const PerimeterStencil& stencil, const StepOptions& options = {});

// v^h = sd_F / h. E only fixes the grid.
ScalarField discrete_velocity(const IndicatorSet& e, const IndicatorSet& f, double h);

// Sum over in-domain faces of the interface of E of v^2 dx^d, with v the mean
// of sd_F/h on the two cells sharing the face.
double interface_velocity_sq(const IndicatorSet& e, const ScalarField& sd_f, double h);

}  // namespace capflow
