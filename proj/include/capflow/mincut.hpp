#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "capflow/distance.hpp"
#include "capflow/domain.hpp"
#include "capflow/energy.hpp"

namespace capflow {

class CapacityOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CutOptions {
  // Integer quantum as a fraction of the largest single cost.
  double quantum_ratio = 1e-12;
  // Negative control for oracle harnesses: flips one cell of every solution.
  bool corrupt_for_testing = false;
};

// The step energy linearized in the volume,
//   C_beta(E) + (1/h) sum_E sd_F dx^(d+1) + mu |E|,
// encoded as a submodular binary problem with integer costs. Unary costs are
// quantized once so that every slope in [-mu_bound, mu_bound] shares the
// same integer model; the slope enters as a uniform integer offset per cell.
class LinearizedProblem {
 public:
  LinearizedProblem(const IndicatorSet& f, const ScalarField& sd_f, double h,
                    const BetaField& beta, const PerimeterStencil& stencil,
                    double mu_bound, CutOptions options = {});

  const GridSpec& grid() const { return grid_; }
  double quantum() const { return quantum_; }
  std::int64_t slope_units(double mu) const;
  double slope_value(std::int64_t units) const;
  std::int64_t max_slope_units() const { return max_units_; }

  // Minimal global minimizer at the given slope.
  IndicatorSet solve(std::int64_t units) const;
  // Minimal minimizer among sets S with lower <= S <= upper.
  IndicatorSet solve(std::int64_t units, const IndicatorSet& lower,
                     const IndicatorSet& upper) const;

  // Quantized energy of E at the given slope, relative to the empty set.
  std::int64_t energy(const IndicatorSet& e, std::int64_t units) const;

 private:
  GridSpec grid_;
  std::vector<std::array<int, 3>> offsets_;
  std::vector<std::int64_t> pair_weight_;  // per stencil direction
  std::vector<std::int64_t> unary_;        // cost of being inside, slope excluded
  double quantum_ = 0.0;
  std::int64_t max_units_ = 0;
  CutOptions options_;
};

// Global minimal minimizer of C_beta(E) + (1/h) integral_E sd_F + mu |E|.
IndicatorSet solve_linearized(const IndicatorSet& f, double mu, double h,
                              const BetaField& beta,
                              const PerimeterStencil& stencil,
                              CutOptions options = {});

}  // namespace capflow
