#include "capflow/mincut.hpp"

#include <algorithm>
#include <cmath>

#include "capflow/maxflow.hpp"

namespace capflow {

namespace {

constexpr double kCapacityBudget = 4.0e18;  // below 2^62

}  // namespace

LinearizedProblem::LinearizedProblem(const IndicatorSet& f, const ScalarField& sd_f,
                                     double h, const BetaField& beta,
                                     const PerimeterStencil& stencil,
                                     double mu_bound, CutOptions options)
    : grid_(f.grid()), options_(options) {
  require_same_grid(grid_, sd_f.grid);
  if (!(h > 0.0)) throw std::invalid_argument("linearized problem: h must be > 0");
  if (beta.values().size() != grid_.bottom_count())
    throw GridError("linearized problem: beta sampled on a different grid");
  if (stencil.d() != grid_.d() || stencil.dx() != grid_.dx())
    throw GridError("linearized problem: stencil built for a different grid");

  const std::size_t n = grid_.cell_count();
  const double cv = grid_.cell_volume();
  const double fa = grid_.face_area();
  const auto& dirs = stencil.directions();

  std::vector<double> unary(n);
  double max_pair = 0.0;
  for (const auto& dir : dirs) max_pair = std::max(max_pair, dir.weight);

#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    const CellIndex c = grid_.cell(i);
    double a = sd_f.values[i] * cv / h;
    if (c.iz == 0) a += beta.at_bottom(i) * fa;
    // Neighbors across the lateral or top walls are empty.
    for (const auto& dir : dirs) {
      const auto& o = dir.offset;
      for (int sgn : {1, -1}) {
        const int jx = c.ix + sgn * o[0];
        const int jy = c.iy + sgn * o[1];
        const int jz = c.iz + sgn * o[2];
        if (!grid_.in_grid(jx, jy, jz) && jz >= 0) a += dir.weight;
      }
    }
    unary[i] = a;
  }
  double max_unary = 0.0;
  for (double a : unary) max_unary = std::max(max_unary, std::abs(a));
  const double mu_cost = std::abs(mu_bound) * cv;
  const double max_cost = std::max(max_unary + mu_cost, max_pair);
  if (!(max_cost > 0.0) || !std::isfinite(max_cost))
    throw CapacityOverflow("linearized problem: costs are not finite");
  quantum_ = options_.quantum_ratio * max_cost;

  unary_.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    unary_[i] = std::llround(unary[i] / quantum_);
    total += std::abs(static_cast<double>(unary_[i]));
  }
  max_units_ = std::llround(mu_cost / quantum_);
  total += static_cast<double>(n) * static_cast<double>(max_units_);
  for (const auto& dir : dirs) {
    offsets_.push_back(dir.offset);
    pair_weight_.push_back(std::llround(dir.weight / quantum_));
    total += 2.0 * static_cast<double>(n) * static_cast<double>(pair_weight_.back());
  }
  if (total > kCapacityBudget)
    throw CapacityOverflow("linearized problem: integer capacities overflow; quantum too fine");
}

std::int64_t LinearizedProblem::slope_units(double mu) const {
  return std::llround(mu * grid_.cell_volume() / quantum_);
}

double LinearizedProblem::slope_value(std::int64_t units) const {
  return static_cast<double>(units) * quantum_ / grid_.cell_volume();
}

IndicatorSet LinearizedProblem::solve(std::int64_t units) const {
  return solve(units, IndicatorSet(grid_), IndicatorSet::full(grid_));
}

IndicatorSet LinearizedProblem::solve(std::int64_t units, const IndicatorSet& lower,
                                      const IndicatorSet& upper) const {
  require_same_grid(grid_, lower.grid());
  require_same_grid(grid_, upper.grid());
  const std::size_t n = grid_.cell_count();
  std::vector<int> node(n, -1);
  int free_count = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (upper.contains(i) && !lower.contains(i)) node[i] = free_count++;

  IndicatorSet out = lower;
  if (free_count > 0) {
    MaxFlowGraph graph(free_count, free_count * static_cast<int>(offsets_.size()));
    graph.add_nodes(free_count);
    for (std::size_t i = 0; i < n; ++i) {
      const int ni = node[i];
      if (ni < 0) continue;
      const CellIndex c = grid_.cell(i);
      std::int64_t in_cost = unary_[i] + units;
      std::int64_t out_cost = 0;
      for (std::size_t k = 0; k < offsets_.size(); ++k) {
        const auto& o = offsets_[k];
        const std::int64_t w = pair_weight_[k];
        for (int sgn : {1, -1}) {
          const int jx = c.ix + sgn * o[0];
          const int jy = c.iy + sgn * o[1];
          const int jz = c.iz + sgn * o[2];
          if (!grid_.in_grid(jx, jy, jz)) continue;
          const std::size_t j = grid_.index(jx, jy, jz);
          const int nj = node[j];
          if (nj >= 0) {
            if (sgn == 1) graph.add_edge(ni, nj, w, w);
          } else if (lower.contains(j)) {
            out_cost += w;
          } else {
            in_cost += w;
          }
        }
      }
      const std::int64_t diff = in_cost - out_cost;
      if (diff > 0)
        graph.add_terminal(ni, 0, diff);
      else if (diff < 0)
        graph.add_terminal(ni, -diff, 0);
    }
    graph.maxflow();
    for (std::size_t i = 0; i < n; ++i)
      if (node[i] >= 0 && graph.in_source_set(node[i])) out.set(i, true);
  }
  if (options_.corrupt_for_testing) {
    // Toggle the cell that most increases the quantized energy.
    out.set(0, !out.contains(0));
  }
  return out;
}

std::int64_t LinearizedProblem::energy(const IndicatorSet& e, std::int64_t units) const {
  require_same_grid(grid_, e.grid());
  __int128 s = 0;
  const std::size_t n = grid_.cell_count();
  for (std::size_t i = 0; i < n; ++i) {
    const bool in = e.contains(i);
    if (in) s += unary_[i] + units;
    const CellIndex c = grid_.cell(i);
    for (std::size_t k = 0; k < offsets_.size(); ++k) {
      const auto& o = offsets_[k];
      const int jx = c.ix + o[0];
      const int jy = c.iy + o[1];
      const int jz = c.iz + o[2];
      if (!grid_.in_grid(jx, jy, jz)) continue;
      if (in != e.contains(grid_.index(jx, jy, jz))) s += pair_weight_[k];
    }
  }
  return static_cast<std::int64_t>(s);
}

IndicatorSet solve_linearized(const IndicatorSet& f, double mu, double h,
                              const BetaField& beta, const PerimeterStencil& stencil,
                              CutOptions options) {
  const ScalarField sd = signed_distance(f);
  const LinearizedProblem problem(f, sd, h, beta, stencil, mu, options);
  return problem.solve(problem.slope_units(mu));
}

}  // namespace capflow
