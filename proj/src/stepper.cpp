#include "capflow/stepper.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "capflow/barriers.hpp"

namespace capflow {

namespace {

struct Candidate {
  IndicatorSet set;
  double mu = 0.0;
};

constexpr std::size_t kMaxEnumerated = 16;
constexpr std::size_t kMaxRefined = 4096;

// Best set between adjacent sweep solutions inner <= E <= outer. The cells of
// outer \ inner split into stencil-connected components that do not interact,
// so the capillary and dissipation change is separable; each component is
// tabulated by cardinality (exhaustively when small, by greedy peeling
// otherwise) and a knapsack over the total count picks the volume.
IndicatorSet fill_bracket(const IndicatorSet& inner, const IndicatorSet& outer,
                          const ScalarField& sd, double h, double m0,
                          const BetaField& beta, const PerimeterStencil& stencil) {
  const GridSpec& g = inner.grid();
  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (outer.contains(i) && !inner.contains(i)) free_cells.push_back(i);
  if (free_cells.empty() || free_cells.size() > kMaxRefined) return inner;

  const auto& dirs = stencil.directions();
  const double cv = g.cell_volume();
  std::vector<int> local(g.cell_count(), -1);
  for (std::size_t k = 0; k < free_cells.size(); ++k) local[free_cells[k]] = static_cast<int>(k);

  // Neighbor walk over both orientations of every stencil family.
  auto for_neighbors = [&](std::size_t i, auto&& fn) {
    const CellIndex c = g.cell(i);
    for (const auto& dir : dirs) {
      for (int sgn : {1, -1}) {
        const int jx = c.ix + sgn * dir.offset[0];
        const int jy = c.iy + sgn * dir.offset[1];
        const int jz = c.iz + sgn * dir.offset[2];
        if (jz < 0) continue;
        if (!g.in_grid(jx, jy, jz)) {
          fn(-1, false, dir.weight);
          continue;
        }
        const std::size_t j = g.index(jx, jy, jz);
        fn(local[j], inner.contains(j), dir.weight);
      }
    }
  };

  // Unary cost of adding a free cell with every other free cell left out.
  std::vector<double> unary(free_cells.size());
  for (std::size_t k = 0; k < free_cells.size(); ++k) {
    const std::size_t i = free_cells[k];
    double a = sd.values[i] * cv / h;
    if (g.cell(i).iz == 0) a += beta.at_bottom(i) * g.face_area();
    for_neighbors(i, [&](int, bool in, double w) { a += in ? -w : w; });
    unary[k] = a;
  }

  // Components of the free cells.
  std::vector<int> comp(free_cells.size(), -1);
  std::vector<std::vector<int>> comps;
  for (std::size_t s = 0; s < free_cells.size(); ++s) {
    if (comp[s] >= 0) continue;
    comps.emplace_back();
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = static_cast<int>(comps.size()) - 1;
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      comps.back().push_back(k);
      for_neighbors(free_cells[k], [&](int j, bool, double) {
        if (j >= 0 && comp[j] < 0) {
          comp[j] = comp[s];
          stack.push_back(j);
        }
      });
    }
  }

  // Energy change of switching on `members` (local ids flagged in `on`):
  // unaries plus twice the weight of each internal pair with both ends on.
  std::vector<char> on(free_cells.size(), 0);
  auto delta = [&](const std::vector<int>& members) {
    double e = 0.0;
    for (int k : members) {
      if (!on[k]) continue;
      e += unary[k];
      for_neighbors(free_cells[k], [&](int j, bool, double w) {
        if (j >= 0 && on[j]) e -= w;
      });
    }
    return e;
  };

  // table[c][n] = best change using n cells of component c; choice bitmaps.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> table(comps.size());
  std::vector<std::vector<std::vector<int>>> pick(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& members = comps[c];
    const std::size_t n = members.size();
    table[c].assign(n + 1, inf);
    pick[c].assign(n + 1, {});
    if (n <= kMaxEnumerated) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (std::size_t b = 0; b < n; ++b) on[members[b]] = (mask >> b) & 1u;
        const double e = delta(members);
        const int cnt = std::popcount(mask);
        if (e < table[c][cnt]) {
          table[c][cnt] = e;
          pick[c][cnt].clear();
          for (std::size_t b = 0; b < n; ++b)
            if ((mask >> b) & 1u) pick[c][cnt].push_back(members[b]);
        }
      }
      for (int k : members) on[k] = 0;
    } else {
      for (int k : members) on[k] = 1;
      std::vector<int> kept = members;
      table[c][n] = delta(members);
      pick[c][n] = kept;
      for (std::size_t cnt = n; cnt-- > 0;) {
        std::size_t best_pos = 0;
        double best_e = inf;
        for (std::size_t p = 0; p < kept.size(); ++p) {
          on[kept[p]] = 0;
          const double e = delta(members);
          on[kept[p]] = 1;
          if (e < best_e) {
            best_e = e;
            best_pos = p;
          }
        }
        on[kept[best_pos]] = 0;
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(best_pos));
        table[c][cnt] = best_e;
        pick[c][cnt] = kept;
      }
      for (int k : members) on[k] = 0;
    }
  }

  // Knapsack over components: best[n] after each component, with choices.
  const std::size_t total = free_cells.size();
  std::vector<double> best(total + 1, inf);
  best[0] = 0.0;
  std::vector<std::vector<int>> choice(comps.size(), std::vector<int>(total + 1, -1));
  std::size_t reach = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    std::vector<double> next(total + 1, inf);
    const std::size_t n = comps[c].size();
    for (std::size_t a = 0; a <= reach; ++a) {
      if (best[a] == inf) continue;
      for (std::size_t b = 0; b <= n; ++b) {
        const double v = best[a] + table[c][b];
        if (v < next[a + b]) {
          next[a + b] = v;
          choice[c][a + b] = static_cast<int>(b);
        }
      }
    }
    reach += n;
    best = std::move(next);
  }

  const double base = volume(inner);
  std::size_t best_n = 0;
  double best_total = inf;
  for (std::size_t n = 0; n <= total; ++n) {
    const double v = best[n] + std::abs(base + static_cast<double>(n) * cv - m0) / std::sqrt(h);
    if (v < best_total) {
      best_total = v;
      best_n = n;
    }
  }

  IndicatorSet out = inner;
  std::size_t n = best_n;
  for (std::size_t c = comps.size(); c-- > 0;) {
    const int b = choice[c][n];
    for (int k : pick[c][static_cast<std::size_t>(b)]) out.set(free_cells[k], true);
    n -= static_cast<std::size_t>(b);
  }
  return out;
}

}  // namespace

StepResult step(const IndicatorSet& f, double h, double m0, const BetaField& beta,
                const PerimeterStencil& stencil, const StepOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("step: h must lie in (0, 1)");
  const GridSpec& g = f.grid();
  const double cv = g.cell_volume();
  if (!(m0 > 0.0 && m0 < static_cast<double>(g.cell_count()) * cv))
    throw std::invalid_argument("step: m0 must lie in (0, box volume)");

  const ScalarField sd = signed_distance(f);
  const double bound = 1.0 / std::sqrt(h);
  const LinearizedProblem problem(f, sd, h, beta, stencil, bound, options.cut);
  const std::int64_t top = problem.max_slope_units();
  const double tol = 0.5 * cv;

  std::vector<Candidate> cands;
  int solves = 0;
  IndicatorSet small;
  IndicatorSet large;
#pragma omp parallel sections
  {
#pragma omp section
    small = problem.solve(top);
#pragma omp section
    large = problem.solve(-top);
  }
  solves += 2;
  const double v_small = volume(small);
  const double v_large = volume(large);
  auto mu_of = [&](std::int64_t units) { return problem.slope_value(units); };
  double last_mu = 0.0;

  if (v_small >= m0 - tol) {
    cands.push_back({small, mu_of(top)});
    last_mu = mu_of(top);
  } else if (v_large <= m0 + tol) {
    cands.push_back({large, mu_of(-top)});
    last_mu = mu_of(-top);
  } else {
    // volume(E_mu) is nonincreasing in mu: large at lo, small at hi.
    std::int64_t lo = -top;
    std::int64_t hi = top;
    IndicatorSet e_lo = large;
    IndicatorSet e_hi = small;
    cands.push_back({large, mu_of(lo)});
    cands.push_back({small, mu_of(hi)});
    const double range = (v_large - v_small) / cv;
    const int max_iter =
        std::max(60, static_cast<int>(std::ceil(std::log2(std::max(range, 2.0)))));
    bool hit = false;
    for (int it = 0; it < max_iter && hi - lo > 1; ++it) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      IndicatorSet e_mid = problem.solve(mid, e_hi, e_lo);
      ++solves;
      const double v = volume(e_mid);
      last_mu = mu_of(mid);
      cands.push_back({e_mid, last_mu});
      if (std::abs(v - m0) <= tol) {
        hit = true;
        // Every slope in an interval reproduces the target volume; report
        // its midpoint. Its ends are found by bisection on either side.
        std::int64_t a = lo;
        std::int64_t b = mid;
        IndicatorSet e_a = e_lo;
        IndicatorSet e_b = e_mid;
        while (b - a > 1) {
          const std::int64_t c = a + (b - a) / 2;
          IndicatorSet e_c = problem.solve(c, e_b, e_a);
          ++solves;
          if (std::abs(volume(e_c) - m0) <= tol) {
            b = c;
            e_b = std::move(e_c);
          } else {
            a = c;
            e_a = std::move(e_c);
          }
        }
        const std::int64_t first = b;
        cands.push_back({e_b, 0.0});
        a = mid;
        b = hi;
        e_a = e_mid;
        e_b = e_hi;
        while (b - a > 1) {
          const std::int64_t c = a + (b - a) / 2;
          IndicatorSet e_c = problem.solve(c, e_b, e_a);
          ++solves;
          if (std::abs(volume(e_c) - m0) <= tol) {
            a = c;
            e_a = std::move(e_c);
          } else {
            b = c;
            e_b = std::move(e_c);
          }
        }
        cands.push_back({e_a, 0.0});
        last_mu = 0.5 * (mu_of(first) + mu_of(a));
        for (auto& cand : cands)
          if (std::abs(volume(cand.set) - m0) <= tol) cand.mu = last_mu;
        break;
      }
      if (v > m0) {
        lo = mid;
        e_lo = std::move(e_mid);
      } else {
        hi = mid;
        e_hi = std::move(e_mid);
      }
    }
    if (!hit) {
      // The volume jumps across m0 between adjacent slopes.
      last_mu = 0.5 * (mu_of(lo) + mu_of(hi));
      cands.push_back({fill_bracket(e_hi, e_lo, sd, h, m0, beta, stencil), last_mu});
    }
  }
  cands.push_back({f, last_mu});

  std::size_t best = 0;
  EnergyBreakdown best_energy;
  double best_total = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const auto en = atw_energy(cands[c].set, f, sd, h, m0, beta, stencil);
    if (en.total() < best_total) {
      best_total = en.total();
      best_energy = en;
      best = c;
    }
  }
  const Candidate& chosen = cands[best];
  if (!options.allow_degenerate && (chosen.set.empty() || chosen.set.is_full()))
    throw DegenerateSet("step: minimizer is empty or fills the grid");

  StepResult out{chosen.set, {}};
  StepRecord& rec = out.record;
  rec.volume = volume(chosen.set);
  rec.capillary = best_energy.capillary;
  rec.dissipation = best_energy.dissipation;
  rec.penalty = best_energy.penalty;
  rec.off_volume = std::abs(rec.volume - m0) > tol;
  if (rec.off_volume) {
    rec.lambda = m0 > rec.volume ? bound : -bound;
  } else {
    rec.lambda = std::clamp(-chosen.mu, -bound, bound);
  }
  rec.reference_energy = atw_energy(f, f, sd, h, m0, beta, stencil).total();
  rec.quantum = problem.quantum();
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (chosen.set.contains(i) == f.contains(i)) continue;
    ++rec.sym_diff_cells;
    rec.max_distance_moved = std::max(rec.max_distance_moved, std::abs(sd.values[i]));
  }
  rec.velocity_sq = interface_velocity_sq(chosen.set, sd, h);
  rec.r_t = chosen.set.empty() ? 0.0 : min_enclosing_cap(chosen.set, beta.kappa());
  rec.cut_solves = solves;
  rec.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ScalarField discrete_velocity(const IndicatorSet& e, const IndicatorSet& f, double h) {
  require_same_grid(e.grid(), f.grid());
  if (!(h > 0.0)) throw std::invalid_argument("discrete_velocity: h must be > 0");
  ScalarField v = signed_distance(f);
  for (double& x : v.values) x /= h;
  return v;
}

double interface_velocity_sq(const IndicatorSet& e, const ScalarField& sd_f, double h) {
  require_same_grid(e.grid(), sd_f.grid);
  const GridSpec& g = e.grid();
  const int axes = g.d() + 1;
  const int dirs[3][3] = {{1, 0, 0}, {0, 0, 1}, {0, 1, 0}};
  double s = 0.0;
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    const CellIndex c = g.cell(i);
    for (int a = 0; a < axes; ++a) {
      const int jx = c.ix + dirs[a][0];
      const int jy = c.iy + dirs[a][1];
      const int jz = c.iz + dirs[a][2];
      if (!g.in_grid(jx, jy, jz)) continue;
      const std::size_t j = g.index(jx, jy, jz);
      if (e.contains(i) == e.contains(j)) continue;
      const double v = 0.5 * (sd_f.values[i] + sd_f.values[j]) / h;
      s += v * v;
    }
  }
  return s * g.face_area();
}

}  // namespace capflow
