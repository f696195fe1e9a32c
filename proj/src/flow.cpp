#include "capflow/flow.hpp"

#include <algorithm>
#include <cmath>

#include "capflow/barriers.hpp"

namespace capflow {

BetaField BetaSpec::build(const GridSpec& grid, double kappa) const {
  switch (kind) {
    case Kind::constant:
      return BetaField::constant(grid, kappa, value);
    case Kind::ramp:
      return BetaField::ramp(grid, kappa, value, slope);
    case Kind::table:
      if (table.size() != grid.bottom_count())
        throw ConfigError("beta table needs one value per bottom cell");
      return BetaField(grid, kappa, table);
  }
  throw ConfigError("unknown beta kind");
}

void FlowConfig::validate() const {
  if (!(kappa > 0.0 && kappa <= 0.5)) throw ConfigError("kappa must lie in (0, 1/2]");
  if (!(h > 0.0 && h < 1.0)) throw ConfigError("h must lie in (0, 1)");
  if (!(T >= 0.0) || !std::isfinite(T)) throw ConfigError("T must be >= 0");
  if (snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  const double box = static_cast<double>(grid.cell_count()) * grid.cell_volume();
  if (m0 && !(*m0 > 0.0 && *m0 < box)) throw ConfigError("m0 must lie in (0, box volume)");
  try {
    (void)beta.build(grid, kappa);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

const Snapshot* FlowTrace::snapshot_at(int k) const {
  for (const auto& s : snapshots)
    if (s.k == k) return &s;
  return nullptr;
}

int step_index(double t, double h) {
  return static_cast<int>(std::floor(t / h + 1e-9));
}

const Snapshot& FlowTrace::snapshot_for_time(double t) const {
  const int k = step_index(t, config.h);
  const Snapshot* best = &snapshots.front();
  for (const auto& s : snapshots)
    if (s.k <= k) best = &s;
  return *best;
}

FlowTrace run_flow(const FlowConfig& config, const StepObserver& observer) {
  config.validate();
  const GridSpec& g = config.grid;
  IndicatorSet e;
  try {
    e = rasterize(config.initial, g);
  } catch (const GridError& err) {
    throw ConfigError(std::string("initial shape: ") + err.what());
  }
  if (e.empty() || e.is_full()) throw ConfigError("initial set is empty or fills the box");
  const double v0 = volume(e);
  if (config.m0 && std::abs(*config.m0 - v0) > g.cell_volume())
    throw ConfigError("m0 differs from the rasterized initial volume by more than one cell");
  if (touches_walls(e)) throw WallContact("initial set touches the box walls");

  const BetaField beta = config.beta.build(g, config.kappa);
  const auto stencil = PerimeterStencil::make(g, config.stencil);

  FlowTrace trace;
  trace.config = config;
  trace.m0 = v0;  // the penalty anchors to a representable volume
  trace.p0 = full_perimeter(e, stencil);

  const double h = config.h;
  const int steps = step_index(config.T, h);
  std::vector<int> wanted;
  for (double t : config.sample_times) wanted.push_back(step_index(t, h));
  auto keep = [&](int k) {
    if (k == 0 || k == steps) return true;
    if (config.snapshot_every > 0 && k % config.snapshot_every == 0) return true;
    return std::find(wanted.begin(), wanted.end(), k) != wanted.end();
  };

  StepRecord r0;
  r0.volume = v0;
  r0.capillary = capillary_energy(e, beta, stencil);
  r0.penalty = 0.0;
  r0.r_t = min_enclosing_cap(e, config.kappa);
  r0.reference_energy = r0.capillary;
  trace.records.push_back(r0);
  trace.snapshots.push_back({0, 0.0, e});

  int quiet = 0;
  for (int k = 1; k <= steps; ++k) {
    StepResult res = step(e, h, trace.m0, beta, stencil);
    res.record.k = k;
    res.record.t = k * h;
    if (touches_walls(res.set))
      throw WallContact("set reached the box walls at step " + std::to_string(k));
    if (observer) observer(e, res.set, res.record);
    const std::size_t moved = res.record.sym_diff_cells;
    trace.records.push_back(res.record);
    e = std::move(res.set);

    bool stop = false;
    if (config.stop_when_stationary) {
      quiet = moved <= config.stop_when_stationary->max_cells ? quiet + 1 : 0;
      stop = quiet >= config.stop_when_stationary->steps;
    }
    if (keep(k) || stop) trace.snapshots.push_back({k, k * h, e});
    if (stop) {
      trace.stationary = true;
      break;
    }
  }
  return trace;
}

FlowConfig refine_config(const FlowConfig& config, int level, double h_exponent) {
  FlowConfig c = config;
  const double f = std::pow(std::sqrt(2.0), level);
  const GridSpec& g = config.grid;
  const double dx = g.dx() / f;
  const Point lo = g.box_lo();
  const Point hi = g.box_hi();
  const int nh = static_cast<int>(std::ceil((hi.x - lo.x) / dx - 1e-9));
  const int nv = static_cast<int>(std::ceil((hi.z - lo.z) / dx - 1e-9));
  // Keep the box centered on the original one.
  const double ox = 0.5 * (lo.x + hi.x) - 0.5 * (nh - 1) * dx;
  const double oy = g.d() == 2 ? 0.5 * (lo.y + hi.y) - 0.5 * (nh - 1) * dx : 0.0;
  c.grid = GridSpec::make(g.d(), dx, nh, nv, {ox, oy});
  c.h = config.h * std::pow(f, -h_exponent);
  c.m0.reset();
  if (config.snapshot_every > 0)
    c.snapshot_every =
        std::max(1, static_cast<int>(std::lround(config.snapshot_every * config.h / c.h)));
  if (c.beta.kind == BetaSpec::Kind::table)
    throw ConfigError("refinement of tabulated beta is not supported");
  return c;
}

bool StudyReport::cauchy_trend() const {
  for (const auto& row : diffs)
    for (std::size_t i = 0; i + 1 < row.size(); ++i)
      if (row[i + 1] > (1.0 + slack) * row[i]) return false;
  return true;
}

StudyReport refine_study(const FlowConfig& config, int levels, double h_exponent) {
  if (levels < 2) throw ConfigError("refinement study needs at least 2 levels");
  StudyReport rep;
  rep.times = {config.T / 4, config.T / 2, config.T};
  std::vector<FlowConfig> cfgs;
  for (int i = 0; i < levels; ++i) {
    FlowConfig c = refine_config(config, i, h_exponent);
    for (double t : rep.times) c.sample_times.push_back(t);
    cfgs.push_back(std::move(c));
  }
  rep.levels.resize(static_cast<std::size_t>(levels));
  std::vector<std::string> errors(static_cast<std::size_t>(levels));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < levels; ++i) {
    try {
      rep.levels[i] = {cfgs[i].grid.dx(), cfgs[i].h, run_flow(cfgs[i])};
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < levels; ++i)
    if (!errors[i].empty())
      throw std::runtime_error("level " + std::to_string(i) + ": " + errors[i]);
  for (double t : rep.times) {
    std::vector<double> row;
    for (int i = 0; i + 1 < levels; ++i)
      row.push_back(cross_grid_sym_diff(rep.levels[i].trace.snapshot_for_time(t).set,
                                        rep.levels[i + 1].trace.snapshot_for_time(t).set));
    rep.diffs.push_back(std::move(row));
  }
  return rep;
}

}  // namespace capflow
