#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "capflow/domain.hpp"
#include "capflow/energy.hpp"
#include "capflow/shapes.hpp"
#include "capflow/stepper.hpp"

namespace capflow {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WallContact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BetaSpec {
  enum class Kind { constant, table, ramp };
  Kind kind = Kind::constant;
  double value = 0.0;
  double slope = 0.0;
  std::vector<double> table;

  BetaField build(const GridSpec& grid, double kappa) const;
};

struct StationaryRule {
  std::size_t max_cells = 2;  // |E_{k+1} delta E_k| in cells
  int steps = 50;             // consecutive steps required
};

struct FlowConfig {
  std::string name;
  GridSpec grid;
  double kappa = 0.5;
  std::optional<double> m0;  // defaults to the rasterized initial volume
  double h = 0.0;
  double T = 0.0;
  BetaSpec beta;
  Neighborhood stencil = Neighborhood::N8;
  Shape initial;
  int snapshot_every = 0;  // 0: only the first and last sets
  std::vector<double> sample_times;
  std::optional<StationaryRule> stop_when_stationary;
  std::uint64_t seed = 0;

  // Checks the standing assumptions; throws ConfigError.
  void validate() const;
};

struct Snapshot {
  int k = 0;
  double t = 0.0;
  IndicatorSet set;
};

struct FlowTrace {
  FlowConfig config;
  double m0 = 0.0;
  double p0 = 0.0;  // perimeter(E_0) + trace_area(E_0)
  std::vector<StepRecord> records;
  std::vector<Snapshot> snapshots;  // ascending k, first and last always kept
  bool stationary = false;          // stopped by the stationarity rule

  const Snapshot* snapshot_at(int k) const;
  // E^h_t = E^h_{floor(t/h) h}; the nearest snapshot at or before that step.
  const Snapshot& snapshot_for_time(double t) const;
  const IndicatorSet& final_set() const { return snapshots.back().set; }
};

// Step index of E^h_t.
int step_index(double t, double h);

using StepObserver =
    std::function<void(const IndicatorSet& prev, const IndicatorSet& next,
                       const StepRecord& rec)>;

// Iterates the scheme from the rasterized initial shape up to floor(T/h)
// steps. Throws WallContact when a set reaches the lateral or top boundary of
// the box.
FlowTrace run_flow(const FlowConfig& config, const StepObserver& observer = {});

// Config at refinement level i: dx / sqrt(2)^i and h scaled by
// (dx_i / dx)^h_exponent (h / 2^i by default), same physical box.
FlowConfig refine_config(const FlowConfig& config, int level, double h_exponent = 2.0);

struct StudyLevel {
  double dx = 0.0;
  double h = 0.0;
  FlowTrace trace;
};

struct StudyReport {
  std::vector<double> times;
  std::vector<StudyLevel> levels;
  // diffs[j][i] = |E^{h_i}_t delta E^{h_{i+1}}_t| at times[j].
  std::vector<std::vector<double>> diffs;
  double slack = 0.2;
  bool cauchy_trend() const;
};

// Runs levels 0..levels-1 concurrently and compares consecutive levels at
// T/4, T/2 and T.
StudyReport refine_study(const FlowConfig& config, int levels, double h_exponent = 2.0);

}  // namespace capflow
