#pragma once

#include <optional>
#include <string>
#include <vector>

#include "capflow/domain.hpp"
#include "capflow/flow.hpp"

namespace capflow {

struct CheckEntry {
  enum class Status { pass, fail, report };
  std::string name;
  double value = 0.0;
  std::optional<double> threshold;
  Status status = Status::report;
  int step = -1;  // worst or first violating step, -1 when not step-specific
};

struct DiagnosticsReport {
  std::vector<CheckEntry> entries;

  void add(CheckEntry e) { entries.push_back(std::move(e)); }
  bool all_pass() const;
  const CheckEntry* find(const std::string& name) const;
  // One row per check: name,value,threshold,pass,step.
  std::string to_csv() const;
};

// R(d, kappa) = 4 (d + 1) (2 / kappa)^((d + 1) / 2).
double density_constant(int d, double kappa);

// max d_F over E delta F against R sqrt(h) + dx.
CheckEntry density_check(const IndicatorSet& e, const IndicatorSet& f, double h,
                         double kappa);

// Smallest observed min(|B_r(x) \ E|, |B_r(x) cap E|) / r^(d+1) over sampled
// interface cells x and radii r up to sqrt(h).
double ball_density_constant(const IndicatorSet& e, double h);

// Per-step dissipation (i) and the cumulative bounds (ii) with slack
// 3 * estimator_error * p0.
std::vector<CheckEntry> dissipation_report(const FlowTrace& trace, double p0,
                                           double estimator_error);

// sup over snapshot pairs of |E_t delta E_s| / (p0 sqrt|t - s|).
double holder_modulus(const FlowTrace& trace, double p0);

struct L2Stats {
  double velocity = 0.0;  // sum_k h * sum over interface faces (sd/h)^2 dx^d
  double lambda = 0.0;    // sum_k h * lambda_k^2
  int off_volume = 0;
};
L2Stats velocity_and_multiplier_stats(const FlowTrace& trace);

// Exact off-volume multiplier law and |lambda| <= 1/sqrt(h).
std::vector<CheckEntry> multiplier_checks(const FlowTrace& trace);

// r_t <= r_{t-h} + h |lambda| + 2 dx on every step.
CheckEntry barrier_recursion(const FlowTrace& trace);

struct ElOptions {
  double smoothing_cells = 1.5;  // Gaussian sigma applied before extraction
  double window_cells = 12.0;    // half-width of the curvature fit (d = 1)
  double boundary_margin_cells = 3.0;
};

struct ElResidual {
  double rms = 0.0;
  double mean_curvature = 0.0;  // average H over the sampled vertices
  std::size_t samples = 0;
};

// RMS of H + v - lambda over interface points more than the margin away from
// the boundary plane, with v = (sd_F - sd_E) / h interpolated at the points.
ElResidual el_residual(const IndicatorSet& e, const IndicatorSet& f, double h,
                       double lambda, const ElOptions& options = {});

struct ContactMeasure {
  double x = 0.0;        // contact point on the boundary plane
  double cosine = 0.0;   // nu . (-e_z)
  double beta = 0.0;     // beta at the contact point
};

struct ContactOptions {
  double smoothing_cells = 1.5;  // Gaussian sigma of the indicator
  double skip_cells = 3.0;       // band next to the plane biased by the smoothing
  double window_cells = 24.0;    // height of the fitting band above the skip
};

// Interface direction at each contact point: circle fit of the
// smoothed-indicator contour over a band above the boundary plane, followed
// to its intersection with the plane.
std::vector<ContactMeasure> contact_angles(const IndicatorSet& e, const BetaField& beta,
                                           const ContactOptions& options = {});

struct DiagnoseOptions {
  ElOptions el;
  ContactOptions contact;
  bool assert_contact_angle = false;
  double contact_tolerance = 0.1;
};

// Refinement checks: Cauchy trend of the pairwise differences, Hoelder
// modulus and L2 quantities within a factor 2 across levels, and the
// off-volume time (count times h) nonincreasing in the level.
std::vector<CheckEntry> study_checks(const StudyReport& study);

// All checks over a finished trace.
DiagnosticsReport diagnose(const FlowTrace& trace, const DiagnoseOptions& options = {});

}  // namespace capflow
