#pragma once

#include "capflow/domain.hpp"

namespace capflow {

// Spherical cap C_r = B_rho(c) intersected with the upper half-space. Its base
// on z = 0 is the disk of radius r about the horizontal origin, and the outward
// normal along the contact line has vertical component 1 - kappa.
struct CapBarrier {
  double r = 0.0;
  double kappa = 0.5;
  double rho = 0.0;           // ball radius, r / sqrt(2 kappa - kappa^2)
  double center_depth = 0.0;  // rho (1 - kappa), center sits below z = 0

  bool contains(const Point& p) const;
  double apex_height() const { return rho * kappa; }
  // Vertical component of the outward normal at the contact point (r, 0).
  double contact_normal_z() const { return center_depth / rho; }
};

CapBarrier cap_geometry(double r, double kappa);

// Smallest base radius r such that the cap contains p (boundary through p),
// in closed form.
double cap_radius_through(const Point& p, double kappa);

// r_t = inf{ r > 0 : every occupied cell center lies in C_r }, located by
// bisection over the nested cap family to relative tolerance 1e-10.
double min_enclosing_cap(const IndicatorSet& e, double kappa);

struct CapContact {
  bool on_boundary_plane = false;  // extremal cell sits in the bottom row
  std::size_t cell = 0;
};

// The occupied cell that pins r_t, i.e. the one whose cap radius is largest.
CapContact cap_contact(const IndicatorSet& e, double kappa);

}  // namespace capflow
