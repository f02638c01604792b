#pragma once

#include <functional>
#include <vector>

#include "hz/geom/schottky.hpp"

namespace hz::geom {

struct DomainQuadratureOptions {
  double rel_tol = 1e-8;       // outer (tanh-sinh) tolerance; the inner Gauss-Kronrod one is 1e-3 of it
  int theta_subpanels = 4;     // resolution: pieces per angular panel
  double radial_panel = 1.0;   // resolution: initial radial panel width
  unsigned max_depth = 12;     // inner (radial) bisection depth
  std::size_t outer_depth = 10;  // outer (angular) tanh-sinh refinement levels
  // Relative tolerance for the funnel tail; 0 disables TailDominates.
  double tail_tol = 0.0;
  int threads = 0;             // 0: process default
};

struct DomainQuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // reported by the adaptive rule
  double tail_estimate = 0.0;   // max |f| on the sphere of radius R, times e^R
  std::size_t panels = 0;
};

// Angular panel of geodesic polar coordinates about the base point. Along each
// ray the fundamental domain is an initial segment [0, r_exit(theta)) since F
// is an intersection of half-planes containing the base point.
struct AngularPanel {
  double theta_lo = 0.0;
  double theta_hi = 0.0;
  bool open = true;  // r_exit >= R on the whole panel
};

// Point at geodesic polar coordinates (r, theta) about p.
cplx polar_point(cplx p, double r, double theta);

// Distance from the base point to the boundary of F along direction theta
// (infinity for rays that end in a free boundary arc).
double exit_radius(const SchottkyData& group, double theta);

std::vector<AngularPanel> angular_panels(const SchottkyData& group, double R);

// Integral of `integrand` over F intersected with the hyperbolic disk of radius R
// about the base point in geodesic polar coordinates: tanh-sinh over the angle,
// adaptive Gauss-Kronrod along each ray.
// Panels are evaluated concurrently and summed in fixed order.
DomainQuadratureResult domain_quadrature(const SchottkyData& group, const std::function<double(cplx)>& integrand,
                                         double R, const DomainQuadratureOptions& options = {});

}  // namespace hz::geom
