#pragma once

#include "hz/conventions.hpp"

namespace hz::geom {

// cosh of the hyperbolic distance: 1 + |x-y|^2 / (2 Im x Im y).
// Throws NonInteriorPoint when an imaginary part is not positive.
double cosh_distance(cplx x, cplx y);

double hyperbolic_distance(cplx x, cplx y);

// Same as hyperbolic_distance without the interior check; for hot loops whose
// points are known to lie in the upper half-plane.
double hyperbolic_distance_unchecked(cplx x, cplx y);

// Distance from z to the geodesic |w - center| = radius (a half-circle
// orthogonal to R): sinh d = ||z-center|^2 - radius^2| / (2 radius Im z).
double distance_to_geodesic(cplx z, double center, double radius);

// Hyperbolic area of a disk of radius r.
double disk_area(double r);

}  // namespace hz::geom
