#include "hz/geom/hyperbolic.hpp"

#include <cmath>
#include <string>

#include "hz/error.hpp"

namespace hz::geom {

namespace {

void require_interior(cplx z) {
  if (!(z.imag() > 0.0)) {
    throw Error(ErrorKind::NonInteriorPoint,
                "point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ") is not in the upper half-plane");
  }
}

}  // namespace

double cosh_distance(cplx x, cplx y) {
  require_interior(x);
  require_interior(y);
  return 1.0 + std::norm(x - y) / (2.0 * x.imag() * y.imag());
}

double hyperbolic_distance(cplx x, cplx y) {
  require_interior(x);
  require_interior(y);
  return hyperbolic_distance_unchecked(x, y);
}

double hyperbolic_distance_unchecked(cplx x, cplx y) {
  // sinh(d/2) = |x - y| / (2 sqrt(Im x Im y)) keeps small distances accurate.
  const double s = std::abs(x - y) / (2.0 * std::sqrt(x.imag() * y.imag()));
  return 2.0 * std::asinh(s);
}

double distance_to_geodesic(cplx z, double center, double radius) {
  const double num = std::abs(std::norm(z - center) - radius * radius);
  return std::asinh(num / (2.0 * radius * z.imag()));
}

double disk_area(double r) { return 2.0 * kPi * (std::cosh(r) - 1.0); }

}  // namespace hz::geom
