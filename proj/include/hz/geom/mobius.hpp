#pragma once

#include <optional>

#include "hz/conventions.hpp"

namespace hz::geom {

// Element of SL(2,R) acting on the upper half-plane by z -> (az+b)/(cz+d).
struct MobiusMap {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  static MobiusMap identity() { return {}; }

  double det() const;
  double trace() const { return a + d; }

  MobiusMap inverse() const { return {d, -b, -c, a}; }

  // Im(gz) = Im z / |cz+d|^2 for unit determinant; computing it this way keeps
  // images of long words strictly inside the half-plane.
  cplx apply(cplx z) const {
    const double qr = c * z.real() + d, qi = c * z.imag();
    const double n = qr * qr + qi * qi;
    const double pr = a * z.real() + b, pi = a * z.imag();
    return {(pr * qr + pi * qi) / n, z.imag() / n};
  }

  // Action on the boundary R u {inf}; nullopt stands for infinity.
  std::optional<double> apply_boundary(std::optional<double> x) const;

  // Complex derivative 1/(cz+d)^2.
  cplx derivative(cplx z) const {
    const cplx q = c * z + d;
    return 1.0 / (q * q);
  }

  bool is_hyperbolic() const;

  // Translation length 2 arccosh(|tr|/2).
  double translation_length() const;

  // Attracting fixed point on R (for hyperbolic maps with c != 0 or a != d).
  std::optional<double> attracting_fixed_point() const;

  // Divides by sqrt|det| when the determinant has drifted more than 1e-13
  // beyond the rounding floor of the entries.
  MobiusMap renormalized() const;
};

MobiusMap operator*(const MobiusMap& x, const MobiusMap& y);

// arccosh with the argument clamped to 1 when it lies within 1e-14 below 1.
double guarded_acosh(double x);

// 2 arccosh(|tr|/2), computed without cancellation for large traces.
double length_from_trace(double trace);

}  // namespace hz::geom
