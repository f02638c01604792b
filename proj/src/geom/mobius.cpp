#include "hz/geom/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hz::geom {

std::optional<double> MobiusMap::apply_boundary(std::optional<double> x) const {
  if (!x) {
    if (c == 0.0) return std::nullopt;
    return a / c;
  }
  const double den = c * *x + d;
  if (den == 0.0) return std::nullopt;
  return (a * *x + b) / den;
}

double MobiusMap::det() const {
  // Kahan's fma-based 2x2 determinant.
  const double w = b * c;
  const double e = std::fma(-b, c, w);
  const double f = std::fma(a, d, -w);
  return f + e;
}

bool MobiusMap::is_hyperbolic() const { return std::abs(trace()) > 2.0; }

double MobiusMap::translation_length() const { return length_from_trace(trace()); }

std::optional<double> MobiusMap::attracting_fixed_point() const {
  const double tr = trace();
  if (std::abs(tr) <= 2.0) return std::nullopt;
  if (c == 0.0) {
    // z -> (a z + b)/d: attracting point is infinity when |a| > |d|.
    if (std::abs(a) > std::abs(d)) return std::nullopt;
    return b / (d - a);
  }
  // Fixed points solve c z^2 + (d - a) z - b = 0; the attracting one has
  // |cz + d| > 1.
  const double disc = std::sqrt(tr * tr - 4.0);
  const double z1 = (a - d + disc) / (2.0 * c);
  const double z2 = (a - d - disc) / (2.0 * c);
  return std::abs(c * z1 + d) > std::abs(c * z2 + d) ? z1 : z2;
}

MobiusMap MobiusMap::renormalized() const {
  const double dt = det();
  // The stored entries carry rounding of order eps*|entry|, so for long words
  // the determinant can only be checked against that floor.
  const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (std::abs(a * d) + std::abs(b * c));
  if (std::abs(dt - 1.0) <= std::max(1e-13, floor)) return *this;
  const double s = std::sqrt(std::abs(dt));
  return {a / s, b / s, c / s, d / s};
}

MobiusMap operator*(const MobiusMap& x, const MobiusMap& y) {
  MobiusMap r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  return r.renormalized();
}

double guarded_acosh(double x) {
  if (x < 1.0 && x > 1.0 - 1e-14) x = 1.0;
  return std::acosh(x);
}

double length_from_trace(double trace) {
  const double h = std::abs(trace) / 2.0;
  return 2.0 * guarded_acosh(h);
}

}  // namespace hz::geom
