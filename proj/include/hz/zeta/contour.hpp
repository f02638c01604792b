#pragma once

#include <functional>
#include <vector>

#include "hz/conventions.hpp"

namespace hz::zeta {

using ComplexFn = std::function<cplx(cplx)>;

// Winding number of f around the closed polygon through `vertices`. Each
// edge starts with at least `min_steps` pieces no longer than `max_step`,
// bisected until the phase increment between neighbouring samples is below
// pi/4 and f is close to linear on each piece. Throws
// ContourThroughZero when |f| < zero_floor at a sample or the refinement
// cannot resolve the phase.
int winding_number(const ComplexFn& f, const std::vector<cplx>& vertices, double zero_floor = 1e-12,
                   int min_steps = 8, double max_step = 0.05);

int winding_on_circle(const ComplexFn& f, cplx center, double radius, double zero_floor = 1e-12, int points = 64);

// Boundary of the axis-parallel rectangle [lo.re, hi.re] x [lo.im, hi.im],
// counter-clockwise.
std::vector<cplx> rectangle(cplx lo, cplx hi);

}  // namespace hz::zeta
